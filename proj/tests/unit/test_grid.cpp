#include <doctest.h>

#include "dilab/error.hpp"
#include "dilab/fft.hpp"
#include "dilab/grid.hpp"
#include "helpers.hpp"

using namespace dilab;
using testing::field;
using testing::pi;

TEST_CASE("sphere measures") {
  CHECK(unit_sphere_measure(1) == doctest::Approx(2.0));
  CHECK(unit_sphere_measure(2) == doctest::Approx(2.0 * pi));
  CHECK(unit_sphere_measure(3) == doctest::Approx(4.0 * pi));
  CHECK(unit_sphere_measure(4) == doctest::Approx(2.0 * pi * pi));
  CHECK(unit_sphere_measure(5) == doctest::Approx(8.0 * pi * pi / 3.0));
}

TEST_CASE("cartesian nodes avoid the origin and weights sum to the box") {
  auto g = build_grid(GridMode::cartesian, 1, 5.0, 64);
  CHECK(g->spacing() == doctest::Approx(10.0 / 64));
  CHECK(g->axis()[0] == doctest::Approx(-5.0 + g->spacing() / 2));
  CHECK(g->radius().minCoeff() > 0.0);
  CHECK(g->weights().sum() == doctest::Approx(10.0).epsilon(1e-14));
  auto g2 = build_grid(GridMode::cartesian, 2, 3.0, 16);
  CHECK(g2->size() == 256);
  CHECK(g2->weights().sum() == doctest::Approx(36.0).epsilon(1e-14));
  // row-major: node i * N + j holds (x_i, y_j)
  CHECK(g2->coordinate(0)[1 * 16 + 5] == doctest::Approx(g2->axis()[1]));
  CHECK(g2->coordinate(1)[1 * 16 + 5] == doctest::Approx(g2->axis()[5]));
}

TEST_CASE("radial weights integrate r^2 with the midpoint error") {
  const double L = 7.0;
  const int N = 70;
  auto g = build_grid(GridMode::radial, 3, L, N);
  const double h = L / N;
  const double expect = 4.0 * pi * (L * L * L / 3.0 - h * h * L / 12.0);
  CHECK(g->weights().sum() == doctest::Approx(expect).epsilon(1e-13));
}

TEST_CASE("gaussian integrals") {
  auto g3 = build_grid(GridMode::radial, 3, 10.0, 1000);
  auto f3 = field(g3, [](double r, double) { return std::exp(-r * r / 2.0); });
  CHECK(f3.mass() == doctest::Approx(std::pow(pi, 1.5)).epsilon(1e-9));
  auto g2 = build_grid(GridMode::cartesian, 2, 8.0, 64);
  auto f2 = field(g2, [](double x, double y) { return std::exp(-(x * x + y * y) / 2.0); });
  CHECK(f2.mass() == doctest::Approx(pi).epsilon(1e-12));
  CHECK(integrate(*g2, RealVector(f2.values.cwiseAbs2()), Region::ball(8.0)) ==
        doctest::Approx(pi).epsilon(1e-12));
}

TEST_CASE("regions and tails") {
  CHECK(Region::ball(2.0).contains(1.9));
  CHECK_FALSE(Region::ball(2.0).contains(2.1));
  CHECK_FALSE(Region::annulus(2.0).contains(1.0));
  CHECK(Region::annulus(2.0).contains(3.0));
  auto g = build_grid(GridMode::radial, 3, 10.0, 100);
  CHECK(outer_mask(*g, 0.1).count() == 10);
  CHECK(zero_field(g).tail_fraction() == 0.0);
  auto flat = field(g, [](double, double) { return 1.0; });
  const double outer = 4.0 * pi * (1000.0 - 729.0) / 3.0;
  CHECK(flat.tail_mass(0.1) == doctest::Approx(outer).epsilon(1e-3));
}

TEST_CASE("bad grids are rejected") {
  CHECK_THROWS_AS(build_grid(GridMode::cartesian, 3, 1.0, 8), Error);
  CHECK_THROWS_AS(build_grid(GridMode::radial, 3, -1.0, 8), Error);
  CHECK_THROWS_AS(parse_grid_mode("polar"), Error);
}

TEST_CASE("spectral gradient of a lattice mode is exact") {
  const double L = 4.0;
  auto g = build_grid(GridMode::cartesian, 2, L, 32);
  const double xi = 3.0 / (2.0 * L), eta = -2.0 / (2.0 * L);
  auto u = field(g, [&](double x, double y) { return std::polar(1.0, 2.0 * pi * (xi * x + eta * y)); });
  auto grad = gradient(u);
  CHECK(testing::max_abs(grad[0].values - cplx(0, 2 * pi * xi) * u.values) < 1e-11);
  CHECK(testing::max_abs(grad[1].values - cplx(0, 2 * pi * eta) * u.values) < 1e-11);
  auto sq = gradient_sq(u);
  CHECK((sq.values.array() - 4 * pi * pi * (xi * xi + eta * eta)).abs().maxCoeff() < 1e-10);
}

TEST_CASE("radial derivative is fourth order") {
  auto err = [](int N) {
    auto g = build_grid(GridMode::radial, 3, 8.0, N);
    auto u = field(g, [](double r, double) { return std::exp(-r * r); });
    auto du = radial_derivative(u);
    double e = 0.0;
    for (Eigen::Index i = 0; i < g->size(); ++i) {
      const double r = g->radius()[i];
      e = std::max(e, std::abs(du.values[i] - cplx(-2.0 * r * std::exp(-r * r))));
    }
    return e;
  };
  const double e1 = err(200), e2 = err(400);
  CHECK(e2 < 1e-6);
  CHECK(e1 / e2 > 12.0);
}

TEST_CASE("angular gradient of a radial function vanishes") {
  auto g = build_grid(GridMode::cartesian, 2, 8.0, 64);
  auto u = field(g, [](double x, double y) { return std::exp(-(x * x + y * y) / 2.0); });
  auto a = angular_gradient_sq(u);
  CHECK_FALSE(a.radial_grid);
  CHECK(a.values.values.maxCoeff() < 1e-12);
}

TEST_CASE("fourier transform of the self-dual gaussian") {
  auto g = build_grid(GridMode::cartesian, 1, 10.0, 256);
  auto f = field(g, [](double x, double) { return std::exp(-pi * x * x); });
  const ComplexVector fh = fourier_transform(f);
  const RealVector xi = frequency_component(*g, 0);
  double e = 0.0;
  for (Eigen::Index k = 0; k < xi.size(); ++k) e = std::max(e, std::abs(fh[k] - std::exp(-pi * xi[k] * xi[k])));
  CHECK(e < 1e-12);
  CHECK(frequency_cell(*g) == doctest::Approx(1.0 / 20.0));
  auto back = inverse_fourier_transform(g, fh);
  CHECK(testing::max_abs(back.values - f.values) < 1e-14);
}

TEST_CASE("mismatched grids are refused") {
  auto a = build_grid(GridMode::radial, 3, 10.0, 100);
  auto b = build_grid(GridMode::radial, 3, 10.0, 200);
  CHECK_THROWS_AS(inner(zero_field(a), zero_field(b)), Error);
}
