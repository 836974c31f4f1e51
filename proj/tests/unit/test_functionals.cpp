#include <doctest.h>

#include "dilab/error.hpp"
#include "dilab/fft.hpp"
#include "dilab/functionals.hpp"
#include "dilab/spectral.hpp"
#include "helpers.hpp"

using namespace dilab;
using testing::field;
using testing::pi;

TEST_CASE("weighted mass of a gaussian") {
  auto g = build_grid(GridMode::cartesian, 1, 10.0, 400);
  auto f = field(g, [](double x, double) { return std::exp(-x * x / 2.0); });
  CHECK(weighted_mass(f) == doctest::Approx(1.0).epsilon(1e-3));
  auto g3 = build_grid(GridMode::radial, 3, 10.0, 1000);
  auto f3 = field(g3, [](double r, double) { return std::exp(-r * r / 2.0); });
  CHECK(weighted_mass(f3) == doctest::Approx(2.0 * pi).epsilon(1e-6));
}

TEST_CASE("real data carries no flux") {
  auto g = build_grid(GridMode::radial, 3, 10.0, 200);
  auto f = field(g, [](double r, double) { return std::exp(-r * r / 2.0); });
  CHECK(centered_flux_G(f) == 0.0);
}

TEST_CASE("dispersive defect of a free gaussian equals ||x f|| / t") {
  auto g = build_grid(GridMode::cartesian, 1, 60.0, 1024);
  auto f = field(g, [](double x, double) { return std::exp(-x * x / 2.0); });
  const double xf = std::sqrt(std::sqrt(pi) / 2.0);
  for (double t : {1.0, 3.0}) {
    auto u = propagate_free(f, t);
    CHECK(dispersive_defect(u, t) == doctest::Approx(xf / t).epsilon(1e-9));
  }
}

TEST_CASE("homogeneous half norm") {
  const double L = 10.0;
  auto g = build_grid(GridMode::cartesian, 1, L, 256);
  const double xi0 = 3.0 / (2.0 * L);
  auto mode = field(g, [&](double x, double) { return std::polar(1.0, 2 * pi * xi0 * x); });
  CHECK(homogeneous_half_norm_sq(mode) == doctest::Approx(2 * pi * xi0 * 2 * L).epsilon(1e-12));
  auto gauss = field(g, [](double x, double) { return std::exp(-pi * x * x); });
  CHECK(homogeneous_half_norm_sq(gauss) == doctest::Approx(1.0).epsilon(2e-3));
  SpectralOperator op(zero_potential(g));
  CHECK(sigma_half_norm(gauss, op) == doctest::Approx(1.0 + 1.0 / (2 * pi)).epsilon(2e-3));
}

TEST_CASE("bilinear form of real data reduces to the hardy term") {
  auto g = build_grid(GridMode::cartesian, 2, 8.0, 128);
  auto h = field(g, [](double x, double y) {
    const double r2 = x * x + y * y;
    return std::exp(-r2 / 2.0) * (r2 / (1.0 + r2)) * (r2 / (1.0 + r2)) * (1.0 + 0.3 * x);
  });
  const cplx a = bilinear_form_a(h, h);
  CHECK(std::abs(a.imag()) < 1e-12);
  CHECK(a.real() == doctest::Approx(bilinear_ibp_value(h)).epsilon(1e-6));
}

TEST_CASE("pseudoconformal ledger vanishes for free data") {
  auto g = build_grid(GridMode::cartesian, 1, 40.0, 512);
  auto V = zero_potential(g);
  SpectralOperator op(V);
  auto f = field(g, [](double x, double) { return std::exp(-x * x / 2.0); });
  auto traj = evolve(op, f, uniform_times(0.0, 2.0, 0.1));
  auto led = pseudoconformal_ledger(traj, *V);
  CHECK(led.max_relative < 1e-10);
  for (double th : led.theta.values) CHECK(th == 0.0);
}

TEST_CASE("tail guard") {
  auto g = build_grid(GridMode::cartesian, 1, 6.0, 128);
  SpectralOperator op(zero_potential(g));
  auto f = field(g, [](double x, double) { return std::exp(-x * x / 2.0); });
  CHECK_THROWS_AS(evolve(op, f, uniform_times(0.0, 5.0, 0.5)), TailMassBreach);
  TailGuard off;
  off.enforce = false;
  auto traj = evolve(op, f, uniform_times(0.0, 5.0, 0.5), off);
  CHECK(traj.worst_tail > 1e-6);
}

TEST_CASE("trajectory windows and weights") {
  auto g = build_grid(GridMode::cartesian, 1, 10.0, 64);
  SpectralOperator op(zero_potential(g));
  auto f = field(g, [](double x, double) { return std::exp(-x * x); });
  TailGuard off;
  off.enforce = false;
  auto traj = evolve(op, f, uniform_times(-2.0, 2.0, 0.5), off);
  auto w = traj.window(1.0);
  CHECK(w.size() == 5);
  double total = 0.0;
  for (double x : w.time_weights()) total += x;
  CHECK(total == doctest::Approx(2.0));
}
