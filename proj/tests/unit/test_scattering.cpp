#include <doctest.h>

#include "dilab/error.hpp"
#include "dilab/fft.hpp"
#include "dilab/scattering.hpp"
#include "helpers.hpp"

using namespace dilab;
using testing::field;
using testing::pi;

TEST_CASE("direct transform agrees with the fft on the lattice") {
  auto g = build_grid(GridMode::cartesian, 1, 8.0, 64);
  auto f = field(g, [](double x, double) { return std::exp(-x * x) * std::polar(1.0, 0.7 * x); });
  const RealVector xi = frequency_component(*g, 0);
  Eigen::MatrixXd pts(xi.size(), 1);
  pts.col(0) = xi;
  CHECK(testing::max_abs(fourier_transform_at(f, pts) - fourier_transform(f)) < 1e-12);
}

TEST_CASE("asymptotic profile approaches the free wave") {
  auto g = build_grid(GridMode::cartesian, 1, 200.0, 2048);
  auto f = field(g, [](double x, double) { return std::exp(-x * x / 2.0); });
  double prev = 1e300;
  for (double t : {2.0, 4.0, 8.0}) {
    const double e = (asymptotic_profile(f, t).values - propagate_free(f, t).values).norm();
    CHECK(e < prev);
    prev = e;
  }
  CHECK(prev < 0.1 * f.norm());
  CHECK(asymptotic_profile(f, -8.0).norm() == doctest::Approx(asymptotic_profile(f, 8.0).norm()));
}

TEST_CASE("free wave operator is the identity") {
  auto g = build_grid(GridMode::cartesian, 1, 60.0, 512);
  SpectralOperator op(zero_potential(g));
  auto f = field(g, [](double x, double) { return std::exp(-x * x / 2.0); });
  auto st = wave_operator(op, f, 1, {2.0, 4.0});
  CHECK(testing::max_abs(st.wave.values - f.values) < 1e-10);
  const auto w = scattering_weight(st, op);
  CHECK(w.residual < 1e-8);
  CHECK(fourier_half_weight(f) == doctest::Approx(std::pow(op.sobolev_norm(f, 0.5), 2)).epsilon(1e-8));
}

TEST_CASE("wave operator needs a certified short-range potential") {
  auto g = build_grid(GridMode::cartesian, 1, 60.0, 256);
  PotentialParams slow;
  slow.q = 0.5;
  SpectralOperator op(sample_potential(PotentialFamily::algebraic, slow, g));
  auto f = field(g, [](double x, double) { return std::exp(-x * x / 2.0); });
  try {
    wave_operator(op, f, 1, {2.0});
    FAIL("uncertified potential accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::hypothesis_not_certified);
  }
}

TEST_CASE("zero data has zero scattering weight") {
  auto g = build_grid(GridMode::cartesian, 1, 20.0, 128);
  CHECK(fourier_half_weight(zero_field(g)) == 0.0);
}
