#include <doctest.h>

#include "dilab/multiplier.hpp"
#include "helpers.hpp"

using namespace dilab;
using testing::field;

TEST_CASE("plateau bump") {
  for (int k : {1, 2, 4, 8}) {
    CHECK(bump_profile(k, 0.5) == 1.0);
    CHECK(bump_profile(k, 1.0) == doctest::Approx(1.0));
    CHECK(bump_profile(k, (k + 1.0) / k + 1e-9) == 0.0);
    CHECK(bump_mass(k) == doctest::Approx(1.0 + 1.0 / (2.0 * k)));
    CHECK(bump_integral(k, 10.0) == doctest::Approx(bump_mass(k)).epsilon(1e-12));
    CHECK(bump_integral(k, 0.7) == doctest::Approx(0.7));
  }
}

TEST_CASE("smoothed absolute value derivatives") {
  MultiplierParams p;
  p.eps = 0.3;
  MultiplierProfile prof(MultiplierFamily::smoothed_abs, p);
  for (double r : {0.0, 0.2, 1.0, 5.0}) {
    const double s = std::sqrt(p.eps * p.eps + r * r);
    const auto d = prof.derivatives(r);
    CHECK(d[0] == doctest::Approx(s));
    CHECK(d[1] == doctest::Approx(r / s));
    CHECK(d[2] == doctest::Approx(p.eps * p.eps / (s * s * s)));
  }
  CHECK(prof.slope_at_infinity() == doctest::Approx(1.0));
}

TEST_CASE("bilaplacian of |x| in R^n") {
  MultiplierProfile abs(MultiplierFamily::abs, {});
  for (int n = 3; n <= 6; ++n)
    for (double r : {0.5, 1.7, 4.0})
      CHECK(abs.bilaplacian(r, n) == doctest::Approx((n - 1.0) * (3.0 - n) / (r * r * r)).scale(1.0));
}

TEST_CASE("closed-form bilaplacians agree with finite differences") {
  MultiplierParams p;
  p.eps = 0.5;
  p.R = 2.0;
  p.inner = 1.5;
  p.k = 3;
  for (auto fam : {MultiplierFamily::smoothed_abs, MultiplierFamily::japanese_bracket, MultiplierFamily::bump_integrated})
    for (int n = 1; n <= 5; ++n) {
      MultiplierProfile prof(fam, p);
      for (double r : {0.4, 1.3, 2.1, 3.2}) {
        const double fd = bilaplacian_finite_difference(prof, r, n, 1e-2);
        CHECK(prof.bilaplacian(r, n) == doctest::Approx(fd).epsilon(1e-3).scale(1.0));
      }
    }
}

TEST_CASE("rescaling and offsets") {
  MultiplierParams p;
  p.R = 3.0;
  p.offset = 2.0;
  p.scale = 0.5;
  MultiplierProfile scaled(MultiplierFamily::japanese_bracket, p);
  MultiplierProfile base(MultiplierFamily::japanese_bracket, {});
  const double r = 1.4;
  const auto s = scaled.derivatives(r), b = base.derivatives(r / 3.0);
  CHECK(s[0] == doctest::Approx(0.5 * 3.0 * b[0] + 2.0));
  CHECK(s[1] == doctest::Approx(0.5 * b[1]));
  CHECK(s[2] == doctest::Approx(0.5 * b[2] / 3.0));
}

TEST_CASE("hessian form matches the explicit contraction") {
  auto g = build_grid(GridMode::cartesian, 2, 8.0, 64);
  MultiplierParams p;
  p.eps = 0.7;
  auto m = build_multiplier(MultiplierFamily::smoothed_abs, p, g);
  auto u = field(g, [](double x, double y) {
    return std::exp(-((x - 0.5) * (x - 0.5) + y * y) / 2.0) * std::polar(1.0, 0.8 * x - 0.3 * y);
  });
  const RealVector a = hessian_form(m, u).values, b = hessian_form_direct(m, u).values;
  CHECK((a - b).cwiseAbs().maxCoeff() < 1e-10 * b.cwiseAbs().maxCoeff());
}

TEST_CASE("abs multiplier is distributional at the origin in three dimensions") {
  auto g = build_grid(GridMode::radial, 3, 10.0, 100);
  auto m = build_multiplier(MultiplierFamily::abs, {}, g);
  CHECK(m.distributional_at_origin);
  CHECK(m.bilap.cwiseAbs().maxCoeff() == 0.0);
  auto g4 = build_grid(GridMode::radial, 4, 10.0, 100);
  auto m4 = build_multiplier(MultiplierFamily::abs, {}, g4);
  for (Eigen::Index i = 0; i < g4->size(); i += 9) {
    const double r = g4->radius()[i];
    CHECK(m4.bilap[i] == doctest::Approx(-3.0 / (r * r * r)));
  }
}
