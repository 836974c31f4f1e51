#include <doctest.h>

#include "dilab/error.hpp"
#include "dilab/potential.hpp"

using namespace dilab;

TEST_CASE("family values and derivatives") {
  auto g = build_grid(GridMode::radial, 3, 20.0, 200);
  PotentialParams p;
  p.c = 2.0;
  p.p = 1.5;
  p.a = 0.7;
  p.sigma = 1.3;
  p.rho = 4.0;
  p.q = 2.5;
  CHECK(Potential(g, PotentialFamily::inverse_power, p).value(1.0) == doctest::Approx(2.0 / std::pow(2.0, 1.5)));
  CHECK(Potential(g, PotentialFamily::gaussian_bump, p).value(1.3) == doctest::Approx(0.7 * std::exp(-1.0)));
  CHECK(Potential(g, PotentialFamily::compact_bump, p).value(0.0) == doctest::Approx(0.7));
  CHECK(Potential(g, PotentialFamily::compact_bump, p).value(4.5) == 0.0);
  CHECK(Potential(g, PotentialFamily::algebraic, p).value(1.0) == doctest::Approx(2.0 / std::pow(2.0, 2.5)));
  for (auto fam : {PotentialFamily::inverse_power, PotentialFamily::gaussian_bump, PotentialFamily::compact_bump,
                   PotentialFamily::algebraic}) {
    Potential V(g, fam, p);
    for (double r : {0.3, 1.1, 2.7, 3.9}) {
      const double h = 1e-5;
      const double fd = (V.value(r + h) - V.value(r - h)) / (2 * h);
      CHECK(V.derivative(r) == doctest::Approx(fd).epsilon(1e-7));
    }
  }
}

TEST_CASE("sampled potential matches the profile") {
  auto g = build_grid(GridMode::cartesian, 2, 6.0, 16);
  auto V = sample_potential(PotentialFamily::inverse_power, {}, g);
  for (Eigen::Index i = 0; i < g->size(); i += 37) {
    const double r = g->radius()[i];
    CHECK(V->values()[i] == doctest::Approx(1.0 / (1.0 + r * r)));
  }
}

TEST_CASE("hypotheses") {
  auto g = build_grid(GridMode::radial, 3, 100.0, 1000);
  auto inv = sample_potential(PotentialFamily::inverse_power, {}, g);
  CHECK(inv->hypotheses().sr0);
  CHECK(inv->hypotheses().rageweak);
  CHECK(inv->hypotheses().new_limit);
  PotentialParams slow;
  slow.q = 0.5;
  auto alg = sample_potential(PotentialFamily::algebraic, slow, g);
  CHECK_FALSE(alg->hypotheses().sr0);
  CHECK(zero_potential(g)->is_zero());
}

TEST_CASE("invalid potentials") {
  auto g = build_grid(GridMode::radial, 3, 10.0, 100);
  PotentialParams neg;
  neg.c = -1.0;
  try {
    Potential(g, PotentialFamily::inverse_power, neg);
    FAIL("negative amplitude accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::negative_amplitude);
  }
  try {
    parse_potential_family("coulomb");
    FAIL("unknown family accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::unknown_family);
  }
}
