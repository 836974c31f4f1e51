#include <doctest.h>

#include "dilab/experiments.hpp"
#include "helpers.hpp"

using namespace dilab;
using testing::field;

namespace {

ExperimentConfig small_identity() {
  return ExperimentConfig::from_string(R"(
experiment = "finite_T_identity"
[grid]
mode = "cartesian"
n = 1
L = 40
N = 256
[potential]
family = "inverse_power"
[time]
T = 2
dt_per_h = 0.5
[sweep]
N_ladder = [256]
)");
}

}  // namespace

TEST_CASE("identity sides vanish at T = 0 and for constant multipliers") {
  auto g = build_grid(GridMode::cartesian, 1, 40.0, 256);
  auto op = assemble_hamiltonian(sample_potential(PotentialFamily::inverse_power, {}, g));
  auto f = field(g, [](double x, double) { return std::exp(-x * x / 4.0); });
  auto m = build_multiplier(MultiplierFamily::japanese_bracket, {}, g);
  const auto zero = finite_T_terms(*op, m, f, 0.0, 0.1);
  CHECK(zero.lhs == 0.0);
  CHECK(zero.rhs == 0.0);
  const auto flat = finite_T_terms(*op, build_multiplier(MultiplierFamily::constant, {}, g), f, 1.0, 0.05);
  CHECK(flat.lhs == 0.0);
  CHECK(std::abs(flat.rhs) < 1e-14);
  const auto t = finite_T_terms(*op, m, f, 2.0, 0.025);
  CHECK(t.residual < 1e-4);
}

TEST_CASE("identity integrand of the zero state") {
  auto g = build_grid(GridMode::radial, 3, 10.0, 100);
  auto V = sample_potential(PotentialFamily::inverse_power, {}, g);
  auto m = build_multiplier(MultiplierFamily::japanese_bracket, {}, g);
  CHECK(identity_integrand(zero_field(g), m, *V) == 0.0);
}

TEST_CASE("morawetz coefficient") {
  CHECK(morawetz_coefficient(3) == 0.0);
  CHECK(morawetz_coefficient(4) == 0.75);
  CHECK(morawetz_coefficient(5) == 2.0);
}

TEST_CASE("registry and exit codes") {
  CHECK(experiments().size() == 11);
  CHECK(find_experiment("rage_study").name == "rage_study");
  CHECK_THROWS_AS(find_experiment("nope"), Error);
  CHECK(exit_code_for(ErrorCode::schema) == exit_schema);
  CHECK(exit_code_for(ErrorCode::tail_mass_breach) == exit_tail);
  CHECK(exit_code_for(ErrorCode::numerical) == exit_numerical);
  CHECK(parse_axis("eps") == ConvergenceAxis::eps);
}

TEST_CASE("a small run passes") {
  const auto out = run_experiment(small_identity());
  REQUIRE(out.has_report);
  CHECK(out.exit_code == exit_ok);
  CHECK(out.report.status == "ok");
  CHECK(out.report.scalar("residual") < 1e-3);
}

TEST_CASE("a tail breach keeps a partial report") {
  auto cfg = small_identity();
  cfg.set("grid.L=8");
  cfg.set("grid.N=64");
  cfg.set("sweep.N_ladder=[64]");
  const auto out = run_experiment(cfg);
  CHECK(out.exit_code == exit_tail);
  CHECK(out.has_report);
  CHECK(out.report.status == "tail-mass-breach");
  CHECK(out.message.find("tail") != std::string::npos);
}

TEST_CASE("setup errors produce no report") {
  auto cfg = small_identity();
  cfg.set("experiment=\"nope\"");
  const auto out = run_experiment(cfg);
  CHECK(out.exit_code == exit_schema);
  CHECK_FALSE(out.has_report);
}

TEST_CASE("reruns are identical") {
  const auto a = run_experiment(small_identity()), b = run_experiment(small_identity());
  CHECK(a.report.to_json().dump() == b.report.to_json().dump());
}
