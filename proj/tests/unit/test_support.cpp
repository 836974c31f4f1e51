#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "dilab/config.hpp"
#include "dilab/error.hpp"
#include "dilab/fitting.hpp"
#include "dilab/initial_data.hpp"
#include "dilab/parallel.hpp"
#include "dilab/report.hpp"

using namespace dilab;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::io;
}

}  // namespace

TEST_CASE("config parsing") {
  auto cfg = ExperimentConfig::from_string(R"(
experiment = "morawetz"   # trailing comment
[grid]
mode = "radial"
n = 4
N = 256
[sweep]
N_ladder = [128, 256]
[multiplier]
family = "smoothed_abs"
)");
  CHECK(cfg.experiment() == "morawetz");
  CHECK(cfg.integer("grid.N") == 256);
  CHECK(cfg.numbers("sweep.N_ladder") == std::vector<double>{128, 256});
  CHECK(cfg.explicitly_set("grid.n"));
  CHECK_FALSE(cfg.explicitly_set("grid.L"));
  cfg.set("grid.N=512");
  CHECK(cfg.integer("grid.N") == 512);
  CHECK(cfg.to_json()["grid"]["mode"] == "radial");
  auto again = ExperimentConfig::from_string(cfg.to_text());
  CHECK(again.to_json() == cfg.to_json());
}

TEST_CASE("config schema errors") {
  CHECK(code_of([] { ExperimentConfig::from_string("[potental]\nfamily = \"zero\"\n"); }) == ErrorCode::schema);
  CHECK(code_of([] { ExperimentConfig::from_string("[grid]\nNN = 4\n"); }) == ErrorCode::schema);
  CHECK(code_of([] { ExperimentConfig::from_string("[grid]\nN = 4\nN = 5\n"); }) == ErrorCode::schema);
  CHECK(code_of([] { ExperimentConfig::from_string("[grid]\nN = \"many\"\n"); }) == ErrorCode::schema);
  CHECK(code_of([] { ExperimentConfig().set("grid.N"); }) == ErrorCode::schema);
  ExperimentConfig c;
  c.set("grid.N=1.5");
  CHECK(code_of([&] { c.integer("grid.N"); }) == ErrorCode::schema);
}

TEST_CASE("number formatting") {
  CHECK(format_number(0.1) == "1.0000000000000001e-01");
  CHECK(format_number(-2.0) == "-2.0000000000000000e+00");
  const auto s = make_series("residual", "T", {10, 20}, {0.5, 0.25});
  CHECK(format_csv(s) == "T,residual\n1.0000000000000000e+01,5.0000000000000000e-01\n"
                         "2.0000000000000000e+01,2.5000000000000000e-01\n");
}

TEST_CASE("report round trip is exact") {
  ExperimentReport r;
  r.experiment = "demo";
  r.scalar("third", 1.0 / 3.0);
  r.scalar("tiny", 4.9e-324);
  r.scalar("inf", std::numeric_limits<double>::infinity());
  r.add(make_series("s", "t", {0.0, 0.1}, {std::sqrt(2.0), -1e-300}));
  r.at_most("small", 1e-13, 1e-12, "detail");
  r.at_least("big", 1.0, 2.0);
  CHECK(r.find_criterion("small")->pass);
  CHECK_FALSE(r.passed());
  const auto back = ExperimentReport::from_json(r.to_json());
  CHECK(back.to_json().dump() == r.to_json().dump());
  CHECK(back.scalar("third") == 1.0 / 3.0);
  CHECK(back.scalar("tiny") == 4.9e-324);
  CHECK(std::isinf(back.scalar("inf")));
  CHECK(back.find_series("s")->values[0] == std::sqrt(2.0));
  CHECK(summary_line(*r.find_criterion("big")).rfind("FAIL", 0) == 0);
}

TEST_CASE("atomic writes") {
  const auto dir = std::filesystem::temp_directory_path() / "dilab_unit_atomic";
  std::filesystem::create_directories(dir);
  write_atomic(dir / "a.txt", "first");
  write_atomic(dir / "a.txt", "second");
  std::ifstream in(dir / "a.txt");
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == "second");
  std::size_t files = 0;
  for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir)) ++files;
  CHECK(files == 1);
  std::filesystem::remove_all(dir);
}

TEST_CASE("order fits") {
  const std::vector<double> h = {0.1, 0.05, 0.025};
  std::vector<double> e;
  for (double x : h) e.push_back(3.0 * x * x);
  const auto fit = fit_order(h, e);
  CHECK(fit.order == doctest::Approx(2.0));
  CHECK(fit.r_squared == doctest::Approx(1.0));
  CHECK(fit.monotone);
  CHECK_FALSE(fit.floor);
  CHECK(fit_order(h, {1e-15, 2e-15, 1e-15}, 1e-13).floor);
  CHECK(extrapolate_quadratic({1.0, 2.0, 4.0}, {6.0, 17.0, 57.0}) == doctest::Approx(1.0));
  CHECK(strictly_decreasing({3, 2, 1}));
  CHECK_FALSE(strictly_decreasing({3, 3, 1}));
  CHECK(non_increasing({3, 3, 1}));
}

TEST_CASE("random source follows the standard engine") {
  UniformSource u(5489);
  for (int i = 0; i < 9999; ++i) u.next();
  CHECK(u.next() == static_cast<double>(9981545732273789042ull >> 11) * 0x1.0p-53);
}

TEST_CASE("seeded random data is reproducible and real") {
  auto g = build_grid(GridMode::cartesian, 2, 6.0, 32);
  DataParams p;
  p.family = "random";
  p.seed = 11;
  const auto a = make_initial_data(g, p), b = make_initial_data(g, p);
  CHECK(a.values == b.values);
  CHECK(a.values.imag().cwiseAbs().maxCoeff() == 0.0);
  p.seed = 12;
  CHECK_FALSE(make_initial_data(g, p).values == a.values);
}

TEST_CASE("parallel_for writes by index") {
  std::vector<double> out(100);
  parallel_for(out.size(), [&](std::size_t i) { out[i] = static_cast<double>(i * i); });
  for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == static_cast<double>(i * i));
  CHECK_THROWS(parallel_for(4, [](std::size_t i) {
    if (i == 2) throw std::runtime_error("boom");
  }));
}
