#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "dilab/config.hpp"
#include "dilab/experiments.hpp"
#include "dilab/fitting.hpp"
#include "dilab/report.hpp"

namespace fs = std::filesystem;
using namespace dilab;

namespace {

const fs::path kConfigs = DILAB_ACCEPTANCE_CONFIGS;

struct Check {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) ok = false;
    if (detail.tellp() > 0) detail << "; ";
    detail << what << (cond ? "" : " [failed]");
  }
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

struct Runs {
  std::map<std::string, RunOutcome> cache;

  const RunOutcome& get(const std::string& name) {
    auto it = cache.find(name);
    if (it != cache.end()) return it->second;
    const auto start = std::chrono::steady_clock::now();
    RunOutcome out = run_experiment(ExperimentConfig::from_file(kConfigs / (name + ".toml")), {});
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("  ran %s: exit %d in %.1f s\n", name.c_str(), static_cast<int>(out.exit_code), seconds);
    std::fflush(stdout);
    return cache.emplace(name, std::move(out)).first->second;
  }
};

double scalar_or_nan(const ExperimentReport& r, const std::string& name) {
  auto it = r.scalars.find(name);
  return it == r.scalars.end() ? std::nan("") : it->second;
}

bool criterion_passed(const ExperimentReport& r, const std::string& name) {
  const Criterion* c = r.find_criterion(name);
  return c && c->pass;
}

void usable(Check& c, const RunOutcome& out) {
  c.require(out.has_report && out.report.status == "ok", "run status " + (out.has_report ? out.report.status : out.message));
}

Check unitarity(Runs& runs) {
  Check c;
  const auto& out = runs.get("conservation");
  usable(c, out);
  const auto& r = out.report;
  const double steps = r.config["time"]["steps"].get<double>();
  c.require(steps >= 1e4, "steps " + num(steps));
  const double exact = scalar_or_nan(r, "exact_mass_drift");
  const double split = scalar_or_nan(r, "splitstep_mass_drift");
  c.require(exact <= 1e-12, "exact mass drift " + num(exact) + " <= 1e-12");
  c.require(split <= 1e-10, "split-step mass drift " + num(split) + " <= 1e-10");
  return c;
}

Check energy(Runs& runs) {
  Check c;
  const auto& out = runs.get("conservation");
  usable(c, out);
  const double e = scalar_or_nan(out.report, "energy_drift");
  const double s = scalar_or_nan(out.report, "sobolev_drift");
  c.require(e <= 1e-10, "energy drift " + num(e) + " <= 1e-10");
  c.require(s <= 1e-10, "half-norm drift " + num(s) + " <= 1e-10");
  return c;
}

Check finite_T(Runs& runs) {
  Check c;
  const auto start = std::chrono::steady_clock::now();
  const auto& out = runs.get("finite_T_identity");
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  usable(c, out);
  const auto& r = out.report;
  const double res = scalar_or_nan(r, "residual");
  const double order = scalar_or_nan(r, "residual_order");
  c.require(res <= 1e-3, "residual " + num(res) + " <= 1e-3");
  c.require(std::abs(order - 2.0) <= 0.3, "order " + num(order) + " in 2 +- 0.3");
  c.require(seconds < 60.0, "runtime " + num(seconds) + " s < 60 s");
  return c;
}

Check pseudoconformal(Runs& runs) {
  Check c;
  const auto& out = runs.get("pseudoconformal");
  usable(c, out);
  const auto& r = out.report;
  const double res = scalar_or_nan(r, "max_relative_residual");
  const double order = scalar_or_nan(r, "residual_order");
  const double theta = scalar_or_nan(r, "control_max_theta");
  const double drift = scalar_or_nan(r, "control_lhs_drift");
  c.require(res <= 1e-3, "residual " + num(res) + " <= 1e-3");
  c.require(std::abs(order - 2.0) <= 0.3, "order " + num(order) + " in 2 +- 0.3");
  c.require(theta <= 1e-3, "V = 0 theta " + num(theta) + " <= 1e-3");
  c.require(drift <= 1e-3, "V = 0 lhs drift " + num(drift) + " <= 1e-3");
  return c;
}

Check scattering(Runs& runs) {
  Check c;
  const auto& out = runs.get("scattering");
  usable(c, out);
  const auto& r = out.report;
  const double conv = scalar_or_nan(r, "convention_error");
  c.require(conv <= 1e-8, "V = 0 convention " + num(conv) + " <= 1e-8");
  const TimeSeries* s = r.find_series("residual");
  const bool have = s && s->values.size() == 3;
  c.require(have && s->axis_values == std::vector<double>{10, 20, 40}, "T ladder {10, 20, 40}");
  c.require(have && strictly_decreasing(s->values), "residual strictly decreasing");
  const double last = have ? s->values.back() : std::nan("");
  c.require(last <= 0.05, "final residual " + num(last) + " <= 0.05");
  return c;
}

Check dispersive(Runs& runs) {
  Check c;
  const auto& out = runs.get("dispersive_n1");
  usable(c, out);
  const TimeSeries* s = out.report.find_series("dispersive_defect");
  const bool have = s && s->values.size() >= 2 && s->axis_values.front() == 4.0 && s->axis_values.back() == 40.0;
  c.require(have, "ladder from t = 4 to t = 40");
  const double ratio = have ? s->values.back() / s->values.front() : std::nan("");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", ratio);
  c.require(ratio <= 0.1, std::string("defect(40)/defect(4) ") + buf + " <= 0.1");
  c.require(have && strictly_decreasing(s->values), "monotone decreasing");
  return c;
}

Check virial(Runs& runs) {
  Check c;
  const auto& out = runs.get("virial_n3");
  usable(c, out);
  const auto& r = out.report;
  const double g = scalar_or_nan(r, "G_gap");
  const double wm = scalar_or_nan(r, "weighted_mass_over_t_gap");
  const TimeSeries* margin = r.find_series("weighted_mass_margin");
  c.require(g <= 0.05, "G gap " + num(g) + " <= 0.05");
  c.require(wm <= 0.05, "weighted mass / t gap " + num(wm) + " <= 0.05");
  bool holds = margin && !margin->values.empty();
  if (holds)
    for (double v : margin->values) holds = holds && v >= -1e-12;
  c.require(holds && criterion_passed(r, "weighted_mass_bound"),
            "weighted-mass bound holds on the run, C = " + num(scalar_or_nan(r, "weighted_mass_C_measured")));
  return c;
}

Check morawetz(Runs& runs) {
  Check c;
  const auto& out = runs.get("morawetz");
  usable(c, out);
  const auto& r = out.report;
  const double gap = scalar_or_nan(r, "gap");
  c.require(gap <= 0.05, "extrapolated gap " + num(gap) + " <= 0.05");
  const double expect[] = {0.0, 0.75, 2.0};
  for (int n = 3; n <= 5; ++n) {
    const double k = scalar_or_nan(r, "coefficient_n" + std::to_string(n));
    c.require(k == expect[n - 3] && morawetz_coefficient(n) == (n - 1.0) * (n - 3.0) / 4.0,
              "coefficient n=" + std::to_string(n) + " " + num(k));
  }
  return c;
}

Check local_smoothing(Runs& runs) {
  Check c;
  const auto& o4 = runs.get("local_smoothing_n4");
  const auto& o3 = runs.get("local_smoothing_n3");
  usable(c, o4);
  usable(c, o3);
  const double plateau = scalar_or_nan(o4.report, "plateau_gap");
  c.require(plateau <= 0.10, "n=4 plateau gap " + num(plateau) + " <= 0.10");
  const double composite = scalar_or_nan(o3.report, "composite");
  const double bound = 0.5 * scalar_or_nan(o3.report, "norm_half_sq") * 0.9;
  c.require(composite >= bound, "n=3 composite " + num(composite) + " >= " + num(bound));
  for (const auto* rep : {&o4.report, &o3.report}) {
    const double pairs = scalar_or_nan(*rep, "sandwich_pairs");
    const double bad = scalar_or_nan(*rep, "sandwich_violations");
    c.require(pairs > 0 && bad == 0, "sandwich " + num(bad) + "/" + num(pairs) + " violations");
  }
  return c;
}

Check survey(Runs& runs) {
  Check c;
  const auto& out = runs.get("bilinear_survey");
  usable(c, out);
  const auto& r = out.report;
  c.require(r.config["survey"]["samples"].get<double>() >= 100, "100 samples per dimension");
  for (const std::string tag : {"n2", "n3"}) {
    const double m = scalar_or_nan(r, "max_ratio_" + tag);
    const double ch = scalar_or_nan(r, "refinement_change_" + tag);
    const double im = scalar_or_nan(r, "max_imag_" + tag);
    const double ibp = scalar_or_nan(r, "max_ibp_error_" + tag);
    c.require(std::isfinite(m), tag + " max ratio " + num(m));
    c.require(ch <= 0.10, tag + " refinement " + num(ch) + " <= 0.10");
    c.require(im <= 1e-12, tag + " Im a(h,h) " + num(im) + " <= 1e-12");
    c.require(ibp <= 1e-6, tag + " ibp " + num(ibp) + " <= 1e-6");
  }
  return c;
}

Check rage(Runs& runs) {
  Check c;
  const auto& out = runs.get("rage");
  usable(c, out);
  const auto& r = out.report;
  const TimeSeries* ratios = r.find_series("average_ratio");
  const bool have = ratios && !ratios->values.empty();
  const double worst = have ? *std::max_element(ratios->values.begin(), ratios->values.end()) : std::nan("");
  c.require(worst <= 0.6, "time-average ratio under doubling " + num(worst) + " <= 0.6");
  const TimeSeries* obs = r.find_series("weighted_observable");
  bool ends = obs && obs->axis_values.size() >= 2 && obs->axis_values.front() == 2.0 && obs->axis_values.back() == 40.0;
  const double pw = ends ? obs->values.back() / obs->values.front() : std::nan("");
  c.require(pw <= 0.10, "observable(40)/observable(2) " + num(pw) + " <= 0.10");
  return c;
}

Check reversibility(Runs& runs) {
  Check c;
  const auto& out = runs.get("reversibility");
  usable(c, out);
  const auto& r = out.report;
  const double t = scalar_or_nan(r, "t");
  const double rec = scalar_or_nan(r, "recovery_error");
  const double gen = scalar_or_nan(r, "generic_localized_ratio");
  c.require(t == 50.0, "t = " + num(t));
  c.require(rec <= 1e-10, "recovery " + num(rec) + " <= 1e-10");
  c.require(gen <= 0.10, "generic data decays in the same report " + num(gen) + " <= 0.10");
  return c;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Check determinism(Runs&) {
  Check c;
  const fs::path root = fs::temp_directory_path() / ("dilab_determinism_" + std::to_string(::getpid()));
  struct Case {
    std::string file;
    std::vector<std::string> overrides;
  };
  const std::vector<Case> cases = {
      {"pseudoconformal", {}},
      {"bilinear_survey", {"survey.samples=20", "survey.cartesian_N=64", "survey.radial_N=256"}},
  };
  for (const auto& k : cases) {
    std::string bytes[2];
    for (int rep = 0; rep < 2; ++rep) {
      ExperimentConfig cfg = ExperimentConfig::from_file(kConfigs / (k.file + ".toml"));
      for (const auto& o : k.overrides) cfg.set(o);
      const RunOutcome out = run_experiment(cfg, {});
      const fs::path dir = root / (k.file + std::to_string(rep));
      fs::create_directories(dir);
      if (out.has_report) write_report(out.report, dir, {"json"});
      bytes[rep] = slurp(dir / "report.json");
    }
    c.require(!bytes[0].empty() && bytes[0] == bytes[1], k.file + " report.json identical (" +
                                                              std::to_string(bytes[0].size()) + " bytes)");
  }
  std::error_code ec;
  fs::remove_all(root, ec);
  return c;
}

}  // namespace

int main() {
  struct Entry {
    int id;
    const char* name;
    Check (*run)(Runs&);
  };
  const Entry entries[] = {
      {1, "unitarity", unitarity},         {2, "energy", energy},
      {3, "finite-T identity", finite_T},  {4, "pseudoconformal ledger", pseudoconformal},
      {5, "scattering", scattering},       {6, "dispersive limit", dispersive},
      {7, "virial limits", virial},        {8, "morawetz", morawetz},
      {9, "local smoothing", local_smoothing}, {10, "bilinear survey", survey},
      {11, "rage trends", rage},           {12, "reversibility", reversibility},
      {13, "determinism", determinism},
  };
  Runs runs;
  int failed = 0;
  std::vector<std::string> lines;
  for (const auto& e : entries) {
    Check c;
    try {
      c = e.run(runs);
    } catch (const std::exception& ex) {
      c.require(false, std::string("exception: ") + ex.what());
    }
    char head[96];
    std::snprintf(head, sizeof head, "%s criterion %2d %-24s ", c.ok ? "PASS" : "FAIL", e.id, e.name);
    lines.push_back(head + c.detail.str());
    std::printf("%s\n", lines.back().c_str());
    std::fflush(stdout);
    if (!c.ok) ++failed;
  }
  std::printf("\n");
  for (const auto& l : lines) std::printf("%s\n", l.c_str());
  std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(entries)) - failed, std::size(entries));
  return failed == 0 ? 0 : 1;
}
