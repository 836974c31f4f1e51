#include "dilab/experiments.hpp"

#include <chrono>
#include <cmath>

#include "dilab/error.hpp"
#include "dilab/fitting.hpp"
#include "study_support.hpp"

namespace dilab {

ConvergenceAxis parse_axis(const std::string& name) {
  if (name == "N") return ConvergenceAxis::N;
  if (name == "dt") return ConvergenceAxis::dt;
  if (name == "T") return ConvergenceAxis::T;
  if (name == "eps") return ConvergenceAxis::eps;
  throw Error(ErrorCode::invalid_argument, "axis must be N, dt, T or eps, got '" + name + "'");
}

std::string to_string(ConvergenceAxis axis) {
  switch (axis) {
    case ConvergenceAxis::N: return "N";
    case ConvergenceAxis::dt: return "dt";
    case ConvergenceAxis::T: return "T";
    case ConvergenceAxis::eps: return "eps";
    case ConvergenceAxis::none: break;
  }
  return "none";
}

const std::vector<StudyInfo>& experiments() {
  static const std::vector<StudyInfo> list = {
      {"conservation_study", "mass, energy and H^{1/2}_V conservation; split-step drift and order",
       studies::conservation_study},
      {"finite_T_identity", "finite-time multiplier identity on [-T, T] with N-refinement order",
       studies::finite_T_identity},
      {"pseudoconformal_study", "pseudoconformal ledger with a V = 0 control", studies::pseudoconformal_study},
      {"scattering_study", "Moller approximations of the wave operator and the H^{1/2} scattering identity",
       studies::scattering_study},
      {"vai_limit_study", "limit of the multiplier identity as T grows", studies::vai_limit_study},
      {"morawetz_study", "eps-regularized Morawetz identity and its T- and R-trends", studies::morawetz_study},
      {"local_smoothing_study", "local smoothing ratios, plateau and bump sandwich", studies::local_smoothing_study},
      {"dispersive_limits_study", "dispersive defect, virial limits and the weighted-mass estimate",
       studies::dispersive_limits_study},
      {"rage_study", "time-averaged and pointwise local decay", studies::rage_study},
      {"reversibility_demo", "exact recovery of a localized state at a fixed time", studies::reversibility_demo},
      {"bilinear_survey", "random survey of |a(h, h)| / ||h||^2_{H^{1/2}}", studies::bilinear_survey},
  };
  return list;
}

const StudyInfo& find_experiment(const std::string& name) {
  for (const StudyInfo& s : experiments())
    if (s.name == name) return s;
  throw Error(ErrorCode::schema, "unknown experiment '" + name + "' (see `dilab list-experiments`)");
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::tail_mass_breach: return exit_tail;
    case ErrorCode::numerical:
    case ErrorCode::domain: return exit_numerical;
    default: return exit_schema;
  }
}

void validate_config(const ExperimentConfig& cfg) {
  using namespace studies;
  const StudyInfo& study = find_experiment(cfg.experiment());
  for (const std::string& fmt : cfg.texts("output.formats"))
    if (fmt != "json" && fmt != "csv") throw Error(ErrorCode::schema, "output.formats accepts json and csv, got '" + fmt + "'");
  for (const char* key : {"T_ladder", "t_ladder", "R_ladder", "eps_ladder", "k_list", "N_ladder", "dt_ladder"}) ladder(cfg, key);
  for (const SchemaEntry& e : config_schema())
    if (e.key.rfind("tolerances.", 0) == 0 && !(cfg.number(e.key) > 0.0))
      throw Error(ErrorCode::schema, e.key + " must be positive");
  const std::string weight = cfg.text("observable.weight");
  if (weight != "inverse_linear" && weight != "ball" && weight != "one")
    throw Error(ErrorCode::schema, "observable.weight must be inverse_linear, ball or one");
  if (!(cfg.number("time.T") > 0.0)) throw Error(ErrorCode::schema, "time.T must be positive");
  parse_multiplier_family(cfg.text("multiplier.family"));

  if (study.name == "bilinear_survey") {
    const long refine = cfg.integer("survey.refine");
    if (cfg.integer("survey.radial_N") * refine > SpectralOperator::kEigenBudget)
      throw Error(ErrorCode::too_large, "refined survey grid exceeds the eigensolver budget");
    return;
  }
  const GridPtr grid = grid_from(cfg);
  if (grid->size() > SpectralOperator::kEigenBudget)
    throw Error(ErrorCode::too_large, grid->describe() + " exceeds the eigensolver budget of " +
                                          std::to_string(SpectralOperator::kEigenBudget) + " nodes");
  for (double N : cfg.numbers("sweep.N_ladder")) {
    const long nodes = grid->cartesian() ? std::lround(std::pow(N, grid->dimension())) : std::lround(N);
    if (nodes > SpectralOperator::kEigenBudget)
      throw Error(ErrorCode::too_large, "sweep.N_ladder exceeds the eigensolver budget");
  }
  const PotentialPtr V = potential_from(cfg, grid);
  time_step(cfg, *grid);
  multiplier_from(cfg, grid);
  data_from(cfg, grid);
  if (study.name == "scattering_study") {
    if (!grid->cartesian()) throw Error(ErrorCode::unsupported, "scattering_study needs a cartesian grid");
    if (!V->hypotheses().sr0)
      throw Error(ErrorCode::hypothesis_not_certified, V->describe() + " is not certified short-range (SR0)");
  }
}

namespace {

void classify(RunOutcome& out, const std::exception& e) {
  out.message = e.what();
  out.report.error = e.what();
  if (const auto* err = dynamic_cast<const Error*>(&e)) {
    out.exit_code = exit_code_for(err->code());
  } else {
    out.exit_code = exit_numerical;
  }
  if (out.exit_code == exit_tail) {
    out.report.status = "tail-mass-breach";
  } else if (out.exit_code == exit_numerical) {
    out.report.status = "numerical-failure";
  } else {
    out.has_report = false;
  }
}

bool validated(const ExperimentConfig& cfg, RunOutcome& out) {
  try {
    validate_config(cfg);
    return true;
  } catch (const std::exception& e) {
    classify(out, e);
    out.has_report = false;
    if (out.exit_code != exit_schema) out.exit_code = exit_schema;
    return false;
  }
}

}  // namespace

RunOutcome run_experiment(const ExperimentConfig& cfg, const StudyContext& ctx) {
  RunOutcome out;
  if (!validated(cfg, out)) return out;
  const StudyInfo& study = find_experiment(cfg.experiment());
  out.report.experiment = study.name;
  out.report.config = cfg.to_json();
  out.has_report = true;
  const auto start = std::chrono::steady_clock::now();
  try {
    study.run(cfg, ctx, out.report);
    out.exit_code = out.report.passed() ? exit_ok : exit_failed;
  } catch (const std::exception& e) {
    classify(out, e);
  }
  out.report.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

RunOutcome run_convergence(const ExperimentConfig& cfg, ConvergenceAxis axis) {
  RunOutcome out;
  if (!validated(cfg, out)) return out;
  const StudyInfo& study = find_experiment(cfg.experiment());
  ExperimentReport& rep = out.report;
  rep.experiment = "convergence:" + study.name;
  rep.config = cfg.to_json();
  rep.config["convergence_axis"] = to_string(axis);
  out.has_report = true;
  const auto start = std::chrono::steady_clock::now();
  try {
    const char* ladder_key = axis == ConvergenceAxis::N ? "N_ladder"
                             : axis == ConvergenceAxis::dt ? "dt_ladder"
                             : axis == ConvergenceAxis::T ? "T_ladder"
                                                          : "eps_ladder";
    const std::vector<double> values = studies::ladder(cfg, ladder_key);
    std::vector<double> steps, metrics;
    double floor = studies::tol(cfg, "floor");
    for (double v : values) {
      ExperimentConfig c = cfg;
      switch (axis) {
        case ConvergenceAxis::N: c.set("grid.N", v); break;
        case ConvergenceAxis::dt:
          c.set("time.dt", v);
          c.set("time.dt_per_h", 0.0);
          break;
        case ConvergenceAxis::T: c.set("time.T", v); break;
        case ConvergenceAxis::eps: c.set("multiplier.eps", v); break;
        case ConvergenceAxis::none: throw Error(ErrorCode::invalid_argument, "convergence needs an axis");
      }
      ExperimentReport point;
      study.run(c, StudyContext{axis, false}, point);
      if (!point.scalars.count("convergence_metric"))
        throw Error(ErrorCode::unsupported, study.name + " reports no convergence metric");
      if (point.scalars.count("convergence_floor")) floor = point.scalar("convergence_floor");
      metrics.push_back(point.scalar("convergence_metric"));
      steps.push_back(axis == ConvergenceAxis::N ? studies::grid_from(c)->spacing()
                      : axis == ConvergenceAxis::T ? 1.0 / v
                                                   : v);
    }
    const OrderFit fit = fit_order(steps, metrics, floor);
    rep.add(make_series("metric", to_string(axis), values, metrics));
    rep.add(make_series("step", to_string(axis), values, steps));
    rep.scalar("order", fit.order);
    rep.scalar("r_squared", fit.r_squared);
    rep.scalar("monotone", fit.monotone ? 1.0 : 0.0);
    rep.scalar("floor", fit.floor ? 1.0 : 0.0);
    if (!fit.monotone) rep.notes.push_back("non-monotone ladder");
    if (fit.floor) {
      rep.notes.push_back("floor: every error at or below " + format_number(floor) + "; order not meaningful");
      rep.holds("at_floor", true, "errors at the roundoff floor");
    } else if (axis == ConvergenceAxis::N || axis == ConvergenceAxis::dt) {
      rep.at_most("order", std::abs(fit.order - studies::tol(cfg, "order")), studies::tol(cfg, "order_band"),
                  "|fitted order - expected|");
    } else {
      rep.holds("monotone", fit.monotone, "metric shrinks along the ladder");
    }
    out.exit_code = rep.passed() ? exit_ok : exit_failed;
  } catch (const std::exception& e) {
    classify(out, e);
  }
  rep.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace dilab
