#include <algorithm>
#include <cmath>

#include "dilab/error.hpp"
#include "dilab/fitting.hpp"
#include "dilab/parallel.hpp"
#include "study_support.hpp"

namespace dilab::studies {

namespace {

struct LadderResult {
  std::vector<double> steps;
  std::vector<double> values;
};

/// Evaluates `metric` at every N of the ladder, reusing `base` when N matches the configured grid.
template <class Metric>
LadderResult grid_ladder(const ExperimentConfig& cfg, double base, Metric metric) {
  const std::vector<double> Ns = ladder(cfg, "N_ladder");
  const long N0 = cfg.integer("grid.N");
  LadderResult out{std::vector<double>(Ns.size()), std::vector<double>(Ns.size())};
  parallel_for(Ns.size(), [&](std::size_t j) {
    ExperimentConfig c = cfg;
    c.set("grid.N", Ns[j]);
    const GridPtr g = grid_from(c);
    out.steps[j] = g->spacing();
    out.values[j] = std::lround(Ns[j]) == N0 ? base : metric(c);
  });
  return out;
}

void order_criterion(ExperimentReport& rep, const ExperimentConfig& cfg, const std::string& name,
                     const LadderResult& l) {
  if (l.steps.size() < 2) {
    rep.notes.push_back("sweep.N_ladder has a single entry; no order fitted");
    return;
  }
  const OrderFit fit = fit_order(l.steps, l.values, tol(cfg, "floor"));
  rep.add(make_series(name, "h", l.steps, l.values));
  rep.scalar(name + "_order", fit.order);
  rep.scalar(name + "_order_r2", fit.r_squared);
  rep.scalar(name + "_ladder_monotone", fit.monotone ? 1.0 : 0.0);
  if (fit.floor) {
    rep.holds(name + "_order", true, "every error at the roundoff floor; order not fitted");
    return;
  }
  rep.at_most(name + "_order", std::abs(fit.order - tol(cfg, "order")), tol(cfg, "order_band"),
              "|fitted order - expected| over the N ladder");
}

IdentityTerms identity_at(const ExperimentConfig& cfg) {
  const GridPtr grid = grid_from(cfg);
  const SpectralOperatorPtr op = assemble_hamiltonian(potential_from(cfg, grid));
  return finite_T_terms(*op, multiplier_from(cfg, grid), data_from(cfg, grid), cfg.number("time.T"),
                        time_step(cfg, *grid), guard_from(cfg), tol(cfg, "floor"));
}

PseudoconformalLedger ledger_at(const ExperimentConfig& cfg, const PotentialPtr& V, Trajectory* keep = nullptr) {
  const GridPtr grid = V->grid();
  const SpectralOperatorPtr op = assemble_hamiltonian(V);
  const Trajectory traj = evolve(*op, data_from(cfg, grid),
                                 uniform_times(0.0, cfg.number("time.T"), time_step(cfg, *grid)), guard_from(cfg));
  if (keep) *keep = traj;
  return pseudoconformal_ledger(traj, *V);
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

void finite_T_identity(const ExperimentConfig& cfg, const StudyContext& ctx, ExperimentReport& rep) {
  const IdentityTerms base = identity_at(cfg);
  rep.scalar("lhs", base.lhs);
  rep.scalar("rhs", base.rhs);
  rep.scalar("residual", base.residual);
  rep.scalar("worst_tail_fraction", base.worst_tail);
  rep.add(make_series("integrand", "t", base.times, base.integrand));
  rep.at_most("residual", base.residual, tol(cfg, "residual"), "|LHS - RHS| / (|LHS| + |RHS| + floor)");
  if (ctx.ladders) order_criterion(rep, cfg, "residual", grid_ladder(cfg, base.residual, [](const ExperimentConfig& c) {
                                     return identity_at(c).residual;
                                   }));
  rep.scalar("convergence_metric", base.residual);
}

void pseudoconformal_study(const ExperimentConfig& cfg, const StudyContext& ctx, ExperimentReport& rep) {
  const GridPtr grid = grid_from(cfg);
  const PseudoconformalLedger ledger = ledger_at(cfg, potential_from(cfg, grid));
  rep.add(ledger.lhs);
  rep.add(ledger.rhs);
  rep.add(ledger.relative);
  rep.add(ledger.theta);
  rep.scalar("max_relative_residual", ledger.max_relative);
  rep.at_most("residual", ledger.max_relative, tol(cfg, "residual"), "max over t of |lhs - rhs| / lhs");

  // Control run without potential: theta vanishes and the lhs is conserved.
  const PseudoconformalLedger control = ledger_at(cfg, zero_potential(grid));
  const double theta0 = max_abs(control.theta.values);
  const double l0 = control.lhs.values.front();
  double drift = 0.0;
  for (double v : control.lhs.values) drift = std::max(drift, std::abs(v - l0) / (std::abs(l0) + tol(cfg, "floor")));
  rep.scalar("control_max_theta", theta0);
  rep.scalar("control_lhs_drift", drift);
  rep.at_most("control_theta", theta0, tol(cfg, "residual"), "V = 0");
  rep.at_most("control_lhs_constant", drift, tol(cfg, "residual"), "V = 0");

  if (ctx.ladders) order_criterion(rep, cfg, "residual", grid_ladder(cfg, ledger.max_relative, [](const ExperimentConfig& c) {
                                     const GridPtr g = grid_from(c);
                                     return ledger_at(c, potential_from(c, g)).max_relative;
                                   }));
  rep.scalar("convergence_metric", ledger.max_relative);
}

void vai_limit_study(const ExperimentConfig& cfg, const StudyContext& ctx, ExperimentReport& rep) {
  const GridPtr grid = grid_from(cfg);
  const PotentialPtr V = potential_from(cfg, grid);
  const SpectralOperatorPtr op = assemble_hamiltonian(V);
  const ComplexField f = data_from(cfg, grid);
  const Multiplier m = multiplier_from(cfg, grid);
  if (m.distributional_at_origin)
    throw Error(ErrorCode::invalid_argument, "the identity needs a multiplier that is smooth at the origin");
  const std::vector<double> Ts = ctx.ladders ? ladder(cfg, "T_ladder") : std::vector<double>{cfg.number("time.T")};
  const double Tmax = Ts.back();
  const std::vector<double> times = symmetric_times(Tmax, time_step(cfg, *grid));
  const Trajectory traj = evolve(*op, f, times, guard_from(cfg));
  const std::vector<StateDensity> dens = state_densities(traj);
  const double norm_sq = std::pow(op->sobolev_norm(f, 0.5), 2);
  const double target = m.slope_inf * norm_sq;
  const double floor = tol(cfg, "floor");

  const auto lhs_series = [&](const Multiplier& mm) {
    std::vector<double> v(Ts.size());
    for (std::size_t j = 0; j < Ts.size(); ++j) v[j] = identity_lhs(window_integral(dens, times, Ts[j]), mm, *V);
    return v;
  };
  const std::vector<double> lhs = lhs_series(m);
  std::vector<double> gap(Ts.size());
  for (std::size_t j = 0; j < Ts.size(); ++j) gap[j] = relative_gap(lhs[j], target, floor);

  rep.scalar("norm_half_sq", norm_sq);
  rep.scalar("slope_at_infinity", m.slope_inf);
  rep.scalar("target", target);
  rep.scalar("final_gap", gap.back());
  rep.scalar("worst_tail_fraction", traj.worst_tail);
  rep.add(make_series("lhs", "T", Ts, lhs));
  rep.add(make_series("gap", "T", Ts, gap));
  if (Ts.size() > 1) rep.holds("gap_decreasing", strictly_decreasing(gap), "gap to psi'(inf) ||f||^2 over the T ladder");
  rep.at_most("final_gap", gap.back(), tol(cfg, "final_gap"), "T = " + format_number(Tmax));

  const double lambda = cfg.number("sweep.lambda");
  MultiplierParams scaled = multiplier_params(cfg);
  scaled.scale *= lambda;
  const Multiplier ms = build_multiplier(m.profile.family(), scaled, grid);
  const double lhs_s = lhs_series(ms).back();
  const double scale_err = std::abs(lhs_s - lambda * lhs.back()) / (std::abs(lambda * lhs.back()) + floor);
  const double target_err = std::abs(ms.slope_inf * norm_sq - lambda * target) / (std::abs(lambda * target) + floor);
  rep.scalar("scaling_error", std::max(scale_err, target_err));
  rep.at_most("scaling", std::max(scale_err, target_err), tol(cfg, "scaling"), "psi -> lambda psi");

  MultiplierParams shifted = multiplier_params(cfg);
  shifted.offset += 1.0;
  const std::vector<double> lhs_o = lhs_series(build_multiplier(m.profile.family(), shifted, grid));
  rep.holds("offset_invariance", lhs_o == lhs, "psi -> psi + 1 leaves the LHS series bitwise unchanged");

  if (cfg.text("data.family") == "gaussian")
    rep.notes.push_back("gaussian data is not compactly supported; it is numerically compact on the box");
  rep.scalar("convergence_metric", gap.back());
}

}  // namespace dilab::studies
