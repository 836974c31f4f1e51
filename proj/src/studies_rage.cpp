#include <algorithm>
#include <cmath>

#include "dilab/error.hpp"
#include "dilab/fitting.hpp"
#include "study_support.hpp"

namespace dilab::studies {

namespace {

RealVector observable_weight(const ExperimentConfig& cfg, const Grid& g) {
  const std::string kind = cfg.text("observable.weight");
  const double R = cfg.number("observable.R");
  const RealVector& r = g.radius();
  if (kind == "inverse_linear") return r.unaryExpr([](double x) { return 1.0 / (1.0 + x); });
  if (kind == "ball") return r.unaryExpr([&](double x) { return Region::ball(R).contains(x) ? 1.0 : 0.0; });
  if (kind == "one") return RealVector::Ones(r.size());
  throw Error(ErrorCode::schema, "observable.weight must be inverse_linear, ball or one, got '" + kind + "'");
}

double localized_mass(const ComplexField& u, double R) { return integrate(*u.grid, RealVector(u.values.cwiseAbs2()), Region::ball(R)); }

void check_tail(const ComplexField& u, double t, const TailGuard& guard, double& worst, const char* where) {
  const double tail = u.tail_fraction(guard.fraction);
  worst = std::max(worst, tail);
  if (guard.enforce && tail > guard.threshold) throw TailMassBreach(t, tail, guard.threshold, where);
}

}  // namespace

void rage_study(const ExperimentConfig& cfg, const StudyContext& ctx, ExperimentReport& rep) {
  const GridPtr grid = grid_from(cfg);
  const PotentialPtr V = potential_from(cfg, grid);
  const SpectralOperatorPtr op = assemble_hamiltonian(V);
  const ComplexField f = data_from(cfg, grid);
  const TailGuard guard = guard_from(cfg);
  const double R = cfg.number("observable.R");
  if (R > grid->extent()) throw Error(ErrorCode::region_exceeds_extent, "observable.R exceeds the domain");
  if (!V->hypotheses().rageweak)
    rep.notes.push_back("the potential is not certified to satisfy the weak decay hypothesis");
  const std::vector<double> Ts = ctx.ladders ? ladder(cfg, "T_ladder") : std::vector<double>{cfg.number("time.T")};
  const std::vector<double> ts = ladder(cfg, "t_ladder");
  const double dt = time_step(cfg, *grid);

  // For real data and real V, u(-t) = conj u(t): the localized mass is even in t.
  const bool real_data = f.values.imag().cwiseAbs().maxCoeff() == 0.0;
  const Trajectory traj =
      evolve(*op, f, real_data ? uniform_times(0.0, Ts.back(), dt) : symmetric_times(Ts.back(), dt), guard);
  double worst = traj.worst_tail;
  std::vector<double> average(Ts.size());
  for (std::size_t k = 0; k < Ts.size(); ++k) {
    if (!real_data) {
      average[k] = rage_time_average(traj, R, Ts[k]);
      continue;
    }
    const Trajectory win = traj.window(Ts[k]);
    const auto w = win.time_weights();
    double s = 0.0;
    for (std::size_t j = 0; j < win.size(); ++j) s += w[j] * localized_mass(win.states[j], R);
    average[k] = 2.0 * s / Ts[k];
  }
  if (real_data) rep.notes.push_back("real data: the time average over [-T, T] uses u(-t) = conj u(t)");
  rep.add(make_series("time_average", "T", Ts, average));
  if (Ts.size() >= 2) {
    std::vector<double> ratios;
    bool doubling = true;
    for (std::size_t k = 1; k < Ts.size(); ++k) {
      ratios.push_back(average[k] / average[k - 1]);
      doubling = doubling && std::abs(Ts[k] / Ts[k - 1] - 2.0) < 1e-12;
    }
    if (!doubling) rep.notes.push_back("sweep.T_ladder is not a doubling ladder");
    rep.add(make_series("average_ratio", "T", std::vector<double>(Ts.begin() + 1, Ts.end()), ratios));
    rep.at_most("time_average_halving", *std::max_element(ratios.begin(), ratios.end()), tol(cfg, "halving"),
                "worst ratio of consecutive time averages");
  }

  double drift = 0.0;
  const double m0 = f.mass();
  for (const ComplexField& u : traj.states) drift = std::max(drift, std::abs(u.mass() / m0 - 1.0));
  rep.scalar("unit_weight_drift", drift);
  rep.at_most("unit_weight_constant", drift, tol(cfg, "unitarity"), "W = 1 gives ||u(t)||^2 = ||f||^2");

  const RealVector W = observable_weight(cfg, *grid);
  const Eigen::MatrixXcd states = op->propagate_many(f, ts);
  std::vector<double> pointwise(ts.size()), phase_grad(ts.size());
  for (std::size_t j = 0; j < ts.size(); ++j) {
    const ComplexField u(grid, states.col(static_cast<Eigen::Index>(j)));
    check_tail(u, ts[j], guard, worst, "rage_study");
    pointwise[j] = weighted_observable(u, W);
    phase_grad[j] = phase_corrected_gradient(u, ts[j]);
  }
  rep.add(make_series("weighted_observable", "t", ts, pointwise));
  rep.add(make_series("phase_corrected_gradient", "t", ts, phase_grad));
  const double decay = pointwise.back() / pointwise.front();
  rep.scalar("pointwise_ratio", decay);
  if (cfg.text("observable.weight") != "one")
    rep.at_most("pointwise_decay", decay, tol(cfg, "decay_ratio"),
                "t = " + format_number(ts.back()) + " against t = " + format_number(ts.front()));
  rep.holds("phase_corrected_gradient_decreasing", non_increasing(phase_grad, tol(cfg, "roundoff")),
            "over the t ladder");
  rep.scalar("worst_tail_fraction", worst);
  rep.scalar("convergence_metric", average.back());
}

void reversibility_demo(const ExperimentConfig& cfg, const StudyContext&, ExperimentReport& rep) {
  const GridPtr grid = grid_from(cfg);
  const PotentialPtr V = potential_from(cfg, grid);
  const SpectralOperatorPtr op = assemble_hamiltonian(V);
  const double R = cfg.number("observable.R");
  const double t = cfg.number("time.t_reverse");
  if (R > grid->extent()) throw Error(ErrorCode::region_exceeds_extent, "observable.R exceeds the domain");

  DataParams bump = data_params(cfg);
  bump.family = "compact_bump";
  bump.radius = R;
  bump.normalize = true;
  const ComplexField fR = make_initial_data(grid, bump);
  const RealVector chi = grid->radius().unaryExpr([&](double x) { return Region::ball(R).contains(x) ? 1.0 : 0.0; });
  const auto cut = [&](const ComplexField& u) { return ComplexField(grid, chi.cast<cplx>().cwiseProduct(u.values)); };

  const ComplexField g = op->propagate(fR, -t);
  const ComplexField u = op->propagate(g, t);
  const double recovery = ComplexField(grid, cut(u).values - fR.values).norm();
  const double localized = cut(u).norm();
  rep.scalar("t", t);
  rep.scalar("recovery_error", recovery);
  rep.scalar("full_recovery_error", ComplexField(grid, u.values - fR.values).norm());
  rep.scalar("localized_norm", localized);
  rep.scalar("localized_norm_t0", cut(fR).norm());
  rep.scalar("g_tail_fraction", g.tail_fraction(cfg.number("tolerances.tail_fraction")));
  rep.notes.push_back("the tail of g = e^{-itH} f_R is a diagnostic; the round trip is exact in the eigenbasis");
  rep.at_most("recovery", recovery, tol(cfg, "recovery"), "|| chi u(t) - f_R ||");
  rep.at_most("localized_norm", std::abs(localized - 1.0), tol(cfg, "localized"), "| ||chi u(t)|| - 1 |");

  // Generic data at the same t decays inside the ball.
  const TailGuard guard = guard_from(cfg);
  double worst = 0.0;
  const ComplexField f = data_from(cfg, grid);
  const ComplexField ut = op->propagate(f, t);
  check_tail(ut, t, guard, worst, "reversibility_demo");
  const double generic = localized_mass(ut, R) / localized_mass(f, R);
  rep.scalar("generic_localized_ratio", generic);
  rep.scalar("bump_forward_localized_norm", cut(op->propagate(fR, t)).norm());
  rep.scalar("worst_tail_fraction", worst);
  rep.at_most("generic_decay", generic, tol(cfg, "decay_ratio"),
              "int_{|x|<R} |e^{itH} f|^2 against its value at t = 0");
  rep.scalar("convergence_metric", recovery);
}

}  // namespace dilab::studies
