#include <algorithm>
#include <cmath>
#include <optional>

#include "dilab/error.hpp"
#include "dilab/fitting.hpp"
#include "study_support.hpp"

namespace dilab::studies {

namespace {

double energy_form(const ComplexField& u, const Potential& V) {
  return integrate(*u.grid, RealVector(gradient_sq(u).values + V.values().cwiseProduct(u.values.cwiseAbs2())));
}

double splitstep_error(const SpectralOperator& op, const ComplexField& f, double T, double dt) {
  const ComplexField exact = op.propagate(f, T);
  const ComplexField split = propagate_splitstep(op.potential(), f, T, dt);
  return ComplexField(f.grid, split.values - exact.values).norm() / f.norm();
}

}  // namespace

void conservation_study(const ExperimentConfig& cfg, const StudyContext& ctx, ExperimentReport& rep) {
  const GridPtr grid = grid_from(cfg);
  const PotentialPtr V = potential_from(cfg, grid);
  const SpectralOperatorPtr op = assemble_hamiltonian(V);
  const ComplexField f = data_from(cfg, grid);
  const double dt = time_step(cfg, *grid);
  const double T = cfg.number("time.T");
  const TailGuard guard = guard_from(cfg);

  if (ctx.axis == ConvergenceAxis::dt) {
    if (!grid->cartesian()) throw Error(ErrorCode::unsupported, "split-step needs a cartesian grid");
    rep.scalar("splitstep_error", splitstep_error(*op, f, T, dt));
    rep.scalar("convergence_metric", rep.scalar("splitstep_error"));
    return;
  }

  const long steps = cfg.integer("time.steps");
  const long every = std::max(1L, cfg.integer("time.sample_every"));
  if (steps < 1) throw Error(ErrorCode::schema, "time.steps must be positive");
  const double m0 = f.mass();
  const double e0 = energy_form(f, *V);
  const double h0 = op->sobolev_norm(f, 0.5);
  const double scale_e = std::abs(e0) + tol(cfg, "floor");
  const double scale_h = h0 + tol(cfg, "floor");

  ExactEvolution exact(op, f, dt);
  const bool split = grid->cartesian();
  std::optional<SplitStep> stepper;
  if (split) stepper.emplace(V, dt);
  ComplexVector u = f.values;

  std::vector<double> t, mass_drift, split_drift, energy_drift, sobolev_drift;
  double worst_tail = 0.0;
  for (long k = 1; k <= steps; ++k) {
    exact.step();
    if (split) stepper->step(u);
    if (k % every != 0 && k != steps) continue;
    const ComplexField s = exact.state();
    const double tail = s.tail_fraction(guard.fraction);
    worst_tail = std::max(worst_tail, tail);
    if (guard.enforce && tail > guard.threshold)
      throw TailMassBreach(exact.time(), tail, guard.threshold, "conservation_study");
    t.push_back(exact.time());
    mass_drift.push_back(std::abs(s.mass() / m0 - 1.0));
    if (split) split_drift.push_back(std::abs(ComplexField(grid, u).mass() / m0 - 1.0));
    energy_drift.push_back(std::abs(energy_form(s, *V) - e0) / scale_e);
    sobolev_drift.push_back(std::abs(op->sobolev_norm(s, 0.5) - h0) / scale_h);
  }
  const auto max_of = [](const std::vector<double>& v) { return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end()); };

  rep.scalar("mass", m0);
  rep.scalar("energy", e0);
  rep.scalar("sobolev_half_norm", h0);
  rep.scalar("final_time", exact.time());
  rep.scalar("worst_tail_fraction", worst_tail);
  rep.scalar("exact_mass_drift", max_of(mass_drift));
  rep.scalar("energy_drift", max_of(energy_drift));
  rep.scalar("sobolev_drift", max_of(sobolev_drift));
  rep.add(make_series("exact_mass_drift", "t", t, mass_drift));
  rep.add(make_series("energy_drift", "t", t, energy_drift));
  rep.add(make_series("sobolev_drift", "t", t, sobolev_drift));
  rep.at_most("exact_mass_drift", max_of(mass_drift), tol(cfg, "unitarity"),
              std::to_string(steps) + " steps of the exact propagator");
  rep.at_most("energy_drift", max_of(energy_drift), tol(cfg, "energy"));
  rep.at_most("sobolev_half_drift", max_of(sobolev_drift), tol(cfg, "sobolev"));
  if (split) {
    rep.scalar("splitstep_mass_drift", max_of(split_drift));
    rep.add(make_series("splitstep_mass_drift", "t", t, split_drift));
    rep.at_most("splitstep_mass_drift", max_of(split_drift), tol(cfg, "splitstep"));
  } else {
    rep.notes.push_back("split-step runs only on cartesian grids; skipped");
  }

  // Round trip e^{iTH} e^{-iTH} f = f, and e^{-iTH} f = conj(e^{iTH} conj f) for real V.
  const ComplexField back = op->propagate(f, -T);
  const ComplexField mirrored(grid, op->propagate(ComplexField(grid, f.values.conjugate()), T).values.conjugate());
  const double round_trip = ComplexField(grid, op->propagate(back, T).values - f.values).norm() / f.norm();
  const double mirror = ComplexField(grid, back.values - mirrored.values).norm() / f.norm();
  const double reversal = std::max(round_trip, mirror);
  rep.scalar("time_reversal_defect", reversal);
  rep.at_most("time_reversal", reversal, tol(cfg, "reversal"));

  if (split && ctx.ladders && cfg.numbers("sweep.dt_ladder").size() >= 2) {
    const std::vector<double> dts = ladder(cfg, "dt_ladder");
    std::vector<double> errors(dts.size());
    for (std::size_t j = 0; j < dts.size(); ++j) errors[j] = splitstep_error(*op, f, T, dts[j]);
    const OrderFit fit = fit_order(dts, errors, tol(cfg, "floor"));
    rep.add(make_series("splitstep_error", "dt", dts, errors));
    rep.scalar("splitstep_order", fit.order);
    rep.scalar("splitstep_order_r2", fit.r_squared);
    rep.at_most("splitstep_order", std::abs(fit.order - tol(cfg, "order")), tol(cfg, "order_band"),
                "|fitted order - expected| over the dt ladder");
  }
  rep.scalar("convergence_metric", max_of(mass_drift));
  rep.scalar("convergence_floor", tol(cfg, "unitarity"));
}

}  // namespace dilab::studies
