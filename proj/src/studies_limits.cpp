#include <algorithm>
#include <cmath>

#include "dilab/error.hpp"
#include "dilab/fitting.hpp"
#include "dilab/parallel.hpp"
#include "dilab/scattering.hpp"
#include "study_support.hpp"

namespace dilab::studies {

namespace {

bool is_real(const ComplexField& f) { return f.values.imag().cwiseAbs().maxCoeff() == 0.0; }

void check_tail(const ComplexField& u, double t, const TailGuard& guard, double& worst, const char* where) {
  const double tail = u.tail_fraction(guard.fraction);
  worst = std::max(worst, tail);
  if (guard.enforce && tail > guard.threshold) throw TailMassBreach(t, tail, guard.threshold, where);
}

}  // namespace

void scattering_study(const ExperimentConfig& cfg, const StudyContext& ctx, ExperimentReport& rep) {
  const GridPtr grid = grid_from(cfg);
  if (!grid->cartesian()) throw Error(ErrorCode::unsupported, "scattering_study needs a cartesian grid");
  const PotentialPtr V = potential_from(cfg, grid);
  const ComplexField f = data_from(cfg, grid);
  const TailGuard guard = guard_from(cfg);
  const double floor = tol(cfg, "floor");
  const std::vector<double> Ts = ctx.ladders ? ladder(cfg, "T_ladder") : std::vector<double>{cfg.number("time.T")};

  // Free operator: the identity reduces to the Fourier form of the H^{1/2} norm, and W f = f.
  const SpectralOperatorPtr op0 = assemble_hamiltonian(zero_potential(grid));
  const double free_norm = std::pow(op0->sobolev_norm(f, 0.5), 2);
  const double fourier = fourier_half_weight(f);
  const double convention = relative_gap(fourier, free_norm, floor);
  rep.scalar("convention_error", convention);
  rep.at_most("convention", convention, tol(cfg, "convention"), "V = 0: ||f||^2_{H^{1/2}} against 2 pi int |xi||f^|^2");
  const ScatteringState free_state = wave_operator(*op0, f, 1, {Ts.front()}, guard);
  const double free_wave = ComplexField(grid, free_state.wave.values - f.values).norm() / f.norm();
  rep.scalar("free_wave_defect", free_wave);
  rep.at_most("free_wave_identity", free_wave, tol(cfg, "isometry"), "V = 0: W f = f");

  const Hypotheses& hyp = V->hypotheses();
  rep.scalar("sr0_C", hyp.sr0_C);
  rep.scalar("sr0_eps", hyp.sr0_eps);
  const SpectralOperatorPtr op = assemble_hamiltonian(V);
  const ScatteringState st = wave_operator(*op, f, 1, Ts, guard);
  std::vector<double> residual(Ts.size());
  for (std::size_t j = 0; j < Ts.size(); ++j) residual[j] = scattering_weight(st.approximations[j], f, *op).residual;
  const double target = scattering_weight(st, *op).target;
  rep.scalar("target", target);
  rep.scalar("final_residual", residual.back());
  rep.scalar("worst_tail_fraction", st.worst_tail);
  rep.add(make_series("residual", "T", Ts, residual));
  rep.add(make_series("isometry_defect", "T", Ts, st.isometry_defects));
  const double iso = *std::max_element(st.isometry_defects.begin(), st.isometry_defects.end());
  rep.scalar("max_isometry_defect", iso);
  rep.at_most("isometry", iso, tol(cfg, "isometry"), "| ||W_T f|| - ||f|| | / ||f||");
  if (Ts.size() > 1) {
    rep.holds("residual_decreasing", strictly_decreasing(residual), "over the T ladder");
    rep.add(make_series("cauchy_difference", "T", std::vector<double>(Ts.begin() + 1, Ts.end()), st.differences));
  }
  rep.at_most("final_residual", residual.back(), tol(cfg, "final_gap"), "T = " + format_number(Ts.back()));

  // Incoming wave operator at the largest T.
  const ScatteringState minus = wave_operator(*op, f, -1, {Ts.back()}, guard);
  rep.scalar("final_residual_minus", scattering_weight(minus, *op).residual);
  rep.scalar("isometry_defect_minus", minus.isometry_defects.front());

  // Free asymptotic profile against the free evolution, at both signs of t.
  std::vector<double> profile_error(Ts.size()), profile_norm_gap(Ts.size());
  double free_tail = 0.0;
  parallel_for(Ts.size(), [&](std::size_t j) {
    const ComplexField u = propagate_free(f, Ts[j]);
    const ComplexField a = asymptotic_profile(f, Ts[j]);
    const ComplexField am = asymptotic_profile(f, -Ts[j]);
    profile_error[j] = ComplexField(grid, u.values - a.values).norm() / f.norm();
    profile_norm_gap[j] = std::abs(a.norm() - am.norm()) / f.norm();
  });
  for (double T : Ts) check_tail(propagate_free(f, T), T, guard, free_tail, "free evolution");
  rep.add(make_series("profile_error", "T", Ts, profile_error));
  rep.scalar("profile_sign_norm_gap", *std::max_element(profile_norm_gap.begin(), profile_norm_gap.end()));
  if (Ts.size() > 1) rep.holds("profile_error_decreasing", strictly_decreasing(profile_error), "free evolution");
  rep.scalar("convergence_metric", residual.back());
}

void dispersive_limits_study(const ExperimentConfig& cfg, const StudyContext&, ExperimentReport& rep) {
  const GridPtr grid = grid_from(cfg);
  const PotentialPtr V = potential_from(cfg, grid);
  const SpectralOperatorPtr op = assemble_hamiltonian(V);
  const ComplexField f = data_from(cfg, grid);
  const TailGuard guard = guard_from(cfg);
  const double floor = tol(cfg, "floor");
  double worst = 0.0;

  const std::vector<double> ts = ladder(cfg, "t_ladder");
  const Eigen::MatrixXcd states = op->propagate_many(f, ts);
  std::vector<double> defect(ts.size()), sigma(ts.size());
  for (std::size_t j = 0; j < ts.size(); ++j) {
    const ComplexField u(grid, states.col(static_cast<Eigen::Index>(j)));
    check_tail(u, ts[j], guard, worst, "dispersive_limits_study");
    defect[j] = dispersive_defect(u, ts[j]);
    sigma[j] = sigma_half_norm(u, *op);
  }
  const double ratio = defect.back() / defect.front();
  rep.add(make_series("dispersive_defect", "t", ts, defect));
  rep.add(make_series("sigma_half_norm_sq", "t", ts, sigma));
  rep.scalar("defect_first", defect.front());
  rep.scalar("defect_last", defect.back());
  rep.scalar("defect_ratio", ratio);
  const bool finite_sigma = std::all_of(sigma.begin(), sigma.end(), [](double s) { return std::isfinite(s); });
  rep.holds("sigma_half_finite", finite_sigma && std::isfinite(sigma_half_norm(f, *op)), "along the sampled times");
  if (grid->cartesian()) {
    rep.holds("defect_decreasing", strictly_decreasing(defect), "||(x/t)u - 2i grad u|| over the t ladder");
    rep.at_most("defect_ratio", ratio, tol(cfg, "decay_ratio") * (1.0 + tol(cfg, "roundoff")),
                "t = " + format_number(ts.back()) + " against t = " + format_number(ts.front()));
  } else {
    rep.notes.push_back("radial grids report the dispersive defect as a diagnostic only");
  }

  const int n = grid->dimension();
  if (n < 2) {
    rep.notes.push_back("virial limits need n >= 2; skipped");
    rep.scalar("worst_tail_fraction", worst);
    rep.scalar("convergence_metric", ratio);
    return;
  }

  const double t_max = cfg.number("time.t_max");
  const Trajectory traj = evolve(*op, f, uniform_times(0.0, t_max, time_step(cfg, *grid)), guard);
  worst = std::max(worst, traj.worst_tail);
  const std::size_t m = traj.size();
  std::vector<double> G(m), wm(m), wm_t, t_pos;
  parallel_for(m, [&](std::size_t j) {
    G[j] = centered_flux_G(traj.states[j]);
    wm[j] = weighted_mass(traj.states[j]);
  });
  for (std::size_t j = 0; j < m; ++j)
    if (traj.times[j] > 0.0) {
      t_pos.push_back(traj.times[j]);
      wm_t.push_back(wm[j] / traj.times[j]);
    }
  const double nh = std::pow(op->sobolev_norm(f, 0.5), 2);
  const double limit = 2.0 * nh;
  const double gap_G = relative_gap(G.back(), limit, floor);
  const double gap_wm = relative_gap(wm.back() / t_max, limit, floor);
  rep.add(make_series("G", "t", traj.times, G));
  rep.add(make_series("weighted_mass", "t", traj.times, wm));
  rep.add(make_series("weighted_mass_over_t", "t", t_pos, wm_t));
  rep.scalar("norm_half_sq", nh);
  rep.scalar("G_final", G.back());
  rep.scalar("G_gap", gap_G);
  rep.scalar("weighted_mass_over_t_gap", gap_wm);
  rep.at_most("G_limit", gap_G, tol(cfg, "final_gap"), "|G(t) - 2||f||^2_{H^{1/2}_V}| relative, t = " + format_number(t_max));
  rep.at_most("weighted_mass_limit", gap_wm, tol(cfg, "final_gap"), "weighted_mass(u(t))/t against 2||f||^2_{H^{1/2}_V}");

  // wm(t) <= wm(0) + C (1 + t) ||f||^2_{H^{1/2}_V}; the virial identity bounds C by max|G| / ||f||^2.
  double c_measured = 0.0, g_max = 0.0;
  std::vector<double> margin(m);
  for (std::size_t j = 0; j < m; ++j) {
    c_measured = std::max(c_measured, (wm[j] - wm.front()) / ((1.0 + traj.times[j]) * nh));
    g_max = std::max(g_max, std::abs(G[j]));
  }
  const double c_bound = g_max / nh;
  for (std::size_t j = 0; j < m; ++j) margin[j] = wm.front() + c_measured * (1.0 + traj.times[j]) * nh - wm[j];
  rep.add(make_series("weighted_mass_margin", "t", traj.times, margin));
  rep.scalar("weighted_mass_C_measured", c_measured);
  rep.scalar("weighted_mass_C_bound", c_bound);
  rep.at_most("weighted_mass_bound", c_measured, c_bound * (1.0 + tol(cfg, "roundoff")), "measured C against max|G| / ||f||^2_{H^{1/2}_V}");

  // d/dt weighted_mass = G by centred differences.
  double virial_rate = 0.0;
  for (std::size_t j = 1; j + 1 < m; ++j) {
    const double d = (wm[j + 1] - wm[j - 1]) / (traj.times[j + 1] - traj.times[j - 1]);
    virial_rate = std::max(virial_rate, std::abs(d - G[j]));
  }
  virial_rate /= g_max + floor;
  rep.scalar("virial_rate_error", virial_rate);
  rep.at_most("virial_rate", virial_rate, tol(cfg, "virial_rate"), "centred d/dt weighted_mass against G");

  if (is_real(f)) {
    const double g_minus = centered_flux_G(op->propagate(f, -t_max));
    rep.scalar("G_at_zero", G.front());
    rep.scalar("G_odd_defect", std::abs(g_minus + G.back()) / (std::abs(G.back()) + floor));
    rep.at_most("G_zero_at_origin", std::abs(G.front()) / limit, tol(cfg, "roundoff"), "real data");
    rep.at_most("G_odd", rep.scalar("G_odd_defect"), tol(cfg, "roundoff"), "G(-t) = -G(t) for real data");
  }
  rep.scalar("worst_tail_fraction", worst);
  rep.scalar("convergence_metric", gap_G);
}

}  // namespace dilab::studies
