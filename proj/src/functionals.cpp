#include "dilab/functionals.hpp"

#include <cmath>
#include <numbers>

#include "dilab/error.hpp"
#include "dilab/fft.hpp"

namespace dilab {

double Trajectory::dt() const { return times.size() < 2 ? 0.0 : (times.back() - times.front()) / (times.size() - 1.0); }

std::vector<double> Trajectory::time_weights() const {
  std::vector<double> w(times.size(), 0.0);
  for (std::size_t j = 0; j + 1 < times.size(); ++j) {
    const double half = 0.5 * (times[j + 1] - times[j]);
    w[j] += half;
    w[j + 1] += half;
  }
  return w;
}

Trajectory Trajectory::window(double T) const {
  Trajectory out;
  out.grid = grid;
  out.provenance = provenance;
  const double slack = 1e-9 * std::max(1.0, T);
  for (std::size_t j = 0; j < times.size(); ++j) {
    if (std::abs(times[j]) <= T + slack) {
      out.times.push_back(times[j]);
      out.states.push_back(states[j]);
      out.worst_tail = std::max(out.worst_tail, states[j].tail_fraction());
    }
  }
  return out;
}

std::vector<double> uniform_times(double t0, double t1, double dt) {
  if (!(dt > 0.0)) throw Error(ErrorCode::invalid_argument, "time step must be positive");
  if (t1 < t0) throw Error(ErrorCode::invalid_argument, "time interval is reversed");
  const long m = std::max(1L, std::lround((t1 - t0) / dt));
  std::vector<double> t(static_cast<std::size_t>(m) + 1);
  for (long j = 0; j <= m; ++j) t[static_cast<std::size_t>(j)] = t0 + (t1 - t0) * static_cast<double>(j) / static_cast<double>(m);
  t.back() = t1;
  return t;
}

Trajectory evolve(const SpectralOperator& op, const ComplexField& f, const std::vector<double>& times,
                  const TailGuard& guard) {
  Trajectory traj;
  traj.grid = op.grid();
  traj.provenance = "exact eigendecomposition";
  for (std::size_t j = 1; j < times.size(); ++j)
    if (!(times[j] > times[j - 1])) throw Error(ErrorCode::invalid_argument, "trajectory times must increase");
  traj.times = times;
  traj.states.reserve(times.size());
  constexpr std::size_t chunk = 64;
  for (std::size_t start = 0; start < times.size(); start += chunk) {
    const std::size_t stop = std::min(times.size(), start + chunk);
    const std::vector<double> part(times.begin() + static_cast<long>(start), times.begin() + static_cast<long>(stop));
    const Eigen::MatrixXcd u = op.propagate_many(f, part);
    for (std::size_t j = 0; j < part.size(); ++j) {
      ComplexField s(op.grid(), u.col(static_cast<Eigen::Index>(j)), f.label);
      const double tail = s.tail_fraction(guard.fraction);
      traj.worst_tail = std::max(traj.worst_tail, tail);
      if (guard.enforce && tail > guard.threshold) throw TailMassBreach(part[j], tail, guard.threshold, "trajectory");
      if (!s.finite()) throw Error(ErrorCode::numerical, "non-finite state in trajectory");
      traj.states.push_back(std::move(s));
    }
  }
  return traj;
}

double virial_flux(const ComplexField& u, const Multiplier& m) {
  require_same_grid(*u.grid, *m.grid, "virial_flux");
  const ComplexVector du = radial_derivative(u).values;
  const ComplexVector integrand = u.values.conjugate().cwiseProduct(du).cwiseProduct(m.d1.cast<cplx>());
  return integrate(*u.grid, integrand).imag();
}

double centered_flux_G(const ComplexField& u) {
  const ComplexVector du = radial_derivative(u).values;
  return -2.0 * integrate(*u.grid, ComplexVector(u.values.conjugate().cwiseProduct(du))).imag();
}

double weighted_mass(const ComplexField& u) {
  return integrate(*u.grid, RealVector(u.grid->radius().cwiseProduct(u.values.cwiseAbs2())));
}

double sigma_half_norm(const ComplexField& f, const SpectralOperator& op) {
  const double h = op.sobolev_norm(f, 0.5);
  return h * h + weighted_mass(f);
}

SpaceTimeDensities space_time_densities(const Trajectory& traj) {
  SpaceTimeDensities d;
  d.grid = traj.grid;
  const Eigen::Index n = traj.grid->size();
  d.mass = RealVector::Zero(n);
  d.radial = RealVector::Zero(n);
  d.full = RealVector::Zero(n);
  const auto w = traj.time_weights();
  for (std::size_t j = 0; j < traj.size(); ++j) {
    const ComplexField& u = traj.states[j];
    d.mass += w[j] * u.values.cwiseAbs2();
    const RealVector rad = radial_derivative(u).values.cwiseAbs2();
    d.radial += w[j] * rad;
    d.full += w[j] * (traj.grid->radial() ? rad : gradient_sq(u).values);
  }
  return d;
}

double local_smoothing_ratio(const SpaceTimeDensities& d, double R, SmoothingKind kind) {
  if (!(R > 0.0)) throw Error(ErrorCode::invalid_argument, "R must be positive");
  const RealVector w = region_weights(*d.grid, Region::ball(R));
  return w.dot(kind == SmoothingKind::full_gradient ? d.full : d.radial) / R;
}

double local_smoothing_ratio(const Trajectory& traj, double R, SmoothingKind kind) {
  return local_smoothing_ratio(space_time_densities(traj), R, kind);
}

double local_smoothing_ratio_n3(const SpaceTimeDensities& d, double R) {
  const RealVector w = region_weights(*d.grid, Region::ball(R));
  return local_smoothing_ratio(d, R, SmoothingKind::radial_derivative) + w.dot(d.mass) / (R * R * R);
}

double local_smoothing_ratio_n3(const Trajectory& traj, double R) {
  return local_smoothing_ratio_n3(space_time_densities(traj), R);
}

namespace {

// ||x u - 2 i t grad u||^2.
double pseudoconformal_norm_sq(const ComplexField& u, double t) {
  const Grid& g = *u.grid;
  const cplx c(0.0, -2.0 * t);
  if (g.radial()) {
    const ComplexVector du = radial_derivative(u).values;
    const ComplexVector v = g.radius().cast<cplx>().cwiseProduct(u.values) + c * du;
    return g.weights().dot(v.cwiseAbs2());
  }
  const auto grad = gradient(u);
  double acc = 0.0;
  for (int a = 0; a < g.dimension(); ++a) {
    const ComplexVector v = g.coordinate(a).cast<cplx>().cwiseProduct(u.values) + c * grad[a].values;
    acc += g.weights().dot(v.cwiseAbs2());
  }
  return acc;
}

}  // namespace

double dispersive_defect(const ComplexField& u, double t) {
  if (t == 0.0) throw Error(ErrorCode::invalid_argument, "dispersive defect is singular at t = 0");
  return std::sqrt(pseudoconformal_norm_sq(u, t)) / std::abs(t);
}

double phase_corrected_gradient(const ComplexField& u, double t) {
  // grad(e^{i|x|^2/4t} u) = e^{i|x|^2/4t} (grad u + i x u / 2t) and |grad u + i x u/2t| = |x u - 2it grad u| / 2|t|.
  return 0.5 * dispersive_defect(u, t);
}

PseudoconformalLedger pseudoconformal_ledger(const Trajectory& traj, const Potential& potential) {
  if (traj.times.empty() || traj.times.front() != 0.0)
    throw Error(ErrorCode::invalid_argument, "pseudoconformal ledger needs a trajectory starting at t = 0");
  require_same_grid(*traj.grid, *potential.grid(), "pseudoconformal_ledger");
  const Grid& g = *traj.grid;
  const RealVector& v = potential.values();
  const RealVector theta_weight = 8.0 * (v + 0.5 * g.radius().cwiseProduct(potential.radial_derivative()));

  PseudoconformalLedger led;
  led.lhs.name = "pseudoconformal_lhs";
  led.rhs.name = "pseudoconformal_rhs";
  led.residual.name = "pseudoconformal_residual";
  led.relative.name = "pseudoconformal_relative_residual";
  led.theta.name = "theta";
  led.defect.name = "dispersive_defect";

  const double moment = g.weights().dot(g.radius().cwiseAbs2().cwiseProduct(traj.states.front().values.cwiseAbs2()));
  double cumulative = 0.0;
  double prev_t = 0.0;
  double prev_integrand = 0.0;
  for (std::size_t j = 0; j < traj.size(); ++j) {
    const double t = traj.times[j];
    const ComplexField& u = traj.states[j];
    const RealVector a = u.values.cwiseAbs2();
    const double theta = g.weights().dot(theta_weight.cwiseProduct(a));
    const double integrand = t * theta;
    if (j > 0) cumulative += 0.5 * (t - prev_t) * (integrand + prev_integrand);
    prev_t = t;
    prev_integrand = integrand;

    const double pc = pseudoconformal_norm_sq(u, t);
    const double lhs = pc + 4.0 * t * t * g.weights().dot(v.cwiseProduct(a));
    const double rhs = moment + cumulative;
    for (TimeSeries* s : {&led.lhs, &led.rhs, &led.residual, &led.relative, &led.theta}) s->axis_values.push_back(t);
    led.lhs.values.push_back(lhs);
    led.rhs.values.push_back(rhs);
    led.residual.values.push_back(lhs - rhs);
    const double rel = std::abs(lhs - rhs) / (std::abs(lhs) + 1e-14);
    led.relative.values.push_back(rel);
    led.max_relative = std::max(led.max_relative, rel);
    led.theta.values.push_back(theta);
    if (t > 0.0) {
      led.defect.axis_values.push_back(t);
      led.defect.values.push_back(std::sqrt(pc) / t);
    }
  }
  return led;
}

cplx bilinear_form_a(const ComplexField& f, const ComplexField& g) {
  require_same_grid(*f.grid, *g.grid, "bilinear_form_a");
  if (f.grid->dimension() < 2) throw Error(ErrorCode::unsupported, "the bilinear form needs n >= 2");
  const ComplexVector dg = radial_derivative(g).values;
  return integrate(*f.grid, ComplexVector(f.values.conjugate().cwiseProduct(dg)));
}

double homogeneous_half_norm_sq(const ComplexField& f, const SpectralOperator* free_op) {
  if (f.grid->cartesian()) {
    const ComplexVector fh = fourier_transform(f);
    const RealVector xi = frequency_norm_sq(*f.grid).cwiseSqrt();
    return 2.0 * std::numbers::pi * frequency_cell(*f.grid) * xi.dot(fh.cwiseAbs2());
  }
  if (free_op == nullptr) throw Error(ErrorCode::invalid_argument, "radial H^{1/2} norm needs the free operator");
  if (!free_op->potential()->is_zero()) throw Error(ErrorCode::invalid_argument, "operator must be the free Hamiltonian");
  const double s = free_op->sobolev_norm(f, 0.5);
  return s * s;
}

double bilinear_ratio(const ComplexField& h, const SpectralOperator* free_op) {
  const double denom = homogeneous_half_norm_sq(h, free_op);
  return std::abs(bilinear_form_a(h, h)) / denom;
}

double bilinear_ibp_value(const ComplexField& h) {
  const int n = h.grid->dimension();
  return -0.5 * (n - 1.0) * h.grid->weights().dot(h.values.cwiseAbs2().cwiseQuotient(h.grid->radius()));
}

double weighted_observable(const ComplexField& u, const RealVector& w) {
  if (w.size() != u.grid->size()) throw Error(ErrorCode::incompatible_grid, "weight size mismatch");
  return u.grid->weights().dot(w.cwiseProduct(u.values.cwiseAbs2()));
}

double weighted_observable(const ComplexField& u, const std::function<double(double)>& w) {
  const RealVector& r = u.grid->radius();
  RealVector wv(r.size());
  for (Eigen::Index i = 0; i < r.size(); ++i) wv[i] = w(r[i]);
  return weighted_observable(u, wv);
}

double rage_time_average(const Trajectory& traj, double R, double T) {
  if (!(T > 0.0)) throw Error(ErrorCode::invalid_argument, "averaging time must be positive");
  const Trajectory win = traj.window(T);
  if (win.size() < 2) throw Error(ErrorCode::invalid_argument, "trajectory does not cover the averaging window");
  const RealVector w = region_weights(*traj.grid, Region::ball(R));
  const auto tw = win.time_weights();
  double acc = 0.0;
  for (std::size_t j = 0; j < win.size(); ++j) acc += tw[j] * w.dot(win.states[j].values.cwiseAbs2());
  return acc / T;
}

}  // namespace dilab
