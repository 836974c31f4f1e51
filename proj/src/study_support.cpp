#include "study_support.hpp"

#include <algorithm>
#include <cmath>

#include "dilab/error.hpp"

namespace dilab::studies {

GridPtr grid_from(const ExperimentConfig& cfg) {
  return build_grid(parse_grid_mode(cfg.text("grid.mode")), static_cast<int>(cfg.integer("grid.n")),
                    cfg.number("grid.L"), static_cast<int>(cfg.integer("grid.N")));
}

PotentialPtr potential_from(const ExperimentConfig& cfg, const GridPtr& grid) {
  PotentialParams p;
  p.c = cfg.number("potential.c");
  p.p = cfg.number("potential.p");
  p.a = cfg.number("potential.a");
  p.sigma = cfg.number("potential.sigma");
  p.rho = cfg.number("potential.rho");
  p.q = cfg.number("potential.q");
  return sample_potential(parse_potential_family(cfg.text("potential.family")), p, grid,
                          cfg.number("tolerances.hypothesis"));
}

MultiplierParams multiplier_params(const ExperimentConfig& cfg) {
  MultiplierParams p;
  p.eps = cfg.number("multiplier.eps");
  p.k = static_cast<int>(cfg.integer("multiplier.k"));
  p.inner = cfg.number("multiplier.inner");
  p.R = cfg.number("multiplier.R");
  p.offset = cfg.number("multiplier.offset");
  p.scale = cfg.number("multiplier.scale");
  return p;
}

Multiplier multiplier_from(const ExperimentConfig& cfg, const GridPtr& grid) {
  return build_multiplier(parse_multiplier_family(cfg.text("multiplier.family")), multiplier_params(cfg), grid);
}

DataParams data_params(const ExperimentConfig& cfg) {
  DataParams p;
  p.family = cfg.text("data.family");
  p.width = cfg.number("data.width");
  p.amplitude = cfg.number("data.amplitude");
  p.xi0 = cfg.number("data.xi0");
  p.radius = cfg.number("data.radius");
  p.normalize = cfg.flag("data.normalize");
  p.bandlimit = cfg.number("data.bandlimit");
  p.envelope = cfg.number("data.envelope");
  p.hole = cfg.number("data.hole");
  p.modes = static_cast<int>(cfg.integer("data.modes"));
  p.seed = static_cast<std::uint64_t>(cfg.integer("seed"));
  return p;
}

ComplexField data_from(const ExperimentConfig& cfg, const GridPtr& grid) {
  return make_initial_data(grid, data_params(cfg));
}

TailGuard guard_from(const ExperimentConfig& cfg) {
  TailGuard g;
  g.threshold = cfg.number("tolerances.tail_mass");
  g.fraction = cfg.number("tolerances.tail_fraction");
  return g;
}

double time_step(const ExperimentConfig& cfg, const Grid& grid) {
  const double per_h = cfg.number("time.dt_per_h");
  const double dt = per_h > 0.0 ? per_h * grid.spacing() : cfg.number("time.dt");
  if (!(dt > 0.0)) throw Error(ErrorCode::schema, "time step must be positive");
  return dt;
}

double tol(const ExperimentConfig& cfg, const std::string& name) { return cfg.number("tolerances." + name); }

std::vector<double> ladder(const ExperimentConfig& cfg, const std::string& name) {
  std::vector<double> v = cfg.numbers("sweep." + name);
  if (v.empty()) throw Error(ErrorCode::schema, "sweep." + name + " is empty");
  for (double x : v)
    if (!(x > 0.0) || !std::isfinite(x)) throw Error(ErrorCode::schema, "sweep." + name + " must be positive");
  std::sort(v.begin(), v.end());
  if (std::adjacent_find(v.begin(), v.end()) != v.end())
    throw Error(ErrorCode::schema, "sweep." + name + " has repeated entries");
  return v;
}

std::vector<double> symmetric_times(double T, double dt) {
  const std::vector<double> half = uniform_times(0.0, T, dt);
  std::vector<double> t;
  t.reserve(2 * half.size() - 1);
  for (std::size_t j = half.size(); j-- > 1;) t.push_back(-half[j]);
  t.insert(t.end(), half.begin(), half.end());
  return t;
}

StateDensity state_density(const ComplexField& u) {
  StateDensity d;
  d.mass = u.values.cwiseAbs2();
  d.radial = radial_derivative(u).values.cwiseAbs2();
  d.angular = angular_gradient_sq(u).values.values;
  return d;
}

std::vector<StateDensity> state_densities(const Trajectory& traj) {
  std::vector<StateDensity> out(traj.size());
  for (std::size_t j = 0; j < traj.size(); ++j) out[j] = state_density(traj.states[j]);
  return out;
}

StateDensity window_integral(const std::vector<StateDensity>& d, const std::vector<double>& times, double T) {
  if (d.empty() || d.size() != times.size()) throw Error(ErrorCode::invalid_argument, "density/time size mismatch");
  const Eigen::Index n = d.front().mass.size();
  StateDensity out{RealVector::Zero(n), RealVector::Zero(n), RealVector::Zero(n)};
  const double slack = 1e-9 * std::max(1.0, T);
  std::size_t prev = times.size();
  for (std::size_t j = 0; j < times.size(); ++j) {
    if (std::abs(times[j]) > T + slack) continue;
    if (prev < times.size()) {
      const double half = 0.5 * (times[j] - times[prev]);
      for (std::size_t i : {prev, j}) {
        out.mass += half * d[i].mass;
        out.radial += half * d[i].radial;
        out.angular += half * d[i].angular;
      }
    }
    prev = j;
  }
  return out;
}

double identity_lhs(const StateDensity& s, const Multiplier& m, const Potential& potential) {
  const Grid& g = *m.grid;
  const RealVector& r = g.radius();
  const RealVector dens = m.d2.cwiseProduct(s.radial) + m.d1.cwiseQuotient(r).cwiseProduct(s.angular) -
                          0.25 * m.bilap.cwiseProduct(s.mass) -
                          0.5 * potential.radial_derivative().cwiseProduct(m.d1).cwiseProduct(s.mass);
  return g.weights().dot(dens);
}

void record_tail(ExperimentReport& report, const std::string& name, double worst_tail) {
  report.scalar(name, worst_tail);
}

double relative_gap(double value, double target, double floor) {
  return std::abs(value - target) / (std::abs(target) + floor);
}

}  // namespace dilab::studies

namespace dilab {

double identity_integrand(const ComplexField& u, const Multiplier& m, const Potential& potential) {
  require_same_grid(*u.grid, *m.grid, "identity_integrand");
  return studies::identity_lhs(studies::state_density(u), m, potential);
}

IdentityTerms finite_T_terms(const SpectralOperator& op, const Multiplier& m, const ComplexField& f, double T,
                             double dt, const TailGuard& guard, double floor) {
  if (m.distributional_at_origin)
    throw Error(ErrorCode::invalid_argument, "the identity needs a multiplier that is smooth at the origin");
  if (!(T >= 0.0)) throw Error(ErrorCode::invalid_argument, "T must be nonnegative");
  require_same_grid(*op.grid(), *m.grid, "finite_T_terms");
  IdentityTerms out;
  const Potential& V = *op.potential();
  if (T == 0.0) {
    out.times = {0.0};
    out.integrand = {identity_integrand(f, m, V)};
    return out;
  }
  const Trajectory traj = evolve(op, f, studies::symmetric_times(T, dt), guard);
  out.times = traj.times;
  out.worst_tail = traj.worst_tail;
  const auto w = traj.time_weights();
  out.integrand.resize(traj.size());
  for (std::size_t j = 0; j < traj.size(); ++j) {
    out.integrand[j] = identity_integrand(traj.states[j], m, V);
    out.lhs += w[j] * out.integrand[j];
  }
  out.rhs = -0.5 * (virial_flux(traj.states.back(), m) - virial_flux(traj.states.front(), m));
  out.residual = std::abs(out.lhs - out.rhs) / (std::abs(out.lhs) + std::abs(out.rhs) + floor);
  return out;
}

double morawetz_coefficient(int n) { return (n - 1.0) * (n - 3.0) / 4.0; }

}  // namespace dilab
