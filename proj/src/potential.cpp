#include "dilab/potential.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dilab/error.hpp"

namespace dilab {

PotentialFamily parse_potential_family(const std::string& name) {
  if (name == "zero") return PotentialFamily::zero;
  if (name == "inverse_power") return PotentialFamily::inverse_power;
  if (name == "gaussian_bump") return PotentialFamily::gaussian_bump;
  if (name == "compact_bump") return PotentialFamily::compact_bump;
  if (name == "algebraic") return PotentialFamily::algebraic;
  throw Error(ErrorCode::unknown_family, "unknown potential family '" + name + "'");
}

std::string to_string(PotentialFamily family) {
  switch (family) {
    case PotentialFamily::zero: return "zero";
    case PotentialFamily::inverse_power: return "inverse_power";
    case PotentialFamily::gaussian_bump: return "gaussian_bump";
    case PotentialFamily::compact_bump: return "compact_bump";
    case PotentialFamily::algebraic: return "algebraic";
  }
  return "unknown";
}

namespace {

void check_params(PotentialFamily family, const PotentialParams& p) {
  auto fail = [](ErrorCode code, const std::string& m) { throw Error(code, m); };
  switch (family) {
    case PotentialFamily::zero: break;
    case PotentialFamily::inverse_power:
      if (p.c < 0.0) fail(ErrorCode::negative_amplitude, "inverse_power needs c >= 0");
      if (!(p.p >= 1.0)) fail(ErrorCode::invalid_argument, "inverse_power needs p >= 1");
      break;
    case PotentialFamily::gaussian_bump:
      if (p.a < 0.0) fail(ErrorCode::negative_amplitude, "gaussian_bump needs a >= 0");
      if (!(p.sigma > 0.0)) fail(ErrorCode::invalid_argument, "gaussian_bump needs sigma > 0");
      break;
    case PotentialFamily::compact_bump:
      if (p.a < 0.0) fail(ErrorCode::negative_amplitude, "compact_bump needs a >= 0");
      if (!(p.rho > 0.0)) fail(ErrorCode::invalid_argument, "compact_bump needs rho > 0");
      break;
    case PotentialFamily::algebraic:
      if (p.c < 0.0) fail(ErrorCode::negative_amplitude, "algebraic needs c >= 0");
      if (!(p.q > 0.0)) fail(ErrorCode::invalid_argument, "algebraic needs q > 0");
      break;
  }
}

}  // namespace

Potential::Potential(GridPtr grid, PotentialFamily family, PotentialParams params)
    : grid_(std::move(grid)), family_(family), params_(params) {
  if (!grid_) throw Error(ErrorCode::invalid_argument, "potential without grid");
  check_params(family_, params_);
  const RealVector& r = grid_->radius();
  values_.resize(r.size());
  radial_.resize(r.size());
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    values_[i] = value(r[i]);
    radial_[i] = derivative(r[i]);
  }
}

double Potential::value(double r) const {
  const auto& p = params_;
  switch (family_) {
    case PotentialFamily::zero: return 0.0;
    case PotentialFamily::inverse_power: return p.c / std::pow(1.0 + r * r, p.p);
    case PotentialFamily::gaussian_bump: return p.a * std::exp(-r * r / (p.sigma * p.sigma));
    case PotentialFamily::compact_bump: {
      const double s = r / p.rho;
      if (s >= 1.0) return 0.0;
      return p.a * std::exp(1.0 - 1.0 / (1.0 - s * s));
    }
    case PotentialFamily::algebraic: return p.c / std::pow(1.0 + r, p.q);
  }
  return 0.0;
}

double Potential::derivative(double r) const {
  const auto& p = params_;
  switch (family_) {
    case PotentialFamily::zero: return 0.0;
    case PotentialFamily::inverse_power: return -2.0 * p.p * p.c * r / std::pow(1.0 + r * r, p.p + 1.0);
    case PotentialFamily::gaussian_bump: return -2.0 * r / (p.sigma * p.sigma) * value(r);
    case PotentialFamily::compact_bump: {
      const double s = r / p.rho;
      if (s >= 1.0) return 0.0;
      const double d = 1.0 - s * s;
      return value(r) * (-2.0 * s / (p.rho * d * d));
    }
    case PotentialFamily::algebraic: return -p.q * p.c / std::pow(1.0 + r, p.q + 1.0);
  }
  return 0.0;
}

std::string Potential::describe() const {
  std::ostringstream os;
  os << to_string(family_);
  switch (family_) {
    case PotentialFamily::zero: break;
    case PotentialFamily::inverse_power: os << "(c=" << params_.c << ", p=" << params_.p << ")"; break;
    case PotentialFamily::gaussian_bump: os << "(a=" << params_.a << ", sigma=" << params_.sigma << ")"; break;
    case PotentialFamily::compact_bump: os << "(a=" << params_.a << ", rho=" << params_.rho << ")"; break;
    case PotentialFamily::algebraic: os << "(c=" << params_.c << ", q=" << params_.q << ")"; break;
  }
  return os.str();
}

const std::vector<double>& sr0_exponents() {
  static const std::vector<double> eps{0.25, 0.5, 1.0, 2.0};
  return eps;
}

namespace {

// Samples of a function of |x| sorted by radius, one per distinct radius.
struct Profile {
  std::vector<double> r;
  std::vector<double> v;
  std::vector<double> dv;
};

Profile radial_profile(const Potential& pot) {
  const Grid& g = *pot.grid();
  Profile p;
  // Every node of a radial or 1D grid is a distinct radius; the 2D box is sampled along
  // its positive x-axis so that rays are covered up to the inscribed radius L.
  std::vector<double> radii;
  if (g.radial()) {
    radii.assign(g.axis().data(), g.axis().data() + g.axis().size());
  } else {
    for (Eigen::Index i = 0; i < g.axis().size(); ++i)
      if (g.axis()[i] > 0.0) radii.push_back(g.axis()[i]);
  }
  for (double r : radii) {
    p.r.push_back(r);
    p.v.push_back(pot.value(r));
    p.dv.push_back(pot.derivative(r));
  }
  return p;
}

bool non_increasing(const std::vector<double>& g, std::size_t from) {
  for (std::size_t i = from + 1; i < g.size(); ++i)
    if (g[i] > g[i - 1] * (1.0 + 1e-12) + 1e-300) return false;
  return true;
}

struct OuterTrend {
  double max = 0.0;
  double first = 0.0;   // max over the inner half of the outer range
  double second = 0.0;  // max over the outer half
};

OuterTrend outer_trend(const std::vector<double>& v, std::size_t from) {
  OuterTrend t;
  const std::size_t mid = from + (v.size() - from) / 2;
  for (std::size_t i = from; i < v.size(); ++i) {
    t.max = std::max(t.max, v[i]);
    if (i < mid) t.first = std::max(t.first, v[i]);
    else t.second = std::max(t.second, v[i]);
  }
  return t;
}

}  // namespace

Hypotheses validate_assumptions(const Potential& potential, double tolerance) {
  Hypotheses h;
  h.tolerance = tolerance;
  const Profile p = radial_profile(potential);
  const std::size_t m = p.r.size();
  const std::size_t outer = m - std::max<std::size_t>(2, m / 4);

  const double vmin = potential.values().minCoeff();
  const double vmax = potential.values().cwiseAbs().maxCoeff();

  // (SR0): V >= 0 and V (1 + r)^{1 + eps} bounded; boundedness is certified by the weighted
  // profile being non-increasing over the outer quartile. The largest certified eps is kept.
  if (vmin >= 0.0) {
    for (double eps : sr0_exponents()) {
      std::vector<double> g(m);
      for (std::size_t i = 0; i < m; ++i) g[i] = p.v[i] * std::pow(1.0 + p.r[i], 1.0 + eps);
      if (!non_increasing(g, outer)) continue;
      double c = 0.0;
      for (Eigen::Index i = 0; i < potential.values().size(); ++i)
        c = std::max(c, potential.values()[i] * std::pow(1.0 + potential.grid()->radius()[i], 1.0 + eps));
      h.sr0 = true;
      h.sr0_eps = eps;
      h.sr0_C = c;
    }
  }

  h.decay = potential.radial_derivative().maxCoeff() <= 0.0;

  std::vector<double> moment(m);
  std::vector<double> magnitude(m);
  for (std::size_t i = 0; i < m; ++i) {
    moment[i] = p.r[i] * std::abs(p.dv[i]);
    magnitude[i] = std::abs(p.v[i]);
  }
  const OuterTrend mt = outer_trend(moment, outer);
  h.new_outer_max = mt.max;
  h.new_limit = mt.max <= tolerance && mt.second <= mt.first;

  const OuterTrend vt = outer_trend(magnitude, outer);
  const bool vanishes = vmax == 0.0 || (vt.max <= tolerance * vmax && vt.second <= vt.first);
  h.rageweak = vanishes && h.new_limit;
  return h;
}

PotentialPtr sample_potential(PotentialFamily family, const PotentialParams& params, const GridPtr& grid,
                              double tolerance) {
  auto pot = std::make_shared<Potential>(grid, family, params);
  pot->set_hypotheses(validate_assumptions(*pot, tolerance));
  return pot;
}

PotentialPtr zero_potential(const GridPtr& grid) {
  return sample_potential(PotentialFamily::zero, PotentialParams{}, grid);
}

}  // namespace dilab
