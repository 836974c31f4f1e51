#include "dilab/multiplier.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "dilab/error.hpp"

namespace dilab {

MultiplierFamily parse_multiplier_family(const std::string& name) {
  if (name == "constant") return MultiplierFamily::constant;
  if (name == "abs") return MultiplierFamily::abs;
  if (name == "smoothed_abs") return MultiplierFamily::smoothed_abs;
  if (name == "japanese_bracket") return MultiplierFamily::japanese_bracket;
  if (name == "bump_integrated") return MultiplierFamily::bump_integrated;
  throw Error(ErrorCode::unknown_family, "unknown multiplier family '" + name + "'");
}

std::string to_string(MultiplierFamily family) {
  switch (family) {
    case MultiplierFamily::constant: return "constant";
    case MultiplierFamily::abs: return "abs";
    case MultiplierFamily::smoothed_abs: return "smoothed_abs";
    case MultiplierFamily::japanese_bracket: return "japanese_bracket";
    case MultiplierFamily::bump_integrated: return "bump_integrated";
  }
  return "unknown";
}

namespace {

// Quintic smoothstep S(s) = 6s^5 - 15s^4 + 10s^3 and its derivatives.
double smoothstep(double s) { return s * s * s * (10.0 + s * (-15.0 + 6.0 * s)); }
double smoothstep_d1(double s) { return 30.0 * s * s * (1.0 - s) * (1.0 - s); }
double smoothstep_d2(double s) { return 60.0 * s * (1.0 - s) * (1.0 - 2.0 * s); }

// psi_k, H_k, h_k, h_k', h_k'' for the unit-plateau bump.
std::array<double, 5> bump_base(int k, double r) {
  const double delta = 1.0 / k;
  if (r <= 1.0) return {0.5 * r * r, r, 1.0, 0.0, 0.0};
  const double end = 1.0 + delta;
  if (r >= end) {
    const double psi_end = 0.5 + delta + (5.0 / 14.0) * delta * delta;
    const double slope = 1.0 + 0.5 * delta;
    return {psi_end + slope * (r - end), slope, 0.0, 0.0, 0.0};
  }
  const double s = (r - 1.0) / delta;
  const double s2 = s * s;
  const double s4 = s2 * s2;
  const double big_h = 1.0 + delta * (s - (s4 * s2 - 3.0 * s4 * s + 2.5 * s4));
  const double psi =
      0.5 + delta * s + delta * delta * (0.5 * s2 - (s4 * s2 * s / 7.0 - 0.5 * s4 * s2 + 0.5 * s4 * s));
  return {psi, big_h, 1.0 - smoothstep(s), -smoothstep_d1(s) / delta, -smoothstep_d2(s) / (delta * delta)};
}

}  // namespace

double bump_profile(int k, double r) {
  if (k < 1) throw Error(ErrorCode::invalid_argument, "bump index k must be >= 1");
  return bump_base(k, std::abs(r))[2];
}

double bump_integral(int k, double r) {
  if (k < 1) throw Error(ErrorCode::invalid_argument, "bump index k must be >= 1");
  return bump_base(k, r)[1];
}

double bump_mass(int k) {
  if (k < 1) throw Error(ErrorCode::invalid_argument, "bump index k must be >= 1");
  return 1.0 + 0.5 / k;
}

MultiplierProfile::MultiplierProfile(MultiplierFamily family, MultiplierParams params)
    : family_(family), params_(params) {
  if (!(params_.R > 0.0)) throw Error(ErrorCode::invalid_argument, "rescaling radius R must be positive");
  if (!std::isfinite(params_.scale) || !std::isfinite(params_.offset))
    throw Error(ErrorCode::invalid_argument, "scale and offset must be finite");
  if (family_ == MultiplierFamily::smoothed_abs && !(params_.eps > 0.0))
    throw Error(ErrorCode::invalid_argument, "smoothed_abs needs eps > 0");
  if (family_ == MultiplierFamily::bump_integrated) {
    if (params_.k < 1) throw Error(ErrorCode::invalid_argument, "bump_integrated needs k >= 1");
    if (!(params_.inner > 0.0)) throw Error(ErrorCode::invalid_argument, "bump_integrated needs inner > 0");
  }
}

std::array<double, 5> MultiplierProfile::base(double r) const {
  switch (family_) {
    case MultiplierFamily::constant: return {0.0, 0.0, 0.0, 0.0, 0.0};
    case MultiplierFamily::abs: return {r, 1.0, 0.0, 0.0, 0.0};
    case MultiplierFamily::smoothed_abs:
    case MultiplierFamily::japanese_bracket: {
      const double e = family_ == MultiplierFamily::japanese_bracket ? 1.0 : params_.eps;
      const double e2 = e * e;
      const double q = e2 + r * r;
      const double sq = std::sqrt(q);
      return {sq, r / sq, e2 / (q * sq), -3.0 * e2 * r / (q * q * sq), 3.0 * e2 * (4.0 * r * r - e2) / (q * q * q * sq)};
    }
    case MultiplierFamily::bump_integrated: {
      const double a = params_.inner;
      auto b = bump_base(params_.k, r / a);
      return {a * a * b[0], a * b[1], b[2], b[3] / a, b[4] / (a * a)};
    }
  }
  return {0.0, 0.0, 0.0, 0.0, 0.0};
}

std::array<double, 5> MultiplierProfile::derivatives(double r) const {
  const double R = params_.R;
  auto b = base(r / R);
  std::array<double, 5> out{};
  double f = R;
  for (int m = 0; m < 5; ++m) {
    out[m] = params_.scale * f * b[m];
    f /= R;
  }
  out[0] += params_.offset;
  return out;
}

double MultiplierProfile::bilaplacian(double r, int n) const {
  const auto d = derivatives(r);
  const double a = n - 1.0;
  const double b = (n - 1.0) * (n - 3.0);
  return d[4] + 2.0 * a * d[3] / r + b * d[2] / (r * r) - b * d[1] / (r * r * r);
}

double MultiplierProfile::slope_at_infinity() const {
  switch (family_) {
    case MultiplierFamily::constant: return 0.0;
    case MultiplierFamily::abs:
    case MultiplierFamily::smoothed_abs:
    case MultiplierFamily::japanese_bracket: return params_.scale;
    case MultiplierFamily::bump_integrated: return params_.scale * params_.inner * bump_mass(params_.k);
  }
  return 0.0;
}

double MultiplierProfile::affine_beyond() const {
  if (family_ == MultiplierFamily::bump_integrated)
    return params_.R * params_.inner * (1.0 + 1.0 / params_.k);
  if (family_ == MultiplierFamily::constant || family_ == MultiplierFamily::abs) return 0.0;
  return std::numeric_limits<double>::infinity();
}

std::string MultiplierProfile::describe() const {
  std::ostringstream os;
  os << to_string(family_);
  if (family_ == MultiplierFamily::smoothed_abs) os << "(eps=" << params_.eps << ")";
  if (family_ == MultiplierFamily::bump_integrated) os << "(k=" << params_.k << ", inner=" << params_.inner << ")";
  if (params_.R != 1.0) os << " rescaled R=" << params_.R;
  return os.str();
}

Multiplier build_multiplier(MultiplierFamily family, const MultiplierParams& params, const GridPtr& grid) {
  if (!grid) throw Error(ErrorCode::invalid_argument, "multiplier without grid");
  Multiplier m{grid, MultiplierProfile(family, params), {}, {}, {}, {}, 0.0, false};
  const RealVector& r = grid->radius();
  const Eigen::Index size = r.size();
  m.psi.resize(size);
  m.d1.resize(size);
  m.d2.resize(size);
  m.bilap.resize(size);
  const int n = grid->dimension();
  for (Eigen::Index i = 0; i < size; ++i) {
    const auto d = m.profile.derivatives(r[i]);
    m.psi[i] = d[0];
    m.d1[i] = d[1];
    m.d2[i] = d[2];
    m.bilap[i] = m.profile.bilaplacian(r[i], n);
  }
  m.slope_inf = m.profile.slope_at_infinity();
  m.distributional_at_origin = family == MultiplierFamily::abs && n <= 3 && params.scale != 0.0;
  return m;
}

RealField hessian_form(const Multiplier& m, const ComplexField& u) {
  require_same_grid(*m.grid, *u.grid, "hessian_form");
  const RealVector radial = radial_derivative(u).values.cwiseAbs2();
  RealVector form = m.d2.cwiseProduct(radial);
  const AngularGradient ang = angular_gradient_sq(u);
  if (!ang.radial_grid) form += m.d1.cwiseQuotient(u.grid->radius()).cwiseProduct(ang.values.values);
  return RealField(u.grid, std::move(form));
}

RealField hessian_form_direct(const Multiplier& m, const ComplexField& u) {
  require_same_grid(*m.grid, *u.grid, "hessian_form_direct");
  const Grid& g = *u.grid;
  if (!g.cartesian()) throw Error(ErrorCode::unsupported, "direct Hessian contraction requires a cartesian grid");
  const auto grad = gradient(u);
  const int d = g.dimension();
  std::vector<RealVector> xhat;
  for (int a = 0; a < d; ++a) xhat.push_back(g.coordinate(a).cwiseQuotient(g.radius()));
  RealVector form = RealVector::Zero(g.size());
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    const double tangential = m.d1[i] / g.radius()[i];
    double acc = 0.0;
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) {
        const double hab = (m.d2[i] - tangential) * xhat[a][i] * xhat[b][i] + (a == b ? tangential : 0.0);
        acc += hab * std::real(std::conj(grad[a].values[i]) * grad[b].values[i]);
      }
    form[i] = acc;
  }
  return RealField(u.grid, std::move(form));
}

BilaplacianReport bilaplacian(const Multiplier& m) {
  BilaplacianReport rep;
  rep.values = RealField(m.grid, m.bilap);
  rep.distributional_at_origin = m.distributional_at_origin;
  const int n = m.grid->dimension();
  const RealVector& r = m.grid->radius();
  if (m.profile.family() == MultiplierFamily::bump_integrated) {
    const double edge = m.profile.affine_beyond();
    if (n >= 4) {
      const double from = 2.0 * m.profile.params().R * m.profile.params().inner;
      double sxy = 0.0, sxx = 0.0;
      double lx = 0.0, ly = 0.0, lxx = 0.0, lxy = 0.0;
      int count = 0;
      for (Eigen::Index i = 0; i < r.size(); ++i) {
        if (r[i] < from) continue;
        const double x = 1.0 / (r[i] * r[i] * r[i]);
        sxy += x * m.bilap[i];
        sxx += x * x;
        if (m.bilap[i] != 0.0) {
          const double a = std::log(r[i]);
          const double b = std::log(std::abs(m.bilap[i]));
          lx += a;
          ly += b;
          lxx += a * a;
          lxy += a * b;
          ++count;
        }
      }
      if (sxx > 0.0) rep.fitted_C = sxy / sxx;
      if (count >= 2) {
        const double denom = count * lxx - lx * lx;
        if (denom > 0.0) rep.fitted_exponent = (count * lxy - lx * ly) / denom;
      }
    } else if (n == 3) {
      double worst = 0.0;
      for (Eigen::Index i = 0; i < r.size(); ++i)
        if (r[i] >= edge) worst = std::max(worst, std::abs(m.bilap[i]));
      rep.far_field_max = worst;
    }
  }
  return rep;
}

double bilaplacian_finite_difference(const MultiplierProfile& profile, double r, int n, double step) {
  auto psi = [&](double x) { return profile.derivatives(std::abs(x))[0]; };
  auto lap = [&](double x) {
    const double fp = psi(x + step);
    const double f0 = psi(x);
    const double fm = psi(x - step);
    return (fp - 2.0 * f0 + fm) / (step * step) + (n - 1.0) * (fp - fm) / (2.0 * step * x);
  };
  const double gp = lap(r + step);
  const double g0 = lap(r);
  const double gm = lap(r - step);
  return (gp - 2.0 * g0 + gm) / (step * step) + (n - 1.0) * (gp - gm) / (2.0 * step * r);
}

}  // namespace dilab
