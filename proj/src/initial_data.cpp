#include "dilab/initial_data.hpp"

#include <cmath>
#include <numbers>

#include "dilab/error.hpp"

namespace dilab {

namespace {

constexpr double pi = std::numbers::pi;

double bump(double r, double radius) {
  const double s = r / radius;
  return s < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - s * s)) : 0.0;
}

}  // namespace

RandomField::RandomField(int dimension, bool radial, const DataParams& params, UniformSource& source)
    : dimension_(dimension), radial_(radial), envelope_(params.envelope), hole_(params.hole) {
  if (params.modes < 1) throw Error(ErrorCode::invalid_argument, "random fields need at least one mode");
  if (!(params.bandlimit > 0.0) || !(params.envelope > 0.0) || !(params.hole > 0.0))
    throw Error(ErrorCode::invalid_argument, "random field scales must be positive");
  for (int m = 0; m < params.modes; ++m) {
    amp_.push_back(2.0 * source.next() - 1.0);
    const double k = params.bandlimit * source.next();
    const double angle = 2.0 * pi * source.next();
    kx_.push_back(radial_ || dimension_ == 1 ? k : k * std::cos(angle));
    ky_.push_back(radial_ || dimension_ == 1 ? 0.0 : k * std::sin(angle));
    phase_.push_back(2.0 * pi * source.next());
  }
}

double RandomField::value(double x, double y) const {
  const double r2 = x * x + y * y;
  double s = 0.0;
  for (std::size_t m = 0; m < amp_.size(); ++m) s += amp_[m] * std::cos(2.0 * pi * (kx_[m] * x + ky_[m] * y) + phase_[m]);
  const double q = r2 / (hole_ * hole_ + r2);
  return s * std::exp(-r2 / (2.0 * envelope_ * envelope_)) * q * q;
}

ComplexField RandomField::sample(const GridPtr& grid) const {
  ComplexVector v(grid->size());
  if (grid->radial()) {
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = value(grid->radius()[i], 0.0);
  } else if (grid->dimension() == 1) {
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = value(grid->axis()[i], 0.0);
  } else {
    const int n = grid->points();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) v[static_cast<Eigen::Index>(i) * n + j] = value(grid->axis()[i], grid->axis()[j]);
  }
  ComplexField f(grid, std::move(v), "random");
  const double norm = f.norm();
  if (norm > 0.0) f.values /= norm;
  return f;
}

ComplexField make_initial_data(const GridPtr& grid, const DataParams& p) {
  const RealVector& r = grid->radius();
  ComplexVector v(grid->size());
  if (p.family == "gaussian") {
    if (!(p.width > 0.0)) throw Error(ErrorCode::invalid_argument, "gaussian width must be positive");
    if (p.xi0 != 0.0 && !grid->cartesian()) throw Error(ErrorCode::unsupported, "modulated data needs a cartesian grid");
    const RealVector x1 = grid->cartesian() ? grid->coordinate(0) : r;
    for (Eigen::Index i = 0; i < v.size(); ++i)
      v[i] = std::polar(p.amplitude * std::exp(-r[i] * r[i] / (2.0 * p.width * p.width)), 2.0 * pi * p.xi0 * x1[i]);
  } else if (p.family == "compact_bump") {
    if (!(p.radius > 0.0)) throw Error(ErrorCode::invalid_argument, "bump radius must be positive");
    if (p.radius > grid->extent()) throw Error(ErrorCode::region_exceeds_extent, "bump radius exceeds the grid");
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = p.amplitude * bump(r[i], p.radius);
  } else if (p.family == "single_mode") {
    if (!grid->cartesian()) throw Error(ErrorCode::unsupported, "single modes need a cartesian grid");
    const RealVector x1 = grid->coordinate(0);
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = std::polar(p.amplitude, 2.0 * pi * p.xi0 * x1[i]);
  } else if (p.family == "random") {
    UniformSource source(p.seed);
    RandomField field(grid->dimension(), grid->radial(), p, source);
    ComplexField f = field.sample(grid);
    f.values *= p.amplitude;
    return f;
  } else {
    throw Error(ErrorCode::unknown_family, "unknown data family '" + p.family + "'");
  }
  ComplexField f(grid, std::move(v), p.family);
  if (p.normalize) {
    const double norm = f.norm();
    if (norm > 0.0) f.values /= norm;
  }
  return f;
}

}  // namespace dilab
