#include "dilab/grid.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "dilab/error.hpp"
#include "dilab/fft.hpp"

namespace dilab {

GridMode parse_grid_mode(const std::string& name) {
  if (name == "cartesian") return GridMode::cartesian;
  if (name == "radial") return GridMode::radial;
  throw Error(ErrorCode::invalid_argument, "unknown grid mode '" + name + "'");
}

std::string to_string(GridMode mode) { return mode == GridMode::cartesian ? "cartesian" : "radial"; }

double unit_sphere_measure(int dimension) {
  if (dimension < 1) throw Error(ErrorCode::invalid_dimension, "dimension must be >= 1");
  const double half = 0.5 * dimension;
  return 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
}

Grid::Grid(GridMode mode, int dimension, double extent, int points)
    : mode_(mode), dimension_(dimension), extent_(extent), points_(points) {
  if (dimension < 1) throw Error(ErrorCode::invalid_dimension, "dimension must be >= 1");
  if (mode == GridMode::radial && dimension < 2)
    throw Error(ErrorCode::invalid_dimension, "radial grids require n >= 2");
  if (mode == GridMode::cartesian && dimension > 2)
    throw Error(ErrorCode::invalid_dimension, "cartesian grids support n = 1 or 2");
  if (!(extent > 0.0) || !std::isfinite(extent)) throw Error(ErrorCode::nonpositive_extent, "extent must be positive");
  if (points < 16) throw Error(ErrorCode::invalid_argument, "at least 16 points per axis are required");

  sphere_ = unit_sphere_measure(dimension);
  if (cartesian()) {
    spacing_ = 2.0 * extent / points;
    axis_.resize(points);
    for (int j = 0; j < points; ++j) axis_[j] = -extent + (j + 0.5) * spacing_;
    if (dimension == 1) {
      radius_ = axis_.cwiseAbs();
    } else {
      radius_.resize(static_cast<Eigen::Index>(points) * points);
      for (int i = 0; i < points; ++i)
        for (int j = 0; j < points; ++j) radius_[static_cast<Eigen::Index>(i) * points + j] = std::hypot(axis_[i], axis_[j]);
    }
    weights_ = RealVector::Constant(radius_.size(), std::pow(spacing_, dimension));
  } else {
    spacing_ = extent / points;
    axis_.resize(points);
    for (int i = 0; i < points; ++i) axis_[i] = (i + 0.5) * spacing_;
    radius_ = axis_;
    weights_ = (sphere_ * spacing_) * axis_.array().pow(dimension - 1).matrix();
  }
}

RealVector Grid::coordinate(int a) const {
  if (!cartesian()) throw Error(ErrorCode::unsupported, "coordinate components require a cartesian grid");
  if (a < 0 || a >= dimension_) throw Error(ErrorCode::invalid_argument, "axis out of range");
  if (dimension_ == 1) return axis_;
  RealVector out(size());
  for (int i = 0; i < points_; ++i)
    for (int j = 0; j < points_; ++j) out[static_cast<Eigen::Index>(i) * points_ + j] = a == 0 ? axis_[i] : axis_[j];
  return out;
}

bool Grid::same_as(const Grid& other) const {
  return this == &other || (mode_ == other.mode_ && dimension_ == other.dimension_ && extent_ == other.extent_ &&
                            points_ == other.points_);
}

std::string Grid::describe() const {
  std::ostringstream os;
  os << to_string(mode_) << "(n=" << dimension_ << ", L=" << extent_ << ", N=" << points_ << ")";
  return os.str();
}

GridPtr build_grid(GridMode mode, int dimension, double extent, int points) {
  return std::make_shared<const Grid>(mode, dimension, extent, points);
}

void require_same_grid(const Grid& a, const Grid& b, const char* where) {
  if (!a.same_as(b)) throw Error(ErrorCode::incompatible_grid, std::string(where) + ": fields live on different grids");
}

ComplexField::ComplexField(GridPtr g, ComplexVector v, std::string l)
    : grid(std::move(g)), values(std::move(v)), label(std::move(l)) {
  if (!grid) throw Error(ErrorCode::invalid_argument, "field without grid");
  if (values.size() != grid->size()) throw Error(ErrorCode::incompatible_grid, "field size does not match grid");
}

double ComplexField::mass() const { return grid->weights().dot(values.cwiseAbs2()); }

double ComplexField::norm() const { return std::sqrt(mass()); }

double ComplexField::tail_mass(double fraction) const {
  const auto mask = outer_mask(*grid, fraction);
  const RealVector a = values.cwiseAbs2();
  double s = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i)
    if (mask[i]) s += grid->weights()[i] * a[i];
  return s;
}

double ComplexField::tail_fraction(double fraction) const {
  const double m = mass();
  return m > 0.0 ? tail_mass(fraction) / m : 0.0;
}

bool ComplexField::finite() const { return values.allFinite(); }

RealField::RealField(GridPtr g, RealVector v, std::string l)
    : grid(std::move(g)), values(std::move(v)), label(std::move(l)) {
  if (!grid) throw Error(ErrorCode::invalid_argument, "field without grid");
  if (values.size() != grid->size()) throw Error(ErrorCode::incompatible_grid, "field size does not match grid");
}

ComplexField zero_field(const GridPtr& grid) { return ComplexField(grid, ComplexVector::Zero(grid->size())); }

ComplexField sample(const GridPtr& grid, const std::vector<cplx>& values) {
  return ComplexField(grid, Eigen::Map<const ComplexVector>(values.data(), static_cast<Eigen::Index>(values.size())));
}

bool Region::contains(double r) const {
  switch (kind) {
    case Kind::all: return true;
    case Kind::ball: return r < radius;
    case Kind::annulus: return r >= radius;
  }
  return false;
}

RealVector region_weights(const Grid& grid, const Region& region) {
  if (region.kind == Region::Kind::all) return grid.weights();
  if (!(region.radius >= 0.0)) throw Error(ErrorCode::invalid_argument, "region radius must be nonnegative");
  if (region.radius > grid.extent() * (1.0 + 1e-12))
    throw Error(ErrorCode::region_exceeds_extent, "region radius exceeds grid extent");
  RealVector w = grid.weights();
  const RealVector& r = grid.radius();
  for (Eigen::Index i = 0; i < w.size(); ++i)
    if (!region.contains(r[i])) w[i] = 0.0;
  return w;
}

Eigen::Array<bool, Eigen::Dynamic, 1> outer_mask(const Grid& grid, double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0)) throw Error(ErrorCode::invalid_argument, "tail fraction must lie in (0, 1]");
  const double edge = (1.0 - fraction) * grid.extent();
  Eigen::Array<bool, Eigen::Dynamic, 1> mask(grid.size());
  if (grid.radial() || grid.dimension() == 1) {
    const RealVector& r = grid.radius();
    for (Eigen::Index i = 0; i < r.size(); ++i) mask[i] = r[i] > edge;
  } else {
    const int n = grid.points();
    const RealVector& x = grid.axis();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        mask[static_cast<Eigen::Index>(i) * n + j] = std::max(std::abs(x[i]), std::abs(x[j])) > edge;
  }
  return mask;
}

double integrate(const Grid& grid, const RealVector& values, const Region& region) {
  if (values.size() != grid.size()) throw Error(ErrorCode::incompatible_grid, "integrand size mismatch");
  return region_weights(grid, region).dot(values);
}

cplx integrate(const Grid& grid, const ComplexVector& values, const Region& region) {
  if (values.size() != grid.size()) throw Error(ErrorCode::incompatible_grid, "integrand size mismatch");
  const RealVector w = region_weights(grid, region);
  return cplx(w.dot(values.real()), w.dot(values.imag()));
}

double integrate(const RealField& f, const Region& region) { return integrate(*f.grid, f.values, region); }

cplx integrate(const ComplexField& f, const Region& region) { return integrate(*f.grid, f.values, region); }

cplx inner(const ComplexField& f, const ComplexField& g) {
  require_same_grid(*f.grid, *g.grid, "inner");
  const ComplexVector prod = f.values.conjugate().cwiseProduct(g.values);
  return integrate(*f.grid, prod);
}

std::vector<ComplexField> gradient(const ComplexField& u) {
  const Grid& grid = *u.grid;
  if (!grid.cartesian())
    throw Error(ErrorCode::unsupported, "gradient requires a cartesian grid; use radial_derivative on radial grids");
  std::vector<ComplexField> out;
  out.reserve(grid.dimension());
  for (int a = 0; a < grid.dimension(); ++a) out.push_back(apply_symbol(u, derivative_symbol(grid, a)));
  return out;
}

namespace {

// Fourth-order centred differences with even reflection at r = 0 and odd reflection at r = L.
ComplexVector radial_difference(const ComplexVector& u, double h) {
  const Eigen::Index n = u.size();
  auto at = [&](Eigen::Index i) -> cplx {
    if (i < 0) return u[-i - 1];
    if (i >= n) return -u[2 * n - 1 - i];
    return u[i];
  };
  ComplexVector d(n);
  const double c = 1.0 / (12.0 * h);
  for (Eigen::Index i = 0; i < n; ++i) d[i] = c * (at(i - 2) - 8.0 * at(i - 1) + 8.0 * at(i + 1) - at(i + 2));
  return d;
}

}  // namespace

ComplexField radial_derivative(const ComplexField& u) {
  const Grid& grid = *u.grid;
  if (grid.radial()) return ComplexField(u.grid, radial_difference(u.values, grid.spacing()), u.label);
  const auto g = gradient(u);
  ComplexVector d = ComplexVector::Zero(grid.size());
  const RealVector& r = grid.radius();
  for (int a = 0; a < grid.dimension(); ++a) {
    const RealVector x = grid.coordinate(a);
    for (Eigen::Index i = 0; i < d.size(); ++i)
      if (r[i] > 0.0) d[i] += (x[i] / r[i]) * g[a].values[i];
  }
  return ComplexField(u.grid, std::move(d), u.label);
}

RealField gradient_sq(const ComplexField& u) {
  if (u.grid->radial()) return RealField(u.grid, radial_derivative(u).values.cwiseAbs2());
  RealVector s = RealVector::Zero(u.grid->size());
  for (const auto& g : gradient(u)) s += g.values.cwiseAbs2();
  return RealField(u.grid, std::move(s));
}

AngularGradient angular_gradient_sq(const ComplexField& u) {
  AngularGradient out;
  if (u.grid->radial()) {
    out.values = RealField(u.grid, RealVector::Zero(u.grid->size()));
    out.radial_grid = true;
    return out;
  }
  const RealVector full = gradient_sq(u).values;
  const RealVector rad = radial_derivative(u).values.cwiseAbs2();
  out.values = RealField(u.grid, (full - rad).cwiseMax(0.0));
  return out;
}

}  // namespace dilab
