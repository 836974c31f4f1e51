#pragma once

#include <Eigen/Dense>
#include <complex>
#include <memory>
#include <string>
#include <vector>

namespace dilab {

using cplx = std::complex<double>;
using RealVector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;

enum class GridMode { cartesian, radial };

GridMode parse_grid_mode(const std::string& name);
std::string to_string(GridMode mode);

/// Uniform discretization of R^n.
///
/// Cartesian grids are periodic boxes [-L, L)^d (d = n = 1 or 2) with cell-centred
/// nodes x_j = -L + (j + 1/2) h, so the origin is never a node. Radial grids sample
/// the half-line at r_i = (i + 1/2) h, h = L / N, with weight w_i = |S^{n-1}| r_i^{n-1} h.
/// Cartesian nodes are flattened row-major: node = i * N + j holds (x_i, y_j).
class Grid {
 public:
  Grid(GridMode mode, int dimension, double extent, int points);

  GridMode mode() const { return mode_; }
  bool cartesian() const { return mode_ == GridMode::cartesian; }
  bool radial() const { return mode_ == GridMode::radial; }
  int dimension() const { return dimension_; }
  double extent() const { return extent_; }
  int points() const { return points_; }
  double spacing() const { return spacing_; }
  Eigen::Index size() const { return radius_.size(); }
  int axes() const { return cartesian() ? dimension_ : 1; }

  /// Coordinates along one axis (cartesian) or the radii (radial).
  const RealVector& axis() const { return axis_; }
  /// |x| at every node.
  const RealVector& radius() const { return radius_; }
  const RealVector& weights() const { return weights_; }
  /// Component x_a at every node (cartesian only).
  RealVector coordinate(int a) const;
  /// |S^{n-1}|, with the convention |S^0| = 2.
  double sphere_measure() const { return sphere_; }

  bool same_as(const Grid& other) const;
  std::string describe() const;

 private:
  GridMode mode_;
  int dimension_;
  double extent_;
  int points_;
  double spacing_;
  double sphere_;
  RealVector axis_;
  RealVector radius_;
  RealVector weights_;
};

using GridPtr = std::shared_ptr<const Grid>;

GridPtr build_grid(GridMode mode, int dimension, double extent, int points);

double unit_sphere_measure(int dimension);

struct ComplexField {
  GridPtr grid;
  ComplexVector values;
  std::string label;

  ComplexField() = default;
  ComplexField(GridPtr g, ComplexVector v, std::string l = {});

  double mass() const;
  double norm() const;
  /// Mass carried by the outermost `fraction` of the domain.
  double tail_mass(double fraction = 0.1) const;
  /// tail_mass relative to the total mass (0 for the zero field).
  double tail_fraction(double fraction = 0.1) const;
  bool finite() const;
};

struct RealField {
  GridPtr grid;
  RealVector values;
  std::string label;

  RealField() = default;
  RealField(GridPtr g, RealVector v, std::string l = {});
};

ComplexField zero_field(const GridPtr& grid);
ComplexField sample(const GridPtr& grid, const std::vector<cplx>& values);

struct Region {
  enum class Kind { all, ball, annulus };
  Kind kind = Kind::all;
  double radius = 0.0;

  static Region all() { return {}; }
  static Region ball(double r) { return {Kind::ball, r}; }
  static Region annulus(double r) { return {Kind::annulus, r}; }
  bool contains(double r) const;
};

/// Quadrature weights restricted to a region (zero outside it).
RealVector region_weights(const Grid& grid, const Region& region);
/// Nodes in the outer `fraction` of the domain: max_a |x_a| or r beyond (1 - fraction) L.
Eigen::Array<bool, Eigen::Dynamic, 1> outer_mask(const Grid& grid, double fraction);

double integrate(const RealField& f, const Region& region = Region::all());
cplx integrate(const ComplexField& f, const Region& region = Region::all());
double integrate(const Grid& grid, const RealVector& values, const Region& region = Region::all());
cplx integrate(const Grid& grid, const ComplexVector& values, const Region& region = Region::all());

/// <f, g> = sum w conj(f) g.
cplx inner(const ComplexField& f, const ComplexField& g);

std::vector<ComplexField> gradient(const ComplexField& u);
ComplexField radial_derivative(const ComplexField& u);
RealField gradient_sq(const ComplexField& u);

struct AngularGradient {
  RealField values;
  bool radial_grid = false;  // set when the grid cannot resolve angles; values are then zero
};
AngularGradient angular_gradient_sq(const ComplexField& u);

void require_same_grid(const Grid& a, const Grid& b, const char* where);

}  // namespace dilab
