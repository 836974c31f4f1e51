#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "dilab/grid.hpp"
#include "dilab/potential.hpp"

namespace dilab {

/// H = -Delta + V discretized symmetrically, with its full eigendecomposition.
///
/// Internally the operator acts on v = sqrt(w) u, where w are the quadrature weights, so the
/// matrix is symmetric in the Euclidean inner product and the eigenvectors are orthonormal.
/// Cartesian grids use the Fourier-collocation Laplacian (symbol 4 pi^2 |xi|^2, including the
/// Nyquist mode). Radial grids use the conservative three-point form of
/// r^{1-n} d/dr (r^{n-1} d/dr), symmetrized by r^{(n-1)/2}; in the interior it equals
/// -v'' + (n-1)(n-3)/(4r^2) v + O(h^2). The outer boundary r = L is Dirichlet.
class SpectralOperator {
 public:
  static constexpr Eigen::Index kEigenBudget = 4096;

  SpectralOperator(PotentialPtr potential, Eigen::Index budget = kEigenBudget);

  const GridPtr& grid() const { return grid_; }
  const PotentialPtr& potential() const { return potential_; }
  Eigen::Index size() const { return eigenvalues_.size(); }

  /// Ascending eigenvalues.
  const RealVector& eigenvalues() const { return eigenvalues_; }
  /// Orthonormal eigenvectors (columns) in the symmetrized coordinates.
  const Eigen::MatrixXd& eigenvectors() const { return eigenvectors_; }
  const RealVector& sqrt_weights() const { return sqrt_weights_; }
  /// Symmetric matrix of H in the symmetrized coordinates.
  const Eigen::MatrixXd& matrix() const { return matrix_; }
  /// 1e-10 max |lambda|: eigenvalues above -tolerance count as nonnegative.
  double eigenvalue_tolerance() const;

  /// c_k = <v_k, f> in the quadrature inner product.
  ComplexVector coefficients(const ComplexField& f) const;
  ComplexField synthesize(const ComplexVector& c) const;

  /// H f by matrix-vector product.
  ComplexField apply(const ComplexField& f) const;
  /// sum_k phi(lambda_k) <v_k, f> v_k. Throws a domain error where phi is not finite.
  ComplexField functional_calculus(const std::function<cplx(double)>& phi, const ComplexField& f) const;
  ComplexField functional_calculus(const std::function<double(double)>& phi, const ComplexField& f) const;
  /// ||H^{s/2} f||, negative roundoff eigenvalues clamped to zero.
  double sobolev_norm(const ComplexField& f, double s) const;
  /// sum_k lambda_k^s |c_k|^2 for coefficients computed once.
  double sobolev_norm_sq(const ComplexVector& c, double s) const;

  /// e^{itH} f.
  ComplexField propagate(const ComplexField& f, double t) const;
  /// Columns are e^{i t_j H} f for every requested time.
  Eigen::MatrixXcd propagate_many(const ComplexField& f, const std::vector<double>& times) const;

 private:
  void check(const ComplexField& f) const;

  GridPtr grid_;
  PotentialPtr potential_;
  RealVector sqrt_weights_;
  Eigen::MatrixXd matrix_;
  RealVector eigenvalues_;
  Eigen::MatrixXd eigenvectors_;
};

using SpectralOperatorPtr = std::shared_ptr<const SpectralOperator>;

SpectralOperatorPtr assemble_hamiltonian(const PotentialPtr& potential,
                                         Eigen::Index budget = SpectralOperator::kEigenBudget);

/// Exact evolution carried in the eigenbasis: each step multiplies coefficients by e^{i lambda dt}.
class ExactEvolution {
 public:
  ExactEvolution(SpectralOperatorPtr op, const ComplexField& f, double dt);
  void step();
  double time() const { return time_; }
  ComplexField state() const;

 private:
  SpectralOperatorPtr op_;
  ComplexVector coefficients_;
  ComplexVector phase_;
  double dt_;
  double time_ = 0.0;
  long steps_ = 0;
};

/// Strang splitting e^{iV dt/2} e^{-i Delta dt} e^{iV dt/2} on periodic cartesian grids.
class SplitStep {
 public:
  SplitStep(const PotentialPtr& potential, double dt);
  void step(ComplexVector& u) const;
  double dt() const { return dt_; }

 private:
  GridPtr grid_;
  double dt_;
  ComplexVector half_potential_;
  ComplexVector kinetic_;
};

ComplexField propagate_perturbed(const SpectralOperator& op, const ComplexField& f, double t);
ComplexField propagate_splitstep(const PotentialPtr& potential, const ComplexField& f, double t, double dt);
/// Multiplication by e^{4 pi^2 i |xi|^2 t} on the Fourier side.
ComplexField propagate_free(const ComplexField& f, double t);

/// Number of steps of size dt that make up t; throws unless dt divides t.
long step_count(double t, double dt);

}  // namespace dilab
