#include "dilab/spectral.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dilab/error.hpp"
#include "dilab/fft.hpp"

namespace dilab {

namespace {

// Dense kinetic matrix of the Fourier-collocation Laplacian on a periodic axis:
// T_{jk} = c_{j-k}, c_d = (1/N) sum_m s_m cos(2 pi d m / N).
Eigen::MatrixXd kinetic_axis(const Grid& grid) {
  const int n = grid.points();
  const double h = grid.spacing();
  RealVector s(n);
  for (int m = 0; m < n; ++m) {
    const double xi = (m < (n + 1) / 2 ? m : m - n) / (n * h);
    s[m] = 4.0 * std::numbers::pi * std::numbers::pi * xi * xi;
  }
  RealVector c(n);
  for (int d = 0; d < n; ++d) {
    double acc = 0.0;
    for (int m = 0; m < n; ++m) acc += s[m] * std::cos(2.0 * std::numbers::pi * static_cast<double>((static_cast<long>(d) * m) % n) / n);
    c[d] = acc / n;
  }
  Eigen::MatrixXd t(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) t(j, k) = c[((j - k) % n + n) % n];
  return t;
}

// Residual and orthogonality of a few eigenpairs; catches BLAS kernels that return garbage.
bool plausible(const Eigen::MatrixXd& a, const RealVector& values, const Eigen::MatrixXd& vectors) {
  const Eigen::Index n = a.rows();
  const double scale = std::max(1.0, values.cwiseAbs().maxCoeff());
  const Eigen::Index probes = std::min<Eigen::Index>(n, 8);
  for (Eigen::Index p = 0; p < probes; ++p) {
    const Eigen::Index k = probes == 1 ? 0 : p * (n - 1) / (probes - 1);
    const auto q = vectors.col(k);
    if ((a * q - values[k] * q).norm() > 1e-8 * scale) return false;
    RealVector overlap = vectors.transpose() * q;
    overlap[k] -= 1.0;
    if (overlap.cwiseAbs().maxCoeff() > 1e-8) return false;
  }
  return true;
}

void symmetric_eigen(const Eigen::MatrixXd& a, RealVector& values, Eigen::MatrixXd& vectors) {
  const lapack_int n = static_cast<lapack_int>(a.rows());
  vectors = a;
  values.resize(n);
  const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'U', n, vectors.data(), n, values.data());
  if (info == 0 && plausible(a, values, vectors)) return;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
  if (solver.info() != Eigen::Success) throw Error(ErrorCode::numerical, "symmetric eigensolver did not converge");
  values = solver.eigenvalues();
  vectors = solver.eigenvectors();
}

void tridiagonal_eigen(const RealVector& diag, const RealVector& off, RealVector& values, Eigen::MatrixXd& vectors) {
  const lapack_int n = static_cast<lapack_int>(diag.size());
  RealVector d = diag;
  RealVector e(n);
  e.head(n - 1) = off;
  e[n - 1] = 0.0;
  values.resize(n);
  vectors.resize(n, n);
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(n));
  lapack_int found = 0;
  const lapack_int info = LAPACKE_dstevr(LAPACK_COL_MAJOR, 'V', 'A', n, d.data(), e.data(), 0.0, 0.0, 0, 0, 0.0,
                                         &found, values.data(), vectors.data(), n, support.data());
  if (info != 0 || found != n) throw Error(ErrorCode::numerical, "dstevr failed with info " + std::to_string(info));
}

}  // namespace

SpectralOperator::SpectralOperator(PotentialPtr potential, Eigen::Index budget) : potential_(std::move(potential)) {
  if (!potential_) throw Error(ErrorCode::invalid_argument, "operator without potential");
  grid_ = potential_->grid();
  const Grid& g = *grid_;
  if (g.size() > budget)
    throw Error(ErrorCode::too_large, std::to_string(g.size()) + " nodes exceed the eigensolver budget of " +
                                          std::to_string(budget));
  sqrt_weights_ = g.weights().cwiseSqrt();
  const RealVector& v = potential_->values();
  const Eigen::Index size = g.size();

  if (g.cartesian()) {
    const Eigen::MatrixXd t = kinetic_axis(g);
    if (g.dimension() == 1) {
      matrix_ = t;
    } else {
      const int n = g.points();
      matrix_ = Eigen::MatrixXd::Zero(size, size);
      // Kronecker sum T (x) I + I (x) T in row-major node order.
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k) {
            matrix_(static_cast<Eigen::Index>(i) * n + j, static_cast<Eigen::Index>(k) * n + j) += t(i, k);
            matrix_(static_cast<Eigen::Index>(i) * n + j, static_cast<Eigen::Index>(i) * n + k) += t(j, k);
          }
    }
    matrix_.diagonal() += v;
    // Exact symmetry, independent of roundoff in the circulant sums.
    matrix_ = (0.5 * (matrix_ + matrix_.transpose())).eval();
    symmetric_eigen(matrix_, eigenvalues_, eigenvectors_);
  } else {
    const int n = g.dimension();
    const double h = g.spacing();
    const RealVector& r = g.axis();
    RealVector diag(size);
    RealVector off(size - 1);
    for (Eigen::Index i = 0; i < size; ++i) {
      const double rp = r[i] + 0.5 * h;
      const double rm = r[i] - 0.5 * h;
      double fp = std::pow(rp, n - 1);
      const double fm = i == 0 ? 0.0 : std::pow(rm, n - 1);
      if (i == size - 1) fp *= 2.0;  // odd reflection: u vanishes at r = L
      diag[i] = (fp + fm) / (h * h * std::pow(r[i], n - 1)) + v[i];
      if (i + 1 < size) off[i] = -fp / (h * h * std::pow(r[i] * r[i + 1], 0.5 * (n - 1)));
    }
    matrix_ = Eigen::MatrixXd::Zero(size, size);
    matrix_.diagonal() = diag;
    for (Eigen::Index i = 0; i + 1 < size; ++i) matrix_(i, i + 1) = matrix_(i + 1, i) = off[i];
    tridiagonal_eigen(diag, off, eigenvalues_, eigenvectors_);
  }
}

double SpectralOperator::eigenvalue_tolerance() const { return 1e-10 * eigenvalues_.cwiseAbs().maxCoeff(); }

void SpectralOperator::check(const ComplexField& f) const { require_same_grid(*f.grid, *grid_, "spectral operator"); }

ComplexVector SpectralOperator::coefficients(const ComplexField& f) const {
  check(f);
  const ComplexVector v = sqrt_weights_.cast<cplx>().cwiseProduct(f.values);
  ComplexVector c(size());
  c.real() = eigenvectors_.transpose() * v.real();
  c.imag() = eigenvectors_.transpose() * v.imag();
  return c;
}

ComplexField SpectralOperator::synthesize(const ComplexVector& c) const {
  ComplexVector u(size());
  u.real() = eigenvectors_ * c.real();
  u.imag() = eigenvectors_ * c.imag();
  u.array() /= sqrt_weights_.array().cast<cplx>();
  return ComplexField(grid_, std::move(u));
}

ComplexField SpectralOperator::apply(const ComplexField& f) const {
  check(f);
  const ComplexVector v = sqrt_weights_.cast<cplx>().cwiseProduct(f.values);
  ComplexVector hv(size());
  hv.real() = matrix_ * v.real();
  hv.imag() = matrix_ * v.imag();
  hv.array() /= sqrt_weights_.array().cast<cplx>();
  return ComplexField(grid_, std::move(hv), f.label);
}

ComplexField SpectralOperator::functional_calculus(const std::function<cplx(double)>& phi, const ComplexField& f) const {
  ComplexVector c = coefficients(f);
  for (Eigen::Index k = 0; k < c.size(); ++k) {
    const cplx p = phi(eigenvalues_[k]);
    if (!std::isfinite(p.real()) || !std::isfinite(p.imag()))
      throw Error(ErrorCode::domain, "function undefined at eigenvalue " + std::to_string(eigenvalues_[k]));
    c[k] *= p;
  }
  ComplexField out = synthesize(c);
  out.label = f.label;
  return out;
}

ComplexField SpectralOperator::functional_calculus(const std::function<double(double)>& phi, const ComplexField& f) const {
  return functional_calculus([&phi](double l) { return cplx(phi(l), 0.0); }, f);
}

double SpectralOperator::sobolev_norm_sq(const ComplexVector& c, double s) const {
  if (!(s >= 0.0)) throw Error(ErrorCode::invalid_argument, "sobolev order must be nonnegative");
  const double tol = eigenvalue_tolerance();
  double acc = 0.0;
  for (Eigen::Index k = 0; k < c.size(); ++k) {
    double l = eigenvalues_[k];
    if (l < -tol) throw Error(ErrorCode::domain, "negative eigenvalue " + std::to_string(l) + " under a fractional power");
    l = std::max(l, 0.0);
    const double p = s == 0.0 ? 1.0 : std::pow(l, s);
    acc += p * std::norm(c[k]);
  }
  return acc;
}

double SpectralOperator::sobolev_norm(const ComplexField& f, double s) const {
  return std::sqrt(sobolev_norm_sq(coefficients(f), s));
}

ComplexField SpectralOperator::propagate(const ComplexField& f, double t) const {
  ComplexVector c = coefficients(f);
  for (Eigen::Index k = 0; k < c.size(); ++k) c[k] *= std::polar(1.0, eigenvalues_[k] * t);
  ComplexField out = synthesize(c);
  out.label = f.label;
  return out;
}

Eigen::MatrixXcd SpectralOperator::propagate_many(const ComplexField& f, const std::vector<double>& times) const {
  const ComplexVector c = coefficients(f);
  const Eigen::Index m = static_cast<Eigen::Index>(times.size());
  Eigen::MatrixXd re(size(), m);
  Eigen::MatrixXd im(size(), m);
  for (Eigen::Index j = 0; j < m; ++j)
    for (Eigen::Index k = 0; k < size(); ++k) {
      const cplx z = c[k] * std::polar(1.0, eigenvalues_[k] * times[static_cast<std::size_t>(j)]);
      re(k, j) = z.real();
      im(k, j) = z.imag();
    }
  const Eigen::MatrixXd ur = eigenvectors_ * re;
  const Eigen::MatrixXd ui = eigenvectors_ * im;
  Eigen::MatrixXcd u(size(), m);
  u.real() = ur;
  u.imag() = ui;
  u.array().colwise() /= sqrt_weights_.array().cast<cplx>();
  return u;
}

SpectralOperatorPtr assemble_hamiltonian(const PotentialPtr& potential, Eigen::Index budget) {
  return std::make_shared<const SpectralOperator>(potential, budget);
}

ExactEvolution::ExactEvolution(SpectralOperatorPtr op, const ComplexField& f, double dt)
    : op_(std::move(op)), coefficients_(op_->coefficients(f)), dt_(dt) {
  phase_.resize(coefficients_.size());
  for (Eigen::Index k = 0; k < phase_.size(); ++k) phase_[k] = std::polar(1.0, op_->eigenvalues()[k] * dt);
}

void ExactEvolution::step() {
  coefficients_.array() *= phase_.array();
  ++steps_;
  time_ = static_cast<double>(steps_) * dt_;
}

ComplexField ExactEvolution::state() const { return op_->synthesize(coefficients_); }

long step_count(double t, double dt) {
  if (!(dt > 0.0)) throw Error(ErrorCode::invalid_argument, "time step must be positive");
  const double q = std::abs(t) / dt;
  const long steps = std::lround(q);
  if (std::abs(q - static_cast<double>(steps)) > 1e-9 * std::max(1.0, q))
    throw Error(ErrorCode::invalid_argument, "time step does not divide the final time");
  return steps;
}

SplitStep::SplitStep(const PotentialPtr& potential, double dt) : grid_(potential->grid()), dt_(dt) {
  if (!grid_->cartesian()) throw Error(ErrorCode::unsupported, "split-step propagation requires a cartesian grid");
  if (dt == 0.0 || !std::isfinite(dt)) throw Error(ErrorCode::invalid_argument, "time step must be nonzero");
  const RealVector& v = potential->values();
  half_potential_.resize(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) half_potential_[i] = std::polar(1.0, 0.5 * dt * v[i]);
  const RealVector s = frequency_norm_sq(*grid_);
  kinetic_.resize(s.size());
  const double scale = 1.0 / static_cast<double>(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i)
    kinetic_[i] = std::polar(scale, 4.0 * std::numbers::pi * std::numbers::pi * s[i] * dt);
}

void SplitStep::step(ComplexVector& u) const {
  const std::vector<int> dims(grid_->dimension(), grid_->points());
  u.array() *= half_potential_.array();
  fft::forward(u.data(), dims);
  u.array() *= kinetic_.array();
  fft::backward(u.data(), dims);
  u.array() *= half_potential_.array();
}

ComplexField propagate_perturbed(const SpectralOperator& op, const ComplexField& f, double t) {
  return op.propagate(f, t);
}

ComplexField propagate_splitstep(const PotentialPtr& potential, const ComplexField& f, double t, double dt) {
  require_same_grid(*f.grid, *potential->grid(), "propagate_splitstep");
  const long steps = step_count(t, dt);
  const SplitStep stepper(potential, t < 0.0 ? -dt : dt);
  ComplexVector u = f.values;
  for (long k = 0; k < steps; ++k) stepper.step(u);
  return ComplexField(f.grid, std::move(u), f.label);
}

ComplexField propagate_free(const ComplexField& f, double t) {
  if (!f.grid->cartesian()) throw Error(ErrorCode::unsupported, "free propagation requires a cartesian grid");
  const RealVector s = frequency_norm_sq(*f.grid);
  ComplexVector phase(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) phase[i] = std::polar(1.0, 4.0 * std::numbers::pi * std::numbers::pi * s[i] * t);
  return apply_symbol(f, phase);
}

}  // namespace dilab
