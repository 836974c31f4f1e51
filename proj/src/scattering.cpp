#include "dilab/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dilab/error.hpp"
#include "dilab/fft.hpp"

namespace dilab {

namespace {

constexpr double pi = std::numbers::pi;

// E_{mj} = exp(-2 pi i x_j xi_m).
Eigen::MatrixXcd exponential_matrix(const RealVector& x, const RealVector& xi) {
  Eigen::MatrixXcd e(xi.size(), x.size());
  for (Eigen::Index m = 0; m < xi.size(); ++m)
    for (Eigen::Index j = 0; j < x.size(); ++j) e(m, j) = std::polar(1.0, -2.0 * pi * x[j] * xi[m]);
  return e;
}

}  // namespace

ComplexVector fourier_transform_at(const ComplexField& f, const Eigen::MatrixXd& xi) {
  const Grid& g = *f.grid;
  if (!g.cartesian()) throw Error(ErrorCode::unsupported, "Fourier evaluation requires a cartesian grid");
  if (xi.cols() != g.dimension()) throw Error(ErrorCode::invalid_argument, "frequency dimension mismatch");
  const double cell = std::pow(g.spacing(), g.dimension());
  if (g.dimension() == 1) {
    const Eigen::MatrixXcd e = exponential_matrix(g.axis(), xi.col(0));
    return cell * (e * f.values);
  }
  const int n = g.points();
  const Eigen::MatrixXcd fm = Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      f.values.data(), n, n);
  ComplexVector out(xi.rows());
  for (Eigen::Index m = 0; m < xi.rows(); ++m) {
    ComplexVector ex(n), ey(n);
    for (int j = 0; j < n; ++j) {
      ex[j] = std::polar(1.0, -2.0 * pi * g.axis()[j] * xi(m, 0));
      ey[j] = std::polar(1.0, -2.0 * pi * g.axis()[j] * xi(m, 1));
    }
    out[m] = cell * ex.transpose() * fm * ey;
  }
  return out;
}

ComplexField asymptotic_profile(const ComplexField& f, double t) {
  if (t == 0.0) throw Error(ErrorCode::invalid_argument, "the asymptotic profile needs t != 0");
  const Grid& g = *f.grid;
  if (!g.cartesian()) throw Error(ErrorCode::unsupported, "the asymptotic profile requires a cartesian grid");
  const int n = g.dimension();
  const double s = t > 0.0 ? 1.0 : -1.0;
  const cplx front = std::polar(std::pow(4.0 * pi * std::abs(t), -0.5 * n), s * n * pi / 4.0);
  ComplexVector out(g.size());
  if (n == 1) {
    const RealVector xi = -g.axis() / (4.0 * pi * t);
    const Eigen::MatrixXcd e = exponential_matrix(g.axis(), xi);
    const ComplexVector fh = g.spacing() * (e * f.values);
    for (Eigen::Index i = 0; i < g.size(); ++i) {
      const double x = g.axis()[i];
      out[i] = front * std::polar(1.0, -x * x / (4.0 * t)) * fh[i];
    }
  } else {
    // Separable evaluation: F^(xi_i, xi_j) = h^2 E F E^T on the scaled lattice.
    const int m = g.points();
    const RealVector xi = -g.axis() / (4.0 * pi * t);
    const Eigen::MatrixXcd e = exponential_matrix(g.axis(), xi);
    const Eigen::MatrixXcd fm = Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        f.values.data(), m, m);
    const Eigen::MatrixXcd fh = g.spacing() * g.spacing() * (e * fm * e.transpose());
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        const double r2 = g.axis()[i] * g.axis()[i] + g.axis()[j] * g.axis()[j];
        out[static_cast<Eigen::Index>(i) * m + j] = front * std::polar(1.0, -r2 / (4.0 * t)) * fh(i, j);
      }
  }
  return ComplexField(f.grid, std::move(out), f.label);
}

ScatteringState wave_operator(const SpectralOperator& op, const ComplexField& f, int sign,
                              const std::vector<double>& T_list, const TailGuard& guard, int checkpoints) {
  const Grid& g = *op.grid();
  if (!g.cartesian()) throw Error(ErrorCode::unsupported, "wave operators require a cartesian grid");
  if (sign != 1 && sign != -1) throw Error(ErrorCode::invalid_argument, "sign must be +1 or -1");
  if (!op.potential()->hypotheses().sr0)
    throw Error(ErrorCode::hypothesis_not_certified, "potential is not certified short-range (SR0)");
  if (T_list.empty()) throw Error(ErrorCode::invalid_argument, "empty T list");
  for (std::size_t k = 0; k < T_list.size(); ++k) {
    if (!(T_list[k] > 0.0)) throw Error(ErrorCode::invalid_argument, "T values must be positive");
    if (k > 0 && !(T_list[k] > T_list[k - 1])) throw Error(ErrorCode::invalid_argument, "T list must increase");
  }
  require_same_grid(*f.grid, g, "wave_operator");

  ScatteringState st;
  st.f = f;
  st.sign = sign;
  st.T_list = T_list;
  const double norm = f.norm();
  const ComplexVector c = op.coefficients(f);
  const int marks = std::max(1, checkpoints);
  for (double T : T_list) {
    const double end = sign * T;
    std::vector<double> probe;
    for (int k = 1; k <= marks; ++k) probe.push_back(end * k / marks);
    if (sign < 0) std::reverse(probe.begin(), probe.end());
    const Eigen::MatrixXcd states = op.propagate_many(f, probe);
    for (Eigen::Index j = 0; j < states.cols(); ++j) {
      const ComplexField s(op.grid(), states.col(j));
      const double tail = s.tail_fraction(guard.fraction);
      st.worst_tail = std::max(st.worst_tail, tail);
      if (guard.enforce && tail > guard.threshold)
        throw TailMassBreach(probe[static_cast<std::size_t>(j)], tail, guard.threshold, "wave operator");
    }
    ComplexVector ce = c;
    for (Eigen::Index k = 0; k < ce.size(); ++k) ce[k] *= std::polar(1.0, op.eigenvalues()[k] * end);
    const ComplexField perturbed = op.synthesize(ce);
    ComplexField w = propagate_free(perturbed, -end);
    w.label = f.label;
    st.isometry_defects.push_back(norm > 0.0 ? std::abs(w.norm() - norm) / norm : w.norm());
    if (!st.approximations.empty()) {
      const ComplexVector diff = w.values - st.approximations.back().values;
      st.differences.push_back(std::sqrt(g.weights().dot(diff.cwiseAbs2())));
    }
    st.approximations.push_back(std::move(w));
  }
  st.wave = st.approximations.back();
  st.g_hat = fourier_transform(st.wave);
  return st;
}

double fourier_half_weight(const ComplexField& g) {
  const ComplexVector gh = fourier_transform(g);
  const RealVector xi = frequency_norm_sq(*g.grid).cwiseSqrt();
  return 2.0 * pi * frequency_cell(*g.grid) * xi.dot(gh.cwiseAbs2());
}

ScatteringWeight scattering_weight(const ComplexField& wave, const ComplexField& f, const SpectralOperator& op) {
  ScatteringWeight out;
  out.weight = fourier_half_weight(wave);
  const double s = op.sobolev_norm(f, 0.5);
  out.target = s * s;
  out.residual = std::abs(out.weight - out.target) / (std::abs(out.target) + 1e-14);
  return out;
}

ScatteringWeight scattering_weight(const ScatteringState& state, const SpectralOperator& op) {
  return scattering_weight(state.wave, state.f, op);
}

}  // namespace dilab
