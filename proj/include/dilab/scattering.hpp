#pragma once

#include <vector>

#include "dilab/functionals.hpp"
#include "dilab/grid.hpp"
#include "dilab/spectral.hpp"

namespace dilab {

/// f^(xi) = int exp(-2 pi i x.xi) f(x) dx evaluated by direct quadrature at arbitrary frequencies
/// (the trigonometric interpolant of the discrete transform). `xi` holds one row per point.
ComplexVector fourier_transform_at(const ComplexField& f, const Eigen::MatrixXd& xi);

/// Leading-order free wave: e^{i sgn(t) n pi/4} e^{-i|x|^2/4t} (4 pi |t|)^{-n/2} f^(-x/(4 pi t)).
ComplexField asymptotic_profile(const ComplexField& f, double t);

struct ScatteringState {
  ComplexField f;
  int sign = 1;
  std::vector<double> T_list;
  std::vector<ComplexField> approximations;  // W_T f for every T
  std::vector<double> differences;           // ||W_{T_{k+1}} f - W_{T_k} f||
  std::vector<double> isometry_defects;      // | ||W_T f|| - ||f|| | / ||f||
  ComplexField wave;                         // W f at the largest T
  ComplexVector g_hat;                       // Fourier transform of `wave` (FFT order)
  double worst_tail = 0.0;
};

/// Moller approximations W_T f = e^{-i sT H_0} e^{i sT H} f, s = sign, for each T in T_list.
/// Refuses potentials without a certified (SR0) hypothesis.
ScatteringState wave_operator(const SpectralOperator& op, const ComplexField& f, int sign,
                              const std::vector<double>& T_list, const TailGuard& guard = {},
                              int checkpoints = 16);

/// 2 pi int |xi| |g^(xi)|^2 d xi for a field on a cartesian grid.
double fourier_half_weight(const ComplexField& g);

struct ScatteringWeight {
  double weight = 0.0;    // 2 pi int |xi| |g|^2
  double target = 0.0;    // ||f||^2_{H^{1/2}_V}
  double residual = 0.0;  // |weight - target| / (|target| + 1e-14)
};

ScatteringWeight scattering_weight(const ScatteringState& state, const SpectralOperator& op);
ScatteringWeight scattering_weight(const ComplexField& wave, const ComplexField& f, const SpectralOperator& op);

}  // namespace dilab
