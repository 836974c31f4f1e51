#pragma once

#include <array>
#include <optional>
#include <string>

#include "dilab/grid.hpp"

namespace dilab {

enum class MultiplierFamily { constant, abs, smoothed_abs, japanese_bracket, bump_integrated };

MultiplierFamily parse_multiplier_family(const std::string& name);
std::string to_string(MultiplierFamily family);

/// psi(r) = scale * R * base(r / R) + offset, where base is the family profile:
///   constant          0
///   abs               r
///   smoothed_abs      sqrt(eps^2 + r^2)
///   japanese_bracket  sqrt(1 + r^2)
///   bump_integrated   inner^2 psi_k(r / inner), psi_k(r) = int_0^r (r - s) h_k(s) ds
/// with h_k = 1 on [0, 1], 0 beyond (k+1)/k, and a quintic smoothstep in between.
struct MultiplierParams {
  double eps = 1.0;
  int k = 4;
  double inner = 1.0;
  double R = 1.0;
  double offset = 0.0;
  double scale = 1.0;
};

/// The plateau bump h_k and its integral H_k.
double bump_profile(int k, double r);
double bump_integral(int k, double r);
/// lim_{r -> inf} H_k(r) = 1 + 1/(2k).
double bump_mass(int k);

class MultiplierProfile {
 public:
  MultiplierProfile(MultiplierFamily family, MultiplierParams params);

  MultiplierFamily family() const { return family_; }
  const MultiplierParams& params() const { return params_; }
  /// psi and its first four radial derivatives at r >= 0.
  std::array<double, 5> derivatives(double r) const;
  /// Delta^2 psi for the radial function psi(|x|) in R^n, at r > 0.
  double bilaplacian(double r, int n) const;
  double slope_at_infinity() const;
  /// Radius beyond which psi is affine (bump family), or infinity.
  double affine_beyond() const;
  std::string describe() const;

 private:
  std::array<double, 5> base(double r) const;

  MultiplierFamily family_;
  MultiplierParams params_;
};

struct Multiplier {
  GridPtr grid;
  MultiplierProfile profile;
  RealVector psi;
  RealVector d1;
  RealVector d2;
  RealVector bilap;
  double slope_inf = 0.0;
  bool distributional_at_origin = false;
};

Multiplier build_multiplier(MultiplierFamily family, const MultiplierParams& params, const GridPtr& grid);

/// psi'' |d_r u|^2 + (psi'/|x|) |grad_tau u|^2.
RealField hessian_form(const Multiplier& m, const ComplexField& u);
/// Re sum_ab conj(d_a u) (D^2 psi)_ab d_b u, by explicit contraction (cartesian only).
RealField hessian_form_direct(const Multiplier& m, const ComplexField& u);

struct BilaplacianReport {
  RealField values;
  bool closed_form = true;
  bool distributional_at_origin = false;
  std::optional<double> fitted_C;         // Delta^2 psi ~ C / r^3 beyond the bump (n >= 4)
  std::optional<double> fitted_exponent;  // log-log slope of |Delta^2 psi| there
  std::optional<double> far_field_max;    // max |Delta^2 psi| beyond the bump (n = 3)
};

BilaplacianReport bilaplacian(const Multiplier& m);

/// Delta^2 psi by applying the radial Laplacian f'' + (n-1) f'/r twice with centred
/// differences of step `step`; used as an independent check of the closed forms.
double bilaplacian_finite_difference(const MultiplierProfile& profile, double r, int n, double step);

}  // namespace dilab
