#pragma once

#include <functional>
#include <string>
#include <vector>

#include "dilab/grid.hpp"
#include "dilab/multiplier.hpp"
#include "dilab/potential.hpp"
#include "dilab/spectral.hpp"

namespace dilab {

struct TailGuard {
  double threshold = 1e-6;  // allowed fraction of the mass in the outer region
  double fraction = 0.1;    // width of the outer region, relative to L
  bool enforce = true;
};

struct Trajectory {
  GridPtr grid;
  std::vector<double> times;
  std::vector<ComplexField> states;
  std::string provenance;
  double worst_tail = 0.0;

  std::size_t size() const { return times.size(); }
  double dt() const;
  /// Trapezoid weights with half weights at both ends.
  std::vector<double> time_weights() const;
  /// Sub-trajectory with |t| <= T (times exactly on +-T are kept).
  Trajectory window(double T) const;
};

struct TimeSeries {
  std::string name;
  std::string axis = "t";
  std::vector<double> axis_values;
  std::vector<double> values;
  std::string units;
};

/// t0, t0 + dt, ..., t1 with dt adjusted so the end point is hit exactly.
std::vector<double> uniform_times(double t0, double t1, double dt);

/// Exact evolution sampled at `times`; checks the tail mass at every sample.
Trajectory evolve(const SpectralOperator& op, const ComplexField& f, const std::vector<double>& times,
                  const TailGuard& guard = {});

/// Im int conj(u) grad u . grad psi.
double virial_flux(const ComplexField& u, const Multiplier& m);
/// G = -2 Im int conj(u) grad u . x/|x|.
double centered_flux_G(const ComplexField& u);
/// int |x| |u|^2.
double weighted_mass(const ComplexField& u);
/// Squared Sigma^{1/2} norm: ||f||^2_{H^{1/2}_V} + int |x| |f|^2.
double sigma_half_norm(const ComplexField& f, const SpectralOperator& op);

enum class SmoothingKind { full_gradient, radial_derivative };

/// Time-integrated densities int |u|^2 dt, int |d_r u|^2 dt and int |grad u|^2 dt per node.
struct SpaceTimeDensities {
  GridPtr grid;
  RealVector mass;
  RealVector radial;
  RealVector full;
};
SpaceTimeDensities space_time_densities(const Trajectory& traj);

double local_smoothing_ratio(const Trajectory& traj, double R, SmoothingKind kind);
double local_smoothing_ratio(const SpaceTimeDensities& d, double R, SmoothingKind kind);
/// Radial ratio plus (1/R^3) int int_{|x|<R} |u|^2.
double local_smoothing_ratio_n3(const Trajectory& traj, double R);
double local_smoothing_ratio_n3(const SpaceTimeDensities& d, double R);

struct PseudoconformalLedger {
  TimeSeries lhs;       // ||x u - 2it grad u||^2 + 4t^2 int V |u|^2
  TimeSeries rhs;       // int |x|^2 |f|^2 + int_0^t s theta(s) ds
  TimeSeries residual;  // lhs - rhs
  TimeSeries relative;  // |lhs - rhs| / lhs
  TimeSeries theta;     // 8 int (V + r dV / 2) |u|^2
  TimeSeries defect;    // ||(x/t) u - 2i grad u||, for t > 0
  double max_relative = 0.0;
};

/// Requires a trajectory starting at t = 0 and moving forward.
PseudoconformalLedger pseudoconformal_ledger(const Trajectory& traj, const Potential& potential);

/// ||(x/t) u - 2i grad u||.
double dispersive_defect(const ComplexField& u, double t);
/// ||grad(e^{i|x|^2/4t} u)||.
double phase_corrected_gradient(const ComplexField& u, double t);

/// a(f, g) = int conj(f) grad g . x/|x|  (n >= 2).
cplx bilinear_form_a(const ComplexField& f, const ComplexField& g);
/// Squared homogeneous H^{1/2} norm 2 pi int |xi| |f^|^2 d xi. Radial grids need the free operator
/// of the same grid and use its functional calculus.
double homogeneous_half_norm_sq(const ComplexField& f, const SpectralOperator* free_op = nullptr);
/// |a(h, h)| / ||h||^2_{H^{1/2}}.
double bilinear_ratio(const ComplexField& h, const SpectralOperator* free_op = nullptr);
/// -((n - 1)/2) int |h|^2 / |x|: the value of a(h, h) for real h.
double bilinear_ibp_value(const ComplexField& h);

/// int W |u|^2.
double weighted_observable(const ComplexField& u, const RealVector& w);
double weighted_observable(const ComplexField& u, const std::function<double(double)>& w);
/// (1/T) int_{-T}^{T} int_{|x|<R} |u|^2 dx dt over the trajectory window |t| <= T.
double rage_time_average(const Trajectory& traj, double R, double T);

}  // namespace dilab
