#pragma once

#include <string>
#include <vector>

#include "dilab/config.hpp"
#include "dilab/experiments.hpp"
#include "dilab/functionals.hpp"
#include "dilab/initial_data.hpp"
#include "dilab/multiplier.hpp"
#include "dilab/potential.hpp"
#include "dilab/report.hpp"
#include "dilab/spectral.hpp"

namespace dilab::studies {

void conservation_study(const ExperimentConfig&, const StudyContext&, ExperimentReport&);
void finite_T_identity(const ExperimentConfig&, const StudyContext&, ExperimentReport&);
void pseudoconformal_study(const ExperimentConfig&, const StudyContext&, ExperimentReport&);
void scattering_study(const ExperimentConfig&, const StudyContext&, ExperimentReport&);
void vai_limit_study(const ExperimentConfig&, const StudyContext&, ExperimentReport&);
void morawetz_study(const ExperimentConfig&, const StudyContext&, ExperimentReport&);
void local_smoothing_study(const ExperimentConfig&, const StudyContext&, ExperimentReport&);
void dispersive_limits_study(const ExperimentConfig&, const StudyContext&, ExperimentReport&);
void rage_study(const ExperimentConfig&, const StudyContext&, ExperimentReport&);
void reversibility_demo(const ExperimentConfig&, const StudyContext&, ExperimentReport&);
void bilinear_survey(const ExperimentConfig&, const StudyContext&, ExperimentReport&);

GridPtr grid_from(const ExperimentConfig& cfg);
PotentialPtr potential_from(const ExperimentConfig& cfg, const GridPtr& grid);
MultiplierParams multiplier_params(const ExperimentConfig& cfg);
Multiplier multiplier_from(const ExperimentConfig& cfg, const GridPtr& grid);
DataParams data_params(const ExperimentConfig& cfg);
ComplexField data_from(const ExperimentConfig& cfg, const GridPtr& grid);
TailGuard guard_from(const ExperimentConfig& cfg);
/// time.dt, or time.dt_per_h * h when that is positive.
double time_step(const ExperimentConfig& cfg, const Grid& grid);
double tol(const ExperimentConfig& cfg, const std::string& name);
/// Sorted ladder from the sweep block; throws a schema error when it is empty or not positive.
std::vector<double> ladder(const ExperimentConfig& cfg, const std::string& name);

/// Per-state densities |u|^2, |d_r u|^2 and |grad_tau u|^2.
struct StateDensity {
  RealVector mass;
  RealVector radial;
  RealVector angular;
};
StateDensity state_density(const ComplexField& u);
std::vector<StateDensity> state_densities(const Trajectory& traj);

/// Trapezoid-in-time integral of the densities over the window |t| <= T of `times`.
StateDensity window_integral(const std::vector<StateDensity>& d, const std::vector<double>& times, double T);
/// Time-integrated identity integrand for one multiplier.
double identity_lhs(const StateDensity& integrated, const Multiplier& m, const Potential& potential);

void record_tail(ExperimentReport& report, const std::string& name, double worst_tail);
double relative_gap(double value, double target, double floor);

}  // namespace dilab::studies

namespace dilab::studies {
/// -T..T with dt steps, mirrored so that t and -t are exact negatives.
std::vector<double> symmetric_times(double T, double dt);
}  // namespace dilab::studies
