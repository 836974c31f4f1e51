#pragma once

#include <string>
#include <vector>

#include "dilab/config.hpp"
#include "dilab/error.hpp"
#include "dilab/functionals.hpp"
#include "dilab/multiplier.hpp"
#include "dilab/report.hpp"
#include "dilab/spectral.hpp"

namespace dilab {

enum class ConvergenceAxis { none, N, dt, T, eps };

ConvergenceAxis parse_axis(const std::string& name);
std::string to_string(ConvergenceAxis axis);

struct StudyContext {
  ConvergenceAxis axis = ConvergenceAxis::none;
  bool ladders = true;  // run a study's internal refinement ladders
};

using StudyFunction = void (*)(const ExperimentConfig&, const StudyContext&, ExperimentReport&);

struct StudyInfo {
  std::string name;
  std::string summary;
  StudyFunction run;
};

const std::vector<StudyInfo>& experiments();
const StudyInfo& find_experiment(const std::string& name);

/// Exit status of a run: 0 all criteria pass, 1 some criterion fails, 2 schema or setup error,
/// 3 tail-mass breach, 4 numerical failure.
enum ExitCode : int { exit_ok = 0, exit_failed = 1, exit_schema = 2, exit_tail = 3, exit_numerical = 4 };
int exit_code_for(ErrorCode code);

struct RunOutcome {
  ExperimentReport report;
  int exit_code = exit_ok;
  std::string message;
  bool has_report = false;  // false when nothing was computed (schema errors)
};

/// Checks the experiment name and builds every object the study needs, without evolving anything.
void validate_config(const ExperimentConfig& cfg);

/// Validates, runs and classifies the outcome. Never throws for study failures.
RunOutcome run_experiment(const ExperimentConfig& cfg, const StudyContext& ctx = {});

/// Reruns the study along a refinement axis and fits the observed order of its convergence metric.
RunOutcome run_convergence(const ExperimentConfig& cfg, ConvergenceAxis axis);

/// Both sides of the finite-time multiplier identity on the strip [-T, T].
struct IdentityTerms {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;  // |lhs - rhs| / (|lhs| + |rhs| + floor)
  std::vector<double> times;
  std::vector<double> integrand;
  double worst_tail = 0.0;
};

IdentityTerms finite_T_terms(const SpectralOperator& op, const Multiplier& m, const ComplexField& f, double T,
                             double dt, const TailGuard& guard = {}, double floor = 1e-14);

/// Integrand of the identity at one time: int psi''|d_r u|^2 + (psi'/r)|grad_tau u|^2 - Delta^2 psi |u|^2 / 4
/// - dV psi' |u|^2 / 2.
double identity_integrand(const ComplexField& u, const Multiplier& m, const Potential& potential);

/// (n - 1)(n - 3) / 4.
double morawetz_coefficient(int n);

}  // namespace dilab
