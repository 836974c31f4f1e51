#pragma once

#include <memory>
#include <string>
#include <vector>

#include "dilab/grid.hpp"

namespace dilab {

enum class PotentialFamily { zero, inverse_power, gaussian_bump, compact_bump, algebraic };

PotentialFamily parse_potential_family(const std::string& name);
std::string to_string(PotentialFamily family);

/// Family parameters. Each family reads only its own fields:
///   inverse_power  c / (1 + r^2)^p          (c >= 0, p >= 1)
///   gaussian_bump  a exp(-r^2 / sigma^2)    (a >= 0, sigma > 0)
///   compact_bump   a exp(1 - 1/(1 - (r/rho)^2)) on r < rho, 0 beyond
///   algebraic      c / (1 + r)^q            (c >= 0, q > 0)
struct PotentialParams {
  double c = 1.0;
  double p = 1.0;
  double a = 1.0;
  double sigma = 2.0;
  double rho = 5.0;
  double q = 2.0;
};

struct Hypotheses {
  bool sr0 = false;
  double sr0_C = 0.0;
  double sr0_eps = 0.0;
  bool decay = false;
  bool new_limit = false;       // lim |x| dV = 0, on the outer quartile
  double new_outer_max = 0.0;   // max of |x||dV| over the outer quartile
  bool rageweak = false;        // V -> 0 and |x| dV -> 0
  double tolerance = 0.0;
};

class Potential {
 public:
  Potential(GridPtr grid, PotentialFamily family, PotentialParams params);

  const GridPtr& grid() const { return grid_; }
  PotentialFamily family() const { return family_; }
  const PotentialParams& params() const { return params_; }
  const RealVector& values() const { return values_; }
  /// Radial derivative of V at every node.
  const RealVector& radial_derivative() const { return radial_; }
  const Hypotheses& hypotheses() const { return hypotheses_; }
  void set_hypotheses(const Hypotheses& h) { hypotheses_ = h; }
  bool is_zero() const { return family_ == PotentialFamily::zero; }

  double value(double r) const;
  double derivative(double r) const;
  std::string describe() const;

 private:
  GridPtr grid_;
  PotentialFamily family_;
  PotentialParams params_;
  RealVector values_;
  RealVector radial_;
  Hypotheses hypotheses_;
};

using PotentialPtr = std::shared_ptr<const Potential>;

/// Samples the family on the grid and certifies its hypotheses with `tolerance`.
PotentialPtr sample_potential(PotentialFamily family, const PotentialParams& params, const GridPtr& grid,
                              double tolerance = 0.05);
PotentialPtr zero_potential(const GridPtr& grid);

/// Grid-based certification of (SR0), (decay), (new) and (rageweak).
Hypotheses validate_assumptions(const Potential& potential, double tolerance = 0.05);

/// Exponents tried when fitting the SR0 bound.
const std::vector<double>& sr0_exponents();

}  // namespace dilab
