#pragma once

#include <cstddef>
#include <vector>

namespace dilab {

/// Least-squares fit of log(error) = log(C) + p log(step).
struct OrderFit {
  double order = 0.0;
  double log_constant = 0.0;
  double r_squared = 0.0;
  bool floor = false;         // every error at or below the roundoff floor
  bool monotone = true;       // errors shrink with the step
  std::size_t points = 0;
};

OrderFit fit_order(const std::vector<double>& steps, const std::vector<double>& errors, double floor = 1e-13);

/// Value at 0 of the quadratic through (x_i, y_i), i = 0, 1, 2.
double extrapolate_quadratic(const std::vector<double>& x, const std::vector<double>& y);

bool strictly_decreasing(const std::vector<double>& v);
bool non_increasing(const std::vector<double>& v, double relative_slack = 0.0);

}  // namespace dilab
