#include "dilab/fitting.hpp"

#include <cmath>

#include "dilab/error.hpp"

namespace dilab {

OrderFit fit_order(const std::vector<double>& steps, const std::vector<double>& errors, double floor) {
  if (steps.size() != errors.size() || steps.size() < 2)
    throw Error(ErrorCode::invalid_argument, "order fits need at least two matching points");
  OrderFit fit;
  fit.points = steps.size();
  fit.floor = true;
  for (double e : errors)
    if (std::abs(e) > floor) fit.floor = false;
  // Errors should shrink as the step shrinks.
  for (std::size_t i = 1; i < steps.size(); ++i) {
    const bool smaller_step = steps[i] < steps[i - 1];
    const bool smaller_error = std::abs(errors[i]) < std::abs(errors[i - 1]);
    if (smaller_step != smaller_error) fit.monotone = false;
  }
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, syy = 0.0;
  const double n = static_cast<double>(steps.size());
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const double x = std::log(steps[i]);
    const double y = std::log(std::max(std::abs(errors[i]), 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
  }
  const double vx = n * sxx - sx * sx;
  if (vx <= 0.0) throw Error(ErrorCode::invalid_argument, "order fits need distinct steps");
  fit.order = (n * sxy - sx * sy) / vx;
  fit.log_constant = (sy - fit.order * sx) / n;
  const double vy = n * syy - sy * sy;
  fit.r_squared = vy > 0.0 ? (n * sxy - sx * sy) * (n * sxy - sx * sy) / (vx * vy) : 1.0;
  return fit;
}

double extrapolate_quadratic(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != 3 || y.size() != 3) throw Error(ErrorCode::invalid_argument, "quadratic extrapolation needs 3 points");
  // Lagrange basis evaluated at 0.
  double v = 0.0;
  for (int i = 0; i < 3; ++i) {
    double l = 1.0;
    for (int j = 0; j < 3; ++j)
      if (j != i) l *= (0.0 - x[j]) / (x[i] - x[j]);
    v += l * y[i];
  }
  return v;
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] < v[i - 1])) return false;
  return true;
}

bool non_increasing(const std::vector<double>& v, double relative_slack) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[i - 1] + relative_slack * std::abs(v[i - 1])) return false;
  return true;
}

}  // namespace dilab
