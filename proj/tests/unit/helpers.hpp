#pragma once

#include <cmath>
#include <functional>

#include "dilab/grid.hpp"

namespace testing {

inline constexpr double pi = 3.14159265358979323846;

inline dilab::ComplexField field(const dilab::GridPtr& g, const std::function<dilab::cplx(double, double)>& f) {
  dilab::ComplexVector v(g->size());
  if (g->cartesian() && g->dimension() == 2) {
    const dilab::RealVector x = g->coordinate(0), y = g->coordinate(1);
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = f(x[i], y[i]);
  } else {
    const dilab::RealVector& x = g->cartesian() ? g->axis() : g->radius();
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = f(x[i], 0.0);
  }
  return dilab::ComplexField(g, v);
}

inline double max_abs(const dilab::ComplexVector& v) { return v.cwiseAbs().maxCoeff(); }

}  // namespace testing
