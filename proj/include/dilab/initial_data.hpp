#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "dilab/grid.hpp"

namespace dilab {

/// Initial-data families:
///   gaussian      amplitude exp(-|x|^2 / (2 width^2)) exp(2 pi i xi0 x_1)
///   compact_bump  exp(1 - 1/(1 - (|x|/radius)^2)) on |x| < radius
///   single_mode   exp(2 pi i xi0 x_1) (cartesian only)
///   random        real band-limited random field (see RandomField), seeded
struct DataParams {
  std::string family = "gaussian";
  double width = 2.0;
  double amplitude = 1.0;
  double xi0 = 0.0;
  double radius = 5.0;
  bool normalize = false;
  // random fields
  double bandlimit = 1.0;
  double envelope = 1.5;
  double hole = 1.0;
  int modes = 8;
  std::uint64_t seed = 1;
};

ComplexField make_initial_data(const GridPtr& grid, const DataParams& params);

/// Uniform variates in [0, 1) from std::mt19937_64. The engine's output sequence is fixed by the
/// standard; the mapping to doubles is done here so draws do not depend on the library's distributions.
class UniformSource {
 public:
  explicit UniformSource(std::uint64_t seed) : engine_(seed) {}
  double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

/// Real random field sum_m a_m cos(2 pi xi_m . x + phi_m) e^{-|x|^2/(2 s^2)} (|x|^2/(c^2 + |x|^2))^2,
/// with |xi_m| <= bandlimit, s = envelope and c = hole. Radial grids use the radial analogue in r.
/// The profile is a function of x, so the same draw can be resampled on refined grids.
class RandomField {
 public:
  RandomField(int dimension, bool radial, const DataParams& params, UniformSource& source);
  double value(double x, double y) const;
  ComplexField sample(const GridPtr& grid) const;

 private:
  int dimension_;
  bool radial_;
  double envelope_;
  double hole_;
  std::vector<double> amp_, kx_, ky_, phase_;
};

}  // namespace dilab
