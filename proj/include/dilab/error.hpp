#pragma once

#include <stdexcept>
#include <string>

namespace dilab {

enum class ErrorCode {
  invalid_argument,
  invalid_dimension,
  nonpositive_extent,
  region_exceeds_extent,
  incompatible_grid,
  unsupported,
  too_large,
  domain,
  unknown_family,
  negative_amplitude,
  hypothesis_not_certified,
  tail_mass_breach,
  schema,
  numerical,
  io,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Raised when an evolved state leaks past the tail-mass threshold.
class TailMassBreach : public Error {
 public:
  TailMassBreach(double time, double fraction, double threshold, const std::string& where);
  double time() const noexcept { return time_; }
  double fraction() const noexcept { return fraction_; }
  double threshold() const noexcept { return threshold_; }

 private:
  double time_;
  double fraction_;
  double threshold_;
};

}  // namespace dilab
