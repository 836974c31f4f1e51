#include "dilab/error.hpp"

#include <sstream>

namespace dilab {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::invalid_dimension: return "invalid-dimension";
    case ErrorCode::nonpositive_extent: return "nonpositive-extent";
    case ErrorCode::region_exceeds_extent: return "region-exceeds-extent";
    case ErrorCode::incompatible_grid: return "incompatible-grid";
    case ErrorCode::unsupported: return "unsupported";
    case ErrorCode::too_large: return "too-large";
    case ErrorCode::domain: return "domain";
    case ErrorCode::unknown_family: return "unknown-family";
    case ErrorCode::negative_amplitude: return "negative-amplitude";
    case ErrorCode::hypothesis_not_certified: return "hypothesis-not-certified";
    case ErrorCode::tail_mass_breach: return "tail-mass-breach";
    case ErrorCode::schema: return "schema";
    case ErrorCode::numerical: return "numerical";
    case ErrorCode::io: return "io";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

namespace {
std::string breach_message(double time, double fraction, double threshold, const std::string& where) {
  std::ostringstream os;
  os.precision(3);
  os << "tail mass " << fraction << " exceeds threshold " << threshold << " at t=" << time;
  if (!where.empty()) os << " (" << where << ")";
  return os.str();
}
}  // namespace

TailMassBreach::TailMassBreach(double time, double fraction, double threshold, const std::string& where)
    : Error(ErrorCode::tail_mass_breach, breach_message(time, fraction, threshold, where)),
      time_(time),
      fraction_(fraction),
      threshold_(threshold) {}

}  // namespace dilab
