#pragma once

#include <stdexcept>
#include <string>

namespace thetalab {

enum class ErrorKind {
  invalid_argument,
  invalid_profile,
  coarse_grid,
  singular_field,
  non_integrable,
  nonpositive_yamabe,
  integration_failure,
  sign_change,
  no_horizon,
  insufficient_data,
  flow_obstruction,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid_argument";
    case ErrorKind::invalid_profile: return "invalid_profile";
    case ErrorKind::coarse_grid: return "coarse_grid";
    case ErrorKind::singular_field: return "singular_field";
    case ErrorKind::non_integrable: return "non_integrable";
    case ErrorKind::nonpositive_yamabe: return "nonpositive_yamabe";
    case ErrorKind::integration_failure: return "integration_failure";
    case ErrorKind::sign_change: return "sign_change";
    case ErrorKind::no_horizon: return "no_horizon";
    case ErrorKind::insufficient_data: return "insufficient_data";
    case ErrorKind::flow_obstruction: return "flow_obstruction";
  }
  return "unknown";
}

/// Every failure raised by the library carries a machine-readable kind so the
/// CLI can serialize it into a structured report.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace thetalab
