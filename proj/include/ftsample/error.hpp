#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ftsample {

enum class Errc {
  invalid_size,
  domain_too_small,
  dimension_mismatch,
  out_of_range,
  degenerate_distribution,
  precondition,
  undefined_bound,
  degenerate_instance,
  recovery_failed,
  no_smooth_number,
  config,
  io,
};

std::string_view errc_name(Errc code);

// Base exception for every failure raised by the library. The code lets
// callers branch on the failure class without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

inline std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::invalid_size: return "invalid-size";
    case Errc::domain_too_small: return "domain-too-small";
    case Errc::dimension_mismatch: return "dimension-mismatch";
    case Errc::out_of_range: return "out-of-range";
    case Errc::degenerate_distribution: return "degenerate-distribution";
    case Errc::precondition: return "precondition";
    case Errc::undefined_bound: return "undefined-bound";
    case Errc::degenerate_instance: return "degenerate-instance";
    case Errc::recovery_failed: return "recovery-failed";
    case Errc::no_smooth_number: return "no-smooth-number";
    case Errc::config: return "config";
    case Errc::io: return "io";
  }
  return "unknown";
}

}  // namespace ftsample
