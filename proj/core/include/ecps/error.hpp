#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ecps {

enum class ErrorCode {
  invalid_word,
  alignment,
  undefined_psi,
  window_exhausted,
  resolution_exhausted,
  cannot_advance,
  depth_exhausted,
  index_out_of_range,
  consistency_violation,
  combinatorial_budget,
  budget_exceeded,
  invalid_argument,
  config,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so that
/// callers can tell a recoverable truncation (window/depth exhausted) from a
/// genuine inconsistency.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  /// True for the truncation errors that a deeper past may cure.
  bool recoverable() const noexcept {
    return code_ == ErrorCode::window_exhausted || code_ == ErrorCode::depth_exhausted;
  }

 private:
  ErrorCode code_;
};

}  // namespace ecps
