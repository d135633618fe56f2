#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tfr {

enum class ErrorCode {
  invalid_argument,
  out_of_band,
  dimension_mismatch,
  io,
  format,
  divergence,
  non_finite,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library. The code is stable and machine-readable;
/// the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Non-fatal diagnostics (e.g. a WVD fed a non-analytic signal) go through a
/// process-wide handler. The default writes to stderr.
using WarningHandler = std::function<void(std::string_view)>;

WarningHandler set_warning_handler(WarningHandler handler);
void warn(std::string_view message);

}  // namespace tfr
