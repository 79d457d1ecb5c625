#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace catsynth {

enum class ErrorKind {
  CutoffTooSmall,
  IndexOutOfRange,
  NotNormalized,
  DegenerateQudit,
  LeadingTermVanishes,
  NonConvergence,
  ZeroProbability,
  DegenerateBS,
  UnsupportedInput,
  AllStartsInfeasible,
  InvalidArgument,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries one of the kinds above so
/// callers (the optimizer, the CLI exit-code mapping) can branch on it.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace catsynth
