#pragma once

#include <stdexcept>
#include <string>

namespace rwot {

// Base class for everything thrown by the library, so callers (and the CLI)
// can catch one type and still tell the failure kinds apart by code().
class Error : public std::runtime_error {
public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(code + ": " + what), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

private:
  std::string code_;
};

#define RWOT_DEFINE_ERROR(Name)                              \
  class Name : public Error {                                \
  public:                                                    \
    explicit Name(const std::string& what) : Error(#Name, what) {} \
  }

RWOT_DEFINE_ERROR(EmptyInput);
RWOT_DEFINE_ERROR(InvalidRadius);
RWOT_DEFINE_ERROR(MassMismatch);
RWOT_DEFINE_ERROR(UnknownFamily);
RWOT_DEFINE_ERROR(NumericalFailure);
RWOT_DEFINE_ERROR(Unsupported);
RWOT_DEFINE_ERROR(NoPotentials);
RWOT_DEFINE_ERROR(EmptyFamily);
RWOT_DEFINE_ERROR(BeyondBreakdown);
RWOT_DEFINE_ERROR(InvalidMomentOrder);
RWOT_DEFINE_ERROR(InvalidDimensions);
RWOT_DEFINE_ERROR(TooLarge);
RWOT_DEFINE_ERROR(NoElbow);
RWOT_DEFINE_ERROR(BadInput);

// NotConverged carries the partial objective value so callers can inspect
// how far the iteration got before hitting the limit.
class NotConverged : public Error {
public:
  NotConverged(const std::string& what, double partial_value, double marginal_violation)
      : Error("NotConverged", what),
        partial_value_(partial_value),
        marginal_violation_(marginal_violation) {}
  double partial_value() const { return partial_value_; }
  double marginal_violation() const { return marginal_violation_; }

private:
  double partial_value_;
  double marginal_violation_;
};

#undef RWOT_DEFINE_ERROR

}  // namespace rwot
