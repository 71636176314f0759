#pragma once

#include <stdexcept>
#include <string>

namespace gridarb {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad CSV rows, misaligned grids, invalid configuration.
class DataError : public Error {
 public:
  using Error::Error;
};

/// A linear program without a feasible point (or with an unbounded objective).
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

enum class FaultKind {
  kSaturation,    ///< particle concentration left [0, c_max]
  kKineticsStall, ///< surface concentration at 0 or c_max, exchange density vanishes
  kThermalGuard,  ///< temperature outside the guard band
  kVoltageBound,  ///< terminal voltage outside the hard bounds
  kSocWindow,     ///< linear model state of charge left its window
  kCurrentLimit,  ///< commanded current above the rated current
};

const char* to_string(FaultKind kind) noexcept;

/// A cell model refused a step. Callers treat it as an over/under-charge event.
class ModelFault : public Error {
 public:
  ModelFault(FaultKind kind, const std::string& what)
      : Error(std::string(to_string(kind)) + ": " + what), kind_(kind), detail_(what) {}

  FaultKind kind() const noexcept { return kind_; }
  /// The message without the fault kind.
  const std::string& detail() const noexcept { return detail_; }

 private:
  FaultKind kind_;
  std::string detail_;
};

}  // namespace gridarb
