#pragma once

#include <stdexcept>
#include <string>

namespace salscp {

/// Raised when a numerical kernel cannot produce a finite result
/// (non-finite input, failed factorization).
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Raised when the SALS iterate-bound monitor observes a factor whose norm
/// exceeds max(initial norm, running max radius). The bound is a theorem for
/// stepsizes in (0, 1], so a violation indicates a defect.
class MonitorViolation : public NumericalError {
public:
  using NumericalError::NumericalError;
};

/// Malformed input files (COO, factor files, configs, traces).
class ParseError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace salscp
