#pragma once

#include <stdexcept>
#include <string>

namespace potrec {

/// Precondition or parameter-domain violation (bad input, not a numerical accident).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Numerical failure: iteration caps, loss of convergence, breakdown.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Every grid point was rejected by a reconstruction method.
class ReconstructionFailed : public NumericError {
 public:
  using NumericError::NumericError;
};

/// Data that a rational interpolant cannot represent (zero pivots, coincident nodes).
class DegenerateData : public NumericError {
 public:
  using NumericError::NumericError;
};

namespace detail {
inline void require(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}
}  // namespace detail

}  // namespace potrec
