#pragma once

#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

namespace oscint {

using cplx = std::complex<double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Interval on the extended real line; either endpoint may be infinite.
struct ExtInterval {
  double lo = -kInf;
  double hi = kInf;

  static ExtInterval real_line() { return {}; }
  bool finite() const { return lo > -kInf && hi < kInf; }
  bool contains(double x) const { return x >= lo && x <= hi; }
  double length() const { return hi - lo; }
};

enum class Parity { Even, Odd, None };

// Error hierarchy. Numerical non-convergence is reported through
// QuadResult::status, never through exceptions.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DomainError : Error {
  using Error::Error;
};
struct PreconditionError : Error {
  using Error::Error;
};
struct NonMonotonePhase : Error {
  using Error::Error;
};
struct UnboundedVariation : Error {
  using Error::Error;
};
struct RouteHypothesisFailed : Error {
  using Error::Error;
};
struct KernelInvalid : Error {
  using Error::Error;
};
struct CertificateMissing : Error {
  using Error::Error;
};
struct UnknownEntry : Error {
  using Error::Error;
};

}  // namespace oscint
