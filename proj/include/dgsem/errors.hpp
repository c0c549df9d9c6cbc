#ifndef DGSEM_ERRORS_HPP
#define DGSEM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace dgsem {

/// Base class for all solver errors.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Bad user input: unknown keys, unresolvable names, invalid ranges.
class ConfigError : public Error {
public:
  using Error::Error;
};

/// Array extents do not match the operator they are applied to.
class DimensionError : public Error {
public:
  using Error::Error;
};

/// Degenerate bounds, non-positive Jacobians, non-unit normals.
class GeometryError : public Error {
public:
  using Error::Error;
};

/// Non-physical state (rho <= 0 or p <= 0). Carries the offending state.
class AdmissibilityError : public Error {
public:
  AdmissibilityError(const std::string& what, double rho, double p)
      : Error(what), rho_(rho), p_(p) {}
  double rho() const { return rho_; }
  double pressure() const { return p_; }

private:
  double rho_;
  double p_;
};

/// Interpolation target outside the reference interval.
class RangeError : public Error {
public:
  using Error::Error;
};

/// Invalid or unsupported polynomial order.
class OrderError : public Error {
public:
  using Error::Error;
};

/// A numerical precondition failed (e.g. an indefinite flux matrix).
class NumericalValidityError : public Error {
public:
  using Error::Error;
};

}  // namespace dgsem

#endif
