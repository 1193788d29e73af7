#ifndef MLAFEM_ERRORS_HPP
#define MLAFEM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mlafem {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Bad problem setup: unknown domain, missing coefficient, invalid parameter.
class ConfigurationError : public Error {
public:
  using Error::Error;
};

/// Degenerate or inverted element.
class GeometryError : public Error {
public:
  using Error::Error;
};

/// Two meshes that were expected to be nested are not.
class HierarchyError : public Error {
public:
  using Error::Error;
};

class DimensionError : public Error {
public:
  using Error::Error;
};

/// Cholesky of the right-hand matrix of a pencil failed.
class ReductionError : public Error {
public:
  using Error::Error;
};

/// An iterative method hit its iteration cap.
class NonconvergenceError : public Error {
public:
  NonconvergenceError(const std::string& what, double achieved_residual, int iterations)
      : Error(what + " (residual " + std::to_string(achieved_residual) + " after " +
              std::to_string(iterations) + " iterations)"),
        residual_(achieved_residual),
        iterations_(iterations) {}

  [[nodiscard]] double residual() const noexcept { return residual_; }
  [[nodiscard]] int iterations() const noexcept { return iterations_; }

private:
  double residual_;
  int iterations_;
};

/// Malformed input file.
class ParseError : public Error {
public:
  using Error::Error;
};

} // namespace mlafem

#endif
