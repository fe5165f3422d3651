#pragma once

#include <stdexcept>
#include <string>

namespace polypotential {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation (|x| >= 1, n < 3, poles...).
class DomainError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A formula hit a numerically degenerate configuration (e.g. [x,y] ~ 0).
class DegenerateError : public Error {
 public:
  using Error::Error;
};

/// det(D_f) <= 0 where an orientation-preserving map is required.
class OrientationError : public Error {
 public:
  using Error::Error;
};

/// An iterative or quadrature routine ran out of its term/node budget
/// before meeting the requested tolerance.
class BudgetExhausted : public Error {
 public:
  using Error::Error;
};

/// A rule would exceed the node-count resource limit.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Malformed problem or run configuration.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// The hypotheses of a checked statement do not hold for the supplied data.
class InapplicableHypothesis : public Error {
 public:
  using Error::Error;
};

}  // namespace polypotential
