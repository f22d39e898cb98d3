#pragma once

#include <stdexcept>
#include <string>

namespace ietlab {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-contract input (bad permutation text, reducible
/// permutation where an irreducible one is required, non-positive lengths).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

class ReducibleError : public InvalidInput {
 public:
  explicit ReducibleError(const std::string& perm)
      : InvalidInput("reducible permutation: " + perm) {}
};

/// A point outside the domain [0, |lambda|) of an interval exchange.
class DomainError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

/// Rauzy induction is undefined: lambda_d == lambda_{pi^{-1}(d)}.
class HaltOnTie : public Error {
 public:
  using Error::Error;
};

/// A Zorich run exceeded its configured cap.
class DivergenceGuard : public Error {
 public:
  using Error::Error;
};

/// A window word whose composite matrix has a zero entry.
class NonPositiveWindow : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

/// A matrix does not carry one lattice basis onto the other.
class BasisMismatch : public Error {
 public:
  using Error::Error;
};

/// The floating-point budget of a computation was exhausted.
class PrecisionLoss : public Error {
 public:
  using Error::Error;
};

}  // namespace ietlab
