#pragma once

#include <stdexcept>
#include <string>

namespace ellex {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument violates a documented invariant (x = 0, |a| outside (0,1), m = 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A product base or nome has modulus >= 1, so the infinite product diverges.
class NonConvergentBase : public DomainError {
 public:
  using DomainError::DomainError;
};

/// The tail bound of a product or series was not reached within the term cap.
class TruncationExceeded : public Error {
 public:
  using Error::Error;
};

/// The evaluation point lies within tolerance of a zero or pole.
class NearSingularity : public Error {
 public:
  using Error::Error;
};

/// A 4x4 matrix could not be inverted to working precision.
class SingularMatrix : public Error {
 public:
  using Error::Error;
};

/// The contour radius of a Laurent extraction sits on a pole circle.
class AnnulusContainsPole : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Doubling the number of quadrature nodes moved some coefficient too far.
class QuadratureUnresolved : public Error {
 public:
  using Error::Error;
};

}  // namespace ellex
