#pragma once

#include <stdexcept>
#include <string>

namespace cdiff {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid field parameters: non-prime characteristic, reducible or malformed
// modulus, order above the configured cap.
class FieldError : public Error {
 public:
  using Error::Error;
};

// Operands drawn from two different fields. Never coerced.
class FieldMismatch : public Error {
 public:
  FieldMismatch() : Error("operands belong to different fields") {}
};

// Mathematically undefined request (inverse of zero, gcd(0, 0), ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Input fails a hypothesis an operation requires (monomial where a
// non-monomial is needed, p | d-1 for the root-of-unity set, ...).
class IneligibleInput : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace cdiff
