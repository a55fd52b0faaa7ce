#pragma once

#include <stdexcept>
#include <string>

namespace misiu {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An exact division left a nonzero remainder. Inside the Misiurewicz
/// pipeline this means a polynomial identity was violated.
class NotDivisible : public Error {
 public:
  using Error::Error;
};

/// A computation would exceed the configured size limits.
class ResourceGuardError : public Error {
 public:
  using Error::Error;
};

class ZeroPolynomial : public Error {
 public:
  using Error::Error;
};

/// A p-adic root candidate has a non-unit derivative, so lifting is ambiguous.
class PrecisionTooLow : public Error {
 public:
  using Error::Error;
};

/// The modulus divides the leading coefficient.
class DegreeDrop : public Error {
 public:
  using Error::Error;
};

class NotSquarefree : public Error {
 public:
  using Error::Error;
};

class NoUsablePrime : public Error {
 public:
  using Error::Error;
};

}  // namespace misiu
