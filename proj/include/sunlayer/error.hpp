#ifndef SUNLAYER_ERROR_HPP_
#define SUNLAYER_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace sunlayer {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller supplied arguments outside an operation's domain.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// An activation lacks the derivative order an operation needs.
class SmoothnessError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// Something went wrong inside a computation (non-finite values, solver failure).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// An exact integer result does not fit the return type.
class OverflowError : public NumericalError {
 public:
  OverflowError(const std::string& what, int required_bits)
      : NumericalError(what), required_bits_(required_bits) {}
  int required_bits() const noexcept { return required_bits_; }

 private:
  int required_bits_;
};

}  // namespace sunlayer

#endif  // SUNLAYER_ERROR_HPP_
