#pragma once

#include <stdexcept>
#include <string>

namespace dfw {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Violated precondition: bad parameter range, size or dimension mismatch.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Base of all failures that originate in the numerics rather than the input.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// A kernel was evaluated where it has no finite value.
class SingularityError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// A kernel derivative was requested where the kernel is not smooth enough.
class SmoothnessError : public SingularityError {
 public:
  using SingularityError::SingularityError;
};

/// Linear system whose condition estimate exceeds the hard limit.
class IllConditionedError : public NumericalError {
 public:
  IllConditionedError(const std::string& what, double condition)
      : NumericalError(what), condition_(condition) {}

  double condition() const noexcept { return condition_; }

 private:
  double condition_;
};

/// Rational model denominator vanished at the query point.
class PoleError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace dfw
