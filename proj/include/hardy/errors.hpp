#pragma once

#include <stdexcept>
#include <string>

namespace hardy {

/// Thrown when an argument violates a named precondition or hypothesis.
/// `predicate()` carries a short machine-readable name of the violated condition.
class ParameterError : public std::invalid_argument {
 public:
  ParameterError(std::string predicate, const std::string& message);

  const std::string& predicate() const noexcept { return predicate_; }

 private:
  std::string predicate_;
};

/// Thrown when a numerical routine cannot deliver a result of known accuracy.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hardy
