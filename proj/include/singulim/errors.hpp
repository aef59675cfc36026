#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace singulim {

/// Operand sizes disagree (variable counts, point lengths, tensor shapes).
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A point lies outside the implicit domain {denom != 0} of a rational function.
class DomainError : public std::runtime_error {
 public:
  DomainError(const std::string& what, std::vector<double> point)
      : std::runtime_error(what), point_(std::move(point)) {}

  const std::vector<double>& point() const { return point_; }

 private:
  std::vector<double> point_;
};

/// The numerator vanishes to lower order than the denominator along lines
/// through a point, so the function is not bounded there.
class UnboundedFunctionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mathematical precondition violated by an otherwise well-formed input
/// (zero direction, unsafe direction, non-monotone tail, ...).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed external input: unparsable files, bad flags, truncated traces.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace singulim
