#pragma once

#include <stdexcept>
#include <string>

namespace mhn {

// Inconsistent vector lengths or matrix shapes.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An exhaustive method was asked to go beyond its configured size bound.
class SizeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A fixed-point or bracketing procedure could not produce a trustworthy value.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mhn
