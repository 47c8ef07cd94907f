#pragma once

#include <stdexcept>
#include <string>

namespace fjlab {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Evaluation outside the finite domain of a moment generating function.
struct DomainError : Error {
  using Error::Error;
};

// Argument outside its admissible range (e.g. pmf index outside {1..N}).
struct RangeError : Error {
  using Error::Error;
};

// No positive root of the transform equation in the search interval.
struct NoRootError : Error {
  using Error::Error;
};

// Stability precondition violated (some server cannot keep up with arrivals).
struct StabilityError : Error {
  using Error::Error;
};

// Model parameters given in the wrong order (e.g. slow rate >= fast rate).
struct ParameterOrderError : Error {
  using Error::Error;
};

// A power series failed to converge at the requested evaluation point.
struct DivergenceError : Error {
  using Error::Error;
};

// An optimization problem has no feasible point.
struct InfeasibleError : Error {
  using Error::Error;
};

// Malformed or inconsistent experiment configuration.
struct ConfigError : Error {
  using Error::Error;
};

// Statistic requested from an empty sample set.
struct EmptyError : Error {
  using Error::Error;
};

// Filesystem or stream failure while writing results.
struct IoError : Error {
  using Error::Error;
};

}  // namespace fjlab
