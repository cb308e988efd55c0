#pragma once

#include <stdexcept>

namespace mppose {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Frame labels of two transforms do not chain.
struct FrameError : Error {
  using Error::Error;
};

// An argument violates a documented precondition (coincident points, zero
// normal, ...).
struct DegenerateInput : Error {
  using Error::Error;
};

// A problem instance admits no canonical frame or solver parameterization.
struct DegenerateConfiguration : Error {
  using Error::Error;
};

// A polynomial system vanished identically; infinitely many or no isolated
// solutions.
struct DegenerateSystem : Error {
  using Error::Error;
};

struct InvalidPolynomial : Error {
  using Error::Error;
};

// Polynomial degree bookkeeping out of bounds.
struct ShapeError : Error {
  using Error::Error;
};

struct InvalidRotation : Error {
  using Error::Error;
};

struct InvalidLine : Error {
  using Error::Error;
};

// Simulator could not place a feature within the retry budget.
struct GenerationError : Error {
  using Error::Error;
};

struct InsufficientData : Error {
  using Error::Error;
};

// Malformed instance or config files.
struct IoError : Error {
  using Error::Error;
};

}  // namespace mppose
