#pragma once

#include <stdexcept>
#include <string>

namespace unseen {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad parameters or malformed input data (files, flags, histograms).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A smoothing scheme was requested where it is undefined (t <= 1).
class SchemeError : public Error {
 public:
  using Error::Error;
};

/// Overflow, unbounded moments, or a series/quadrature that did not converge.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// More than the tolerated fraction of Monte-Carlo trials failed.
class TrialFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace unseen
