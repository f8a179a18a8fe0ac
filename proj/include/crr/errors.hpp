#pragma once

#include <stdexcept>
#include <string>

namespace crr {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed input document (JSON, rational literal, flag value).
class ParseError : public Error {
public:
  using Error::Error;
};

/// Input whose support is empty or collapses under an operation.
class DegenerateError : public Error {
public:
  using Error::Error;
};

/// Target distortion below the minimum achievable distortion.
class InfeasibleError : public Error {
public:
  InfeasibleError(const std::string &what, double d_min)
      : Error(what), d_min_(d_min) {}
  double d_min() const noexcept { return d_min_; }

private:
  double d_min_;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
public:
  using Error::Error;
};

} // namespace crr
