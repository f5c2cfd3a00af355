#pragma once

#include <stdexcept>
#include <string>

namespace hv {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A real-valued input lies outside the domain of the operation (NaN, inf).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Invalid or inconsistent arguments, e.g. parameter bounds or l > u.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure failed to bracket or converge.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// A test statistic is undefined because the score differentials vanish.
class DegenerateTestError : public Error {
 public:
  using Error::Error;
};

/// Reading or writing external data failed.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace hv
