#pragma once

#include <stdexcept>
#include <string>

namespace lieflow {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent caller input (dimension mismatch, bad file, ...).
class InputError : public Error {
 public:
  using Error::Error;
};

// An iteration failed to converge or an assembled result failed its own checks.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// A chart query left the region where the chart is valid.  Chain-graph
// construction treats this as "no edge".
class OutOfWindowError : public Error {
 public:
  using Error::Error;
};

// Operation not defined for the given chart / flow combination.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline void require(bool cond, const std::string& what) {
  if (!cond) throw InputError(what);
}

}  // namespace detail
}  // namespace lieflow
