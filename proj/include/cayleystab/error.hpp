#pragma once

#include <stdexcept>
#include <string>

namespace cayleystab {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation (bad factor list,
/// delta outside (0, 1/2), malformed set literal, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition does not hold (set not inverse-closed, group
/// not transitive on a block, degree mismatch, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// An enumeration would exceed its configured cap. Callers that report
/// tri-state results translate this into "indeterminate".
class CapExceeded : public Error {
 public:
  CapExceeded(const std::string& what, std::size_t cap)
      : Error(what + " (cap " + std::to_string(cap) + ")"), cap_(cap) {}

  std::size_t cap() const noexcept { return cap_; }

 private:
  std::size_t cap_;
};

/// A postcondition checked at runtime failed. Always a bug.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace cayleystab
