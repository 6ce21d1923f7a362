#pragma once

#include <stdexcept>
#include <string>

namespace mdinv {

/// Base of all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A value violates a documented precondition or schema rule.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Schema/parse failure at a JSON path such as `$.nodes[1].rate`.
class InputError : public ValidationError {
 public:
  InputError(std::string path, const std::string& message)
      : ValidationError(path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// Well-formed input outside the domain of an operation (e.g. a point
/// outside the polyhedron).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A theorem-backed internal check failed. Always indicates a bug.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace mdinv
