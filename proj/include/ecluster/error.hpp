#pragma once

#include <stdexcept>
#include <string>

namespace ecluster {

// Domain errors are legal mathematical outcomes or rejected requests;
// ParseError is reserved for input that could not be read at all.
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotMutable : DomainError {
  using DomainError::DomainError;
};

struct AmbiguousExchange : DomainError {
  using DomainError::DomainError;
};

struct NotAnExtension : DomainError {
  using DomainError::DomainError;
};

struct MalformedDescription : DomainError {
  using DomainError::DomainError;
};

struct UnsupportedOracle : DomainError {
  using DomainError::DomainError;
};

struct DegenerateObject : DomainError {
  using DomainError::DomainError;
};

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace ecluster
