#pragma once

#include <stdexcept>
#include <string>

namespace dotprod {

// Bad invocation: malformed input, violated precondition, mixed scalar modes.
class UsageError : public std::invalid_argument {
 public:
  explicit UsageError(const std::string& what) : std::invalid_argument(what) {}
};

// Mathematically undefined request, e.g. the argument of the origin.
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

}  // namespace dotprod
