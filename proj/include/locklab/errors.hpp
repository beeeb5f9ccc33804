#pragma once

#include <stdexcept>
#include <string>

namespace locklab {

/// An argument outside a function's mathematical domain. The CLI maps this
/// to exit status 1.
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// An iterative method ran out of budget before meeting its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace locklab
