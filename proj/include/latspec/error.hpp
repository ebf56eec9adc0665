#pragma once

#include <stdexcept>
#include <string>

namespace latspec {

// A violated precondition or an argument outside an operation's domain.
// The CLI maps these to exit status 3.
class PreconditionError : public std::domain_error {
 public:
  PreconditionError(std::string kind, const std::string& what)
      : std::domain_error(what), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

// Numerical failure: no convergence, a bracket that does not bracket.
// The CLI maps these to exit status 4.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

}  // namespace latspec
