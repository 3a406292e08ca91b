#pragma once

#include <stdexcept>
#include <string>

namespace cdg {

/// Evaluation outside the domain where a formula is defined (poles,
/// inadmissible parameters, violated case preconditions).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when an expression carrying a 1/r^k factor is evaluated at r = 0.
class DivisionByZero : public DomainError {
 public:
  using DomainError::DomainError;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " at offset " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace cdg
