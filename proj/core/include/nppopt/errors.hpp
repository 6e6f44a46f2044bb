#pragma once

#include <stdexcept>
#include <string>

namespace nppopt {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid argument or configuration outside the mathematical domain.
struct DomainError : Error {
  using Error::Error;
};

// Non-finite value produced while evaluating an integrand or density.
struct EvaluationError : Error {
  using Error::Error;
};

struct ConvergenceError : Error {
  using Error::Error;
};

}  // namespace nppopt
