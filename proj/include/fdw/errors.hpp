#ifndef FDW_ERRORS_HPP
#define FDW_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fdw {

// Invalid problem configuration (bad exponent range, grid sizes, ...).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// API misuse: mismatched grids, incomplete history, bad indices.
class UsageError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A numerical procedure failed to reach its accuracy contract.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double achieved)
      : std::runtime_error(what), achieved_error(achieved) {}
  explicit NumericalError(const std::string& what)
      : std::runtime_error(what), achieved_error(0.0) {}
  double achieved_error;
};

// Linear solver failure (singular factorization, residual contract missed).
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fdw

#endif
