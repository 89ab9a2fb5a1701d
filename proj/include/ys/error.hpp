#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ys {

// Violated precondition on an argument (alpha outside (0,1), k < 1, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A series or quadrature that did not reach its tolerance, or a quantity
// that is provably positive came out nonpositive after rounding.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double best_estimate = 0.0,
                 double error_bound = 0.0)
      : std::runtime_error(what),
        best_estimate_(best_estimate),
        error_bound_(error_bound) {}

  double best_estimate() const noexcept { return best_estimate_; }
  double error_bound() const noexcept { return error_bound_; }

 private:
  double best_estimate_;
  double error_bound_;
};

// Malformed or invalid input data. `line` is 1-based, 0 when not tied to a line.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line == 0 ? what
                                     : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

namespace detail {

inline void require(bool ok, const char* what) {
  if (!ok) throw DomainError(what);
}

}  // namespace detail
}  // namespace ys
