#pragma once

#include <stdexcept>
#include <string>

namespace binmat {

// Base class for all library failures. The CLI maps subclasses to exit codes.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Margins (or margins plus mask) admit no binary matrix.
class infeasible_error : public error {
 public:
  using error::error;
};

// Structural-zero mask violates the one-zero-per-row/column requirement
// of the exact-support construction.
class mask_error : public error {
 public:
  using error::error;
};

// The backward recursion found no path of positive weight. In exact-support
// modes this is equivalent to infeasibility; with a general mask enforced
// through pinned probabilities it signals a sampling dead end.
class no_valid_path_error : public error {
 public:
  using error::error;
};

// Formula evaluated outside its domain (e.g. a row sum exceeding the
// number of columns).
class domain_error : public error {
 public:
  using error::error;
};

// Brute-force enumeration refused: instance exceeds the hard size guard.
class size_limit_error : public error {
 public:
  using error::error;
};

// Exact counting exceeded its memoization budget.
class budget_error : public error {
 public:
  using error::error;
};

// Input is not of the required structural family (block construction,
// closed-form count, ...).
class shape_error : public error {
 public:
  using error::error;
};

// Text input could not be parsed; carries a 1-based line number.
class parse_error : public error {
 public:
  parse_error(const std::string& what, int line)
      : error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace binmat
