#pragma once

#include <stdexcept>
#include <string>

namespace trineq {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand dimensions do not match the operation's index structure.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A precondition on an argument value (not its shape) was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Scalar function undefined at an eigenvalue of the operand.
class FunctionDomainError : public Error {
 public:
  using Error::Error;
};

/// Nonpositive power of a singular positive semidefinite matrix.
class SingularityError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& msg, double residual)
      : Error(msg), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// Exact group enumeration requested beyond the supported size.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Randomized search exhausted its attempt budget; carries the best
/// value seen so callers can distinguish "barely missed" from "hopeless".
class SearchFailureError : public Error {
 public:
  SearchFailureError(const std::string& msg, double best_gap)
      : Error(msg), best_gap_(best_gap) {}
  double best_gap() const { return best_gap_; }

 private:
  double best_gap_;
};

/// A constructive scan found no admissible point; carries the scan table.
class ConstructiveFailureError : public Error {
 public:
  ConstructiveFailureError(const std::string& msg, std::string scan_table)
      : Error(msg), scan_table_(std::move(scan_table)) {}
  const std::string& scan_table() const { return scan_table_; }

 private:
  std::string scan_table_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace trineq
