#ifndef PKSVM_ERRORS_HPP
#define PKSVM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace pksvm {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A matrix expected to be positive semidefinite has an eigenvalue below
/// the rejection threshold -tol * max(1, lambda_max).
class NotPsdError : public Error {
 public:
  explicit NotPsdError(const std::string& what) : Error(what) {}
};

/// A matrix expected to be positive definite produced a nonpositive
/// Cholesky pivot.
class NotSpdError : public Error {
 public:
  explicit NotSpdError(const std::string& what) : Error(what) {}
};

class DimensionMismatchError : public Error {
 public:
  explicit DimensionMismatchError(const std::string& what) : Error(what) {}
};

/// Malformed input file; carries the 1-based line number where parsing failed.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, long line)
      : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  long line() const { return line_; }

 private:
  long line_;
};

class InvalidLabelError : public Error {
 public:
  explicit InvalidLabelError(const std::string& what) : Error(what) {}
};

class EmptyDatasetError : public Error {
 public:
  explicit EmptyDatasetError(const std::string& what) : Error(what) {}
};

/// No ray of a boundary probe found a sign change.
class NoCrossingsError : public Error {
 public:
  explicit NoCrossingsError(const std::string& what) : Error(what) {}
};

}  // namespace pksvm

#endif  // PKSVM_ERRORS_HPP
