#pragma once

#include <stdexcept>
#include <string>

namespace qrouter {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A circuit capacitance ordering or positivity rule is broken.
class ConstraintViolation : public Error {
 public:
  ConstraintViolation(std::string first, std::string second, const std::string& what)
      : Error(what), first_(std::move(first)), second_(std::move(second)) {}
  const std::string& first() const noexcept { return first_; }
  const std::string& second() const noexcept { return second_; }

 private:
  std::string first_;
  std::string second_;
};

class InfeasibleConstraint : public Error {
 public:
  InfeasibleConstraint(double residual, const std::string& what)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

class UnsupportedInput : public Error {
 public:
  using Error::Error;
};

class GridMismatch : public Error {
 public:
  using Error::Error;
};

class CoverageError : public Error {
 public:
  CoverageError(double captured, const std::string& what) : Error(what), captured_(captured) {}
  double captured() const noexcept { return captured_; }

 private:
  double captured_;
};

class StabilityError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(int line, int column, const std::string& what)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

class ValidationError : public Error {
 public:
  ValidationError(std::string key, const std::string& what) : Error(what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace qrouter
