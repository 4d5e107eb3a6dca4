#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace efsolver {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Interval operation outside its domain, e.g. division by an interval
// containing zero.
class DomainError : public Error {
 public:
  using Error::Error;
};

class SplitDegenerate : public Error {
 public:
  using Error::Error;
};

class AllDimensionsDegenerate : public Error {
 public:
  using Error::Error;
};

class NoPositiveResidual : public Error {
 public:
  using Error::Error;
};

class EqualitiesInfeasible : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " +
              message),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class UndeclaredVariable : public ParseError {
 public:
  UndeclaredVariable(const std::string& name, std::size_t line,
                     std::size_t column)
      : ParseError("undeclared variable '" + name + "'", line, column),
        name_(name) {}

  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

}  // namespace efsolver
