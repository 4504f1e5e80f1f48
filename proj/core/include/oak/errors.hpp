#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace oak {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed PDDL text. Line and column are 1-based.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column);

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Undeclared symbol, arity mismatch or ill-sorted argument.
class SortError : public Error {
 public:
  using Error::Error;
};

/// A PDDL construct outside the typed STRIPS fragment.
class UnsupportedFeature : public Error {
 public:
  explicit UnsupportedFeature(std::string feature);

  const std::string& feature() const { return feature_; }

 private:
  std::string feature_;
};

class Unreachable : public Error {
 public:
  explicit Unreachable(const std::string& fact)
      : Error("fact unreachable under delete relaxation: " + fact), fact_(fact) {}

  const std::string& fact() const { return fact_; }

 private:
  std::string fact_;
};

class UnmappedObject : public Error {
 public:
  explicit UnmappedObject(const std::string& object)
      : Error("object not in mapping domain: " + object) {}
};

class TooLarge : public Error {
 public:
  using Error::Error;
};

class InvalidPlan : public Error {
 public:
  using Error::Error;
};

class LibraryError : public Error {
 public:
  using Error::Error;
};

}  // namespace oak
