#ifndef DEFUNG_ERRORS_H
#define DEFUNG_ERRORS_H

#include <stdexcept>
#include <string>

namespace defung {

/// Source position, 1-based. line == 0 means "no position".
struct SourceLoc {
  int line = 0;
  int column = 0;

  bool known() const { return line > 0; }
  std::string to_string() const {
    if (!known()) return "<unknown>";
    return std::to_string(line) + ":" + std::to_string(column);
  }
};

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  Error(std::string message, SourceLoc loc = {})
      : std::runtime_error(loc.known() ? loc.to_string() + ": " + message : message),
        loc_(loc) {}

  const SourceLoc& loc() const { return loc_; }

 private:
  SourceLoc loc_;
};

/// Lexing / reading / lowering errors with positions.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Shape violations found by validate_transformability and friends.
class ValidateError : public Error {
 public:
  using Error::Error;
};

/// A definition whose decision tree has no base leaf.
class NoBaseCaseError : public ValidateError {
 public:
  using ValidateError::ValidateError;
};

/// A recursive call in a test position on the decision spine.
class RecursiveCallInTestError : public ValidateError {
 public:
  RecursiveCallInTestError(std::string path, SourceLoc loc = {})
      : ValidateError("recursive call in test position at " + path, loc),
        path_(std::move(path)) {}

  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// Runtime type error during evaluation (e.g. car of a non-pair).
class DynamicTypeError : public Error {
 public:
  using Error::Error;
};

/// Recursion depth exceeded the configured safety cap.
class RecursionSafetyCapError : public Error {
 public:
  RecursionSafetyCapError(std::uint64_t cap)
      : Error("recursion depth exceeded safety cap " + std::to_string(cap)), cap_(cap) {}

  std::uint64_t cap() const { return cap_; }

 private:
  std::uint64_t cap_;
};

}  // namespace defung

#endif
