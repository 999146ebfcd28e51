#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace splice {

struct Span {
  uint32_t begin = 0;
  uint32_t end = 0;
  uint32_t line = 0;
  uint32_t column = 0;
};

// Base of every error the library raises. The C API maps each subclass to a
// status code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SyntaxError : public Error {
 public:
  SyntaxError(Span where, const std::string& what)
      : Error(format(where, what)), where_(where) {}
  Span where() const { return where_; }

  static std::string format(Span where, const std::string& what) {
    return std::to_string(where.line) + ":" + std::to_string(where.column) + ": " + what;
  }

 private:
  Span where_;
};

class TypeError : public Error {
 public:
  TypeError(Span where, std::string expected, std::string actual, const std::string& what = {})
      : Error(SyntaxError::format(where, what.empty() ? "type mismatch: expected " + expected +
                                                            ", found " + actual
                                                      : what)),
        where_(where),
        expected_(std::move(expected)),
        actual_(std::move(actual)) {}
  Span where() const { return where_; }
  const std::string& expected() const { return expected_; }
  const std::string& actual() const { return actual_; }

 private:
  Span where_;
  std::string expected_;
  std::string actual_;
};

// An expression hole whose context does not force a unique type.
class AmbiguousType : public TypeError {
 public:
  explicit AmbiguousType(Span where)
      : TypeError(where, "a unique type", "an unconstrained hole",
                  "hole type is not determined by its context") {}
};

class MissingRequirement : public Error {
 public:
  MissingRequirement() : Error("draft has no TEST section or API_cons(...) reference") {}
};

class DuplicateSolutionMarker : public Error {
 public:
  DuplicateSolutionMarker() : Error("__solution__ appears more than once in TEST") {}
};

class NotAnExprHole : public Error {
 public:
  explicit NotAnExprHole(uint32_t hole)
      : Error("hole " + std::to_string(hole) + " is not an expression hole") {}
};

class KindMismatch : public Error {
 public:
  KindMismatch() : Error("codelet kind does not match hole kind") {}
};

class DuplicateApi : public Error {
 public:
  explicit DuplicateApi(const std::string& name) : Error("API already registered: " + name) {}
};

class EmptyIndex : public Error {
 public:
  EmptyIndex() : Error("corpus index is empty") {}
};

class IoError : public Error {
 public:
  using Error::Error;
};

class IngestError : public Error {
 public:
  IngestError(std::string file, std::string reason)
      : Error(file + ": " + reason), file_(std::move(file)), reason_(std::move(reason)) {}
  const std::string& file() const { return file_; }
  const std::string& reason() const { return reason_; }

 private:
  std::string file_;
  std::string reason_;
};

}  // namespace splice
