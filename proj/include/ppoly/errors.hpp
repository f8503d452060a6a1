#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ppoly {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DivisionByZero : public Error {
 public:
  using Error::Error;
};

/// Exact polynomial division left a nonzero remainder.
class NotDivisible : public Error {
 public:
  using Error::Error;
};

/// A field or domain exceeds the configured size cap.
class ResourceLimit : public Error {
 public:
  using Error::Error;
};

/// A construction hypothesis does not hold; the message names the clause.
class PreconditionFailed : public Error {
 public:
  using Error::Error;
};

/// A checked result contradicted what the construction guarantees.
class InternalInconsistency : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

  /// 1-based line number, 0 when not tied to a line.
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Configuration rejected; carries every problem found, not just the first.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> problems)
      : Error(join(problems)), problems_(std::move(problems)) {}

  const std::vector<std::string>& problems() const noexcept { return problems_; }

 private:
  static std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (const auto& item : items) {
      if (!out.empty()) out += "; ";
      out += item;
    }
    return out;
  }

  std::vector<std::string> problems_;
};

}  // namespace ppoly
