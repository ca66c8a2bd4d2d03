#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace anchortrack {

// Base of every error the library raises. Each subclass maps to one failure
// mode a caller may want to distinguish (the CLI maps them to exit codes).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class InitializationFailure : public Error {
 public:
  using Error::Error;
};

class NoVotes : public Error {
 public:
  NoVotes() : Error("score matrix holds no votes") {}
};

class SizeMismatch : public Error {
 public:
  using Error::Error;
};

class LengthMismatch : public Error {
 public:
  LengthMismatch(std::size_t results, std::size_t truth)
      : Error("length mismatch: " + std::to_string(results) + " results vs " +
              std::to_string(truth) + " ground-truth boxes") {}
};

class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : Error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class MissingFrames : public Error {
 public:
  using Error::Error;
};

class SpecInvalid : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace anchortrack
