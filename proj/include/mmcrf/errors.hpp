#ifndef MMCRF_ERRORS_HPP
#define MMCRF_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mmcrf {

// Base of every error thrown by the toolkit.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad arguments or malformed in-memory data.
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

// A file could not be opened, read, or written.
class IoError : public Error {
 public:
  using Error::Error;
};

// Invalid UTF-8 in input text.
class DecodeError : public Error {
 public:
  explicit DecodeError(const std::string& msg) : Error(msg) {}
  DecodeError(const std::string& msg, std::size_t line)
      : Error(msg + " (line " + std::to_string(line) + ")"), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_ = 0;
};

// Malformed template file or other structured text input.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& msg) : Error(msg) {}
  ParseError(const std::string& msg, std::size_t line)
      : Error(msg + " (line " + std::to_string(line) + ")"), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_ = 0;
};

// Inconsistent configuration (unknown preset, column out of range, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Corrupt or incompatible serialized data (model files, training files).
class FormatError : public Error {
 public:
  explicit FormatError(const std::string& msg) : Error(msg) {}
  FormatError(const std::string& msg, std::size_t line)
      : Error(msg + " (line " + std::to_string(line) + ")"), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_ = 0;
};

// Gold/prediction corpora that cannot be aligned line by line.
class AlignmentError : public Error {
 public:
  using Error::Error;
};

// Non-finite values during training or inference.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace mmcrf

#endif  // MMCRF_ERRORS_HPP
