#pragma once

#include <stdexcept>
#include <string>

namespace wrinkle {

// Broad failure classes. The CLI maps these onto process exit codes.
enum class ErrorKind { config, data, io };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Invalid parameters or configuration.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorKind::config, what) {}
};

// Malformed or inconsistent input data.
class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error(ErrorKind::data, what) {}
};

class ParseError : public DataError {
 public:
  ParseError(const std::string& source, int line, const std::string& what)
      : DataError(source + ":" + std::to_string(line) + ": " + what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

class TopologyError : public DataError {
 public:
  explicit TopologyError(const std::string& what) : DataError(what) {}
};

class DimensionError : public DataError {
 public:
  explicit DimensionError(const std::string& what) : DataError(what) {}
};

class UnsupportedFormatError : public DataError {
 public:
  explicit UnsupportedFormatError(const std::string& what) : DataError(what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::io, what) {}
};

}  // namespace wrinkle
