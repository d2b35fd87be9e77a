#pragma once

#include <stdexcept>
#include <string>

namespace gsg {

/// Coarse error classes. The numeric values double as CLI exit codes.
enum class ErrorClass : int {
  config = 2,
  numerical = 3,
  io = 4,
};

inline const char* to_string(ErrorClass c) {
  switch (c) {
    case ErrorClass::config: return "config";
    case ErrorClass::numerical: return "numerical";
    case ErrorClass::io: return "io";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorClass cls, const std::string& what) : std::runtime_error(what), cls_(cls) {}
  ErrorClass error_class() const noexcept { return cls_; }

 private:
  ErrorClass cls_;
};

/// j is negative or not a multiple of 1/2.
class InvalidSpinError : public Error {
 public:
  explicit InvalidSpinError(const std::string& what) : Error(ErrorClass::config, what) {}
};

/// An argument lies outside the domain of the operation.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorClass::config, what) {}
};

class DimensionMismatchError : public Error {
 public:
  explicit DimensionMismatchError(const std::string& what) : Error(ErrorClass::config, what) {}
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error(ErrorClass::numerical, what) {}
};

/// Fock-space truncation too small for the requested evolution.
class TruncationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Configuration problem; carries the JSON key path that triggered it.
class ConfigError : public Error {
 public:
  ConfigError(std::string key_path, const std::string& what)
      : Error(ErrorClass::config, key_path + ": " + what), key_path_(std::move(key_path)) {}
  const std::string& key_path() const noexcept { return key_path_; }

 private:
  std::string key_path_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorClass::io, what) {}
};

}  // namespace gsg
