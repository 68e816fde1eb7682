// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace slf {

/// Base error with a stable machine-parsable category string. The CLI prints
/// `slf: error: <category>: <message>` on a single line and exits nonzero.
class Error : public std::runtime_error {
 public:
  Error(std::string category, const std::string& message)
      : std::runtime_error(message), category_(std::move(category)) {}
  const std::string& category() const noexcept { return category_; }

 private:
  std::string category_;
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& m) : Error("invalid-argument", m) {}
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& m) : Error("numerical-failure", m) {}
};

class OutOfBounds : public Error {
 public:
  explicit OutOfBounds(const std::string& m) : Error("out-of-bounds", m) {}
};

class CorruptStream : public Error {
 public:
  explicit CorruptStream(const std::string& m) : Error("corrupt-stream", m) {}
};

class UnsupportedStream : public Error {
 public:
  explicit UnsupportedStream(const std::string& m) : Error("unsupported-stream", m) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& m) : Error("io-error", m) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& m) : Error("config-error", m) {}
};

}  // namespace slf
