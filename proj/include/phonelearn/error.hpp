// include/phonelearn/error.hpp

// Copyright 2026  phonelearn authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef PHONELEARN_ERROR_HPP_
#define PHONELEARN_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace phonelearn {

/// Base of every error thrown by the library. `kind()` is a short stable tag
/// ("parse", "inventory", ...) used by the CLI for its machine-readable error line.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string &what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string &kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string &what, std::size_t line = 0)
      : Error("parse", line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  /// 1-based line number, 0 when not tied to a line.
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class InventoryError : public Error {
 public:
  explicit InventoryError(const std::string &what) : Error("inventory", what) {}
};

class OrderingError : public Error {
 public:
  explicit OrderingError(const std::string &what) : Error("ordering", what) {}
};

class ArgumentError : public Error {
 public:
  explicit ArgumentError(const std::string &what) : Error("argument", what) {}
};

class RangeError : public Error {
 public:
  explicit RangeError(const std::string &what) : Error("range", what) {}
};

class DataError : public Error {
 public:
  explicit DataError(const std::string &what) : Error("data", what) {}
};

class UndefinedResultError : public Error {
 public:
  explicit UndefinedResultError(const std::string &what) : Error("undefined", what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string &what) : Error("io", what) {}
};

/// Weight update produced a non-finite value.
class NumericError : public Error {
 public:
  NumericError(const std::string &what, std::size_t trial_index)
      : Error("numeric", what + " (trial " + std::to_string(trial_index) + ")"),
        trial_index_(trial_index) {}
  std::size_t trial_index() const noexcept { return trial_index_; }

 private:
  std::size_t trial_index_;
};

}  // namespace phonelearn

#endif  // PHONELEARN_ERROR_HPP_
