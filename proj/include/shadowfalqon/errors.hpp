// Copyright 2026 The shadowfalqon Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace shadowfalqon {

/** Base class for every error raised by the library. */
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string &msg) : std::runtime_error(msg) {}
};

/** Malformed text input. Carries the 1-based line (or 0) and 0-based column. */
class ParseError : public Error {
 public:
  ParseError(const std::string &msg, std::size_t line, std::size_t column)
      : Error(msg), line_(line), column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/** Argument outside the mathematical domain of an operation. */
class DomainError : public Error {
 public:
  explicit DomainError(const std::string &msg) : Error(msg) {}
};

/** Problem too large for a dense or exhaustive routine. */
class SizeError : public Error {
 public:
  explicit SizeError(const std::string &msg) : Error(msg) {}
};

/** Measurement budget cannot cover the required measurement settings. */
class BudgetError : public Error {
 public:
  explicit BudgetError(const std::string &msg) : Error(msg) {}
};

/** Observable has a component the shadow ensemble never measures. */
class UnsupportedObservableError : public Error {
 public:
  explicit UnsupportedObservableError(const std::string &msg) : Error(msg) {}
};

/** Least-squares design matrix is degenerate. */
class FitError : public Error {
 public:
  explicit FitError(const std::string &msg) : Error(msg) {}
};

/** A geometric budget schedule hit its ceiling without meeting the criterion. */
class ExhaustionError : public Error {
 public:
  explicit ExhaustionError(const std::string &msg) : Error(msg) {}
};

/** File could not be opened, read or written. */
class IoError : public Error {
 public:
  IoError(const std::string &msg, std::string path)
      : Error(msg + ": " + path), path_(std::move(path)) {}

  const std::string &path() const { return path_; }

 private:
  std::string path_;
};

} // namespace shadowfalqon
