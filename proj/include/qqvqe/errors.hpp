// Copyright 2026 The qqvqe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace qqvqe {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Bad user input: malformed files, out-of-range parameters, unknown keys.
/// The CLI maps these to exit code 1; every other Error maps to 2.
class ValidationError : public Error {
   public:
    using Error::Error;
};

class ParseError : public ValidationError {
   public:
    ParseError(const std::string &msg, std::size_t row, std::size_t column)
        : ValidationError(msg + " (row " + std::to_string(row) + ", column " + std::to_string(column) + ")"),
          row_(row),
          column_(column) {
    }
    std::size_t row() const noexcept {
        return row_;
    }
    std::size_t column() const noexcept {
        return column_;
    }

   private:
    std::size_t row_;
    std::size_t column_;
};

class OutOfRange : public ValidationError {
   public:
    using ValidationError::ValidationError;
};

class UnsupportedBasis : public ValidationError {
   public:
    using ValidationError::ValidationError;
};

class UnknownDistance : public ValidationError {
   public:
    using ValidationError::ValidationError;
};

class NotHermitian : public Error {
   public:
    using Error::Error;
};

class MissingEstimate : public Error {
   public:
    using Error::Error;
};

/// Raised when a confusion matrix cannot be inverted (maximally depolarizing
/// or completely dephasing noise).
class SingularGamma : public Error {
   public:
    using Error::Error;
};

}  // namespace qqvqe
