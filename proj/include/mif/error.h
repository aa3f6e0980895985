// Copyright 2026 The MIF Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MIF_ERROR_H_
#define MIF_ERROR_H_

#include <stdexcept>
#include <string>

namespace mif {

// Every failure raised by the library carries a category so the CLI can
// report a one-line, machine-parsable error.
enum class ErrorCategory {
  kIo,
  kConfig,
  kValidation,
  kComputation,
  kNumeric,
};

const char* CategoryName(ErrorCategory category);

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& message)
      : std::runtime_error(message), category_(category) {}

  ErrorCategory category() const { return category_; }

 private:
  ErrorCategory category_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& m) : Error(ErrorCategory::kIo, m) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& m)
      : Error(ErrorCategory::kConfig, m) {}
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& m)
      : Error(ErrorCategory::kValidation, m) {}
};

class ComputationError : public Error {
 public:
  explicit ComputationError(const std::string& m)
      : Error(ErrorCategory::kComputation, m) {}
};

class NumericError : public Error {
 public:
  explicit NumericError(const std::string& m)
      : Error(ErrorCategory::kNumeric, m) {}
};

}  // namespace mif

#endif  // MIF_ERROR_H_
