// Copyright 2026 The docbot Authors
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

#include <stdexcept>
#include <string>

namespace docbot {

// Broad failure classes. The CLI maps these onto process exit codes and the
// HTTP layer onto machine-readable error codes.
enum class ErrorKind {
  kUsage,
  kConfig,
  kData,
  kModel,
  kShape,
  kTraining,
  kValidation,
  kSession,
  kNotFound,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string &what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

struct UsageError : Error {
  explicit UsageError(const std::string &w) : Error(ErrorKind::kUsage, w) {}
};
struct ConfigError : Error {
  explicit ConfigError(const std::string &w) : Error(ErrorKind::kConfig, w) {}
};
struct DataError : Error {
  explicit DataError(const std::string &w) : Error(ErrorKind::kData, w) {}
};
struct ModelError : Error {
  explicit ModelError(const std::string &w) : Error(ErrorKind::kModel, w) {}
};
struct ShapeError : Error {
  explicit ShapeError(const std::string &w) : Error(ErrorKind::kShape, w) {}
};
struct TrainingError : Error {
  explicit TrainingError(const std::string &w)
      : Error(ErrorKind::kTraining, w) {}
};
struct ValidationError : Error {
  explicit ValidationError(const std::string &w)
      : Error(ErrorKind::kValidation, w) {}
};
struct SessionError : Error {
  explicit SessionError(const std::string &w)
      : Error(ErrorKind::kSession, w) {}
};
struct NotFoundError : Error {
  explicit NotFoundError(const std::string &w)
      : Error(ErrorKind::kNotFound, w) {}
};

}  // namespace docbot
