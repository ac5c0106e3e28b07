// Copyright 2026 The guardlab Authors
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

#ifndef GUARDLAB_ERROR_HPP_
#define GUARDLAB_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace guardlab {

enum class ErrorKind {
  kIo,
  kParseError,
  kConfigError,
  kModalityMismatch,
  kOrphanResponseLabel,
  kMissingResponseLabel,
  kBadImage,
  kValidationFailed,
  kInsufficientSamples,
  kTaskMismatch,
  kGroupTooSmall,
  kLengthMismatch,
  kEmptyInput,
  kStepOutOfRange,
  kStateError,
  kTransport,
  kTimeout,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace guardlab

#endif  // GUARDLAB_ERROR_HPP_
