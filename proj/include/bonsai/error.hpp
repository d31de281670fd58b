// Copyright 2026 The Bonsai Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace bonsai {

enum class ErrorKind {
  kParameter,
  kRange,
  kDecode,
  kNotFound,
  kConflict,
  kCapacity,
  kProtocol,
  kInternal,
};

const char* to_string(ErrorKind kind);

// All library failures are reported as this exception; `kind()` lets callers
// (server, CLI) map them to status codes without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kParameter: return "parameter error";
    case ErrorKind::kRange: return "range error";
    case ErrorKind::kDecode: return "decode error";
    case ErrorKind::kNotFound: return "not found";
    case ErrorKind::kConflict: return "conflict";
    case ErrorKind::kCapacity: return "capacity error";
    case ErrorKind::kProtocol: return "protocol error";
    case ErrorKind::kInternal: return "internal error";
  }
  return "error";
}

}  // namespace bonsai
