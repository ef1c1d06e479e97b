// Copyright 2026 The xtalk Authors
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

namespace xtalk {

/// Malformed user input: circuits, device files, benchmark files, options.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// QASM front-end failure with a source position.
class ParseError : public InputError {
 public:
  enum class Kind { kSyntax, kUnsupported, kSemantic };

  ParseError(Kind kind, std::size_t line, std::size_t column,
             const std::string& message)
      : InputError(format(kind, line, column, message)),
        kind_(kind),
        line_(line),
        column_(column) {}

  Kind kind() const { return kind_; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  static std::string format(Kind kind, std::size_t line, std::size_t column,
                            const std::string& message) {
    const char* tag = kind == Kind::kSyntax        ? "syntax error"
                      : kind == Kind::kUnsupported ? "unsupported construct"
                                                   : "semantic error";
    return std::to_string(line) + ":" + std::to_string(column) + ": " + tag +
           ": " + message;
  }

  Kind kind_;
  std::size_t line_;
  std::size_t column_;
};

/// Device description that violates the schema or physical constraints.
class DeviceError : public InputError {
 public:
  using InputError::InputError;
};

/// A schedule or circuit that cannot run on the given device.
class MismatchError : public InputError {
 public:
  using InputError::InputError;
};

}  // namespace xtalk
