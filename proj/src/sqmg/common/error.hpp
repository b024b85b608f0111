// Copyright 2026 The SQMG Authors
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

namespace sqmg {

/// Failure categories. The numeric values are shared with the C API status
/// codes and the CLI exit codes, so they must not be renumbered.
enum class ErrorCode : int {
    kInvalidArgument = 1,
    kConfig = 2,
    kCapacity = 3,
    kNumerical = 4,
    kFormat = 5,
    kIo = 6,
    kUnsupported = 7,
    kInternal = 8,
};

const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
   public:
    Error(ErrorCode code, const std::string& message) : std::runtime_error(message), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

   private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

inline void require(bool condition, ErrorCode code, const std::string& message) {
    if (!condition) {
        throw Error(code, message);
    }
}

}  // namespace sqmg
