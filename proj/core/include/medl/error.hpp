// Copyright 2026 The MEDL Authors.
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
#include <string_view>

namespace medl {

// Every failure raised by the library carries one of these codes. The CLI
// maps them onto process exit codes.
enum class ErrorCode {
  kDomain,          // argument outside the mathematical domain
  kShapeMismatch,   // dims, K or vector lengths disagree
  kEmptyMask,       // surface distances requested for an empty mask
  kIoFailure,       // open/read/write failed
  kCorruptHeader,   // bad magic, version or enum value
  kSizeMismatch,    // payload shorter or longer than the header implies
  kKindMismatch,    // kind/dtype combination invalid or not the one requested
  kSerialization,   // value cannot be serialized (e.g. NaN in CSV export)
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace medl
