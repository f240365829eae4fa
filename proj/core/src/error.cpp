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

#include "medl/error.hpp"

namespace medl {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kDomain: return "domain";
    case ErrorCode::kShapeMismatch: return "shape-mismatch";
    case ErrorCode::kEmptyMask: return "empty-mask";
    case ErrorCode::kIoFailure: return "io-failure";
    case ErrorCode::kCorruptHeader: return "corrupt-header";
    case ErrorCode::kSizeMismatch: return "size-mismatch";
    case ErrorCode::kKindMismatch: return "kind-mismatch";
    case ErrorCode::kSerialization: return "serialization";
  }
  return "unknown";
}

}  // namespace medl
