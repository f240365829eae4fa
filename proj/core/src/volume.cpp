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

#include "medl/volume.hpp"

#include <string>

#include "medl/error.hpp"

namespace medl {
namespace {

void check_payload(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    fail(ErrorCode::kShapeMismatch, std::string(what) + " payload has " + std::to_string(got) +
                                        " values, expected " + std::to_string(want));
  }
}

}  // namespace

EvidenceMap::EvidenceMap(Dims dims, std::size_t num_classes, Spacing spacing)
    : EvidenceMap(dims, num_classes, spacing,
                  std::vector<float>(dims.voxels() * num_classes, 0.0f)) {}

EvidenceMap::EvidenceMap(Dims dims, std::size_t num_classes, Spacing spacing,
                         std::vector<float> data)
    : dims_(dims), spacing_(spacing), num_classes_(num_classes), data_(std::move(data)) {
  if (num_classes_ < 2) fail(ErrorCode::kDomain, "evidence map needs at least 2 classes");
  check_payload(data_.size(), dims_.voxels() * num_classes_, "evidence");
}

EvidenceVector EvidenceMap::voxel(std::size_t v) const {
  std::vector<double> e(num_classes_);
  for (std::size_t c = 0; c < num_classes_; ++c) e[c] = at(c, v);
  return EvidenceVector(std::move(e));
}

LabelMap::LabelMap(Dims dims, std::size_t num_classes, Spacing spacing)
    : LabelMap(dims, num_classes, spacing, std::vector<std::uint16_t>(dims.voxels(), 0)) {}

LabelMap::LabelMap(Dims dims, std::size_t num_classes, Spacing spacing,
                   std::vector<std::uint16_t> labels)
    : dims_(dims), spacing_(spacing), num_classes_(num_classes), labels_(std::move(labels)) {
  check_payload(labels_.size(), dims_.voxels(), "label");
}

ScalarField::ScalarField(Dims dims, Spacing spacing)
    : ScalarField(dims, spacing, std::vector<float>(dims.voxels(), 0.0f)) {}

ScalarField::ScalarField(Dims dims, Spacing spacing, std::vector<float> values)
    : dims_(dims), spacing_(spacing), values_(std::move(values)) {
  check_payload(values_.size(), dims_.voxels(), "scalar field");
}

}  // namespace medl
