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

#include <cstddef>
#include <cstdint>
#include <vector>

#include "medl/edl.hpp"

namespace medl {

// Voxel grid extent. Linear index is C row order: (i * w + j) * l + k.
struct Dims {
  std::uint32_t h = 0;
  std::uint32_t w = 0;
  std::uint32_t l = 0;

  std::size_t voxels() const noexcept {
    return static_cast<std::size_t>(h) * w * l;
  }
  std::size_t index(std::size_t i, std::size_t j, std::size_t k) const noexcept {
    return (i * w + j) * l + k;
  }
  bool operator==(const Dims&) const = default;
};

// Physical voxel size in mm along (h, w, l).
struct Spacing {
  float x = 1.0f;
  float y = 1.0f;
  float z = 1.0f;

  bool operator==(const Spacing&) const = default;
};

// Pseudo-label value for voxels whose reliability fell below threshold.
inline constexpr std::uint16_t kContentious = 65535;

// Per-class evidence for a whole volume, channels-major:
// data[c * dims.voxels() + v].
class EvidenceMap {
 public:
  EvidenceMap() = default;
  EvidenceMap(Dims dims, std::size_t num_classes, Spacing spacing = {});
  EvidenceMap(Dims dims, std::size_t num_classes, Spacing spacing, std::vector<float> data);

  const Dims& dims() const noexcept { return dims_; }
  const Spacing& spacing() const noexcept { return spacing_; }
  std::size_t num_classes() const noexcept { return num_classes_; }
  std::size_t voxels() const noexcept { return dims_.voxels(); }

  float at(std::size_t c, std::size_t v) const noexcept { return data_[c * voxels() + v]; }
  float& at(std::size_t c, std::size_t v) noexcept { return data_[c * voxels() + v]; }

  // Evidence of one voxel across classes. Throws kDomain on negative or
  // non-finite entries.
  EvidenceVector voxel(std::size_t v) const;

  const std::vector<float>& data() const noexcept { return data_; }
  std::vector<float>& data() noexcept { return data_; }

 private:
  Dims dims_{};
  Spacing spacing_{};
  std::size_t num_classes_ = 0;
  std::vector<float> data_;
};

class LabelMap {
 public:
  LabelMap() = default;
  LabelMap(Dims dims, std::size_t num_classes, Spacing spacing = {});
  LabelMap(Dims dims, std::size_t num_classes, Spacing spacing, std::vector<std::uint16_t> labels);

  const Dims& dims() const noexcept { return dims_; }
  const Spacing& spacing() const noexcept { return spacing_; }
  std::size_t num_classes() const noexcept { return num_classes_; }
  std::size_t voxels() const noexcept { return dims_.voxels(); }

  std::uint16_t operator[](std::size_t v) const noexcept { return labels_[v]; }
  std::uint16_t& operator[](std::size_t v) noexcept { return labels_[v]; }

  const std::vector<std::uint16_t>& labels() const noexcept { return labels_; }
  std::vector<std::uint16_t>& labels() noexcept { return labels_; }

 private:
  Dims dims_{};
  Spacing spacing_{};
  std::size_t num_classes_ = 0;
  std::vector<std::uint16_t> labels_;
};

// One real value per voxel (reliability, uncertainty, curriculum weight).
class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(Dims dims, Spacing spacing = {});
  ScalarField(Dims dims, Spacing spacing, std::vector<float> values);

  const Dims& dims() const noexcept { return dims_; }
  const Spacing& spacing() const noexcept { return spacing_; }
  std::size_t voxels() const noexcept { return dims_.voxels(); }

  float operator[](std::size_t v) const noexcept { return values_[v]; }
  float& operator[](std::size_t v) noexcept { return values_[v]; }

  const std::vector<float>& values() const noexcept { return values_; }
  std::vector<float>& values() noexcept { return values_; }

 private:
  Dims dims_{};
  Spacing spacing_{};
  std::vector<float> values_;
};

}  // namespace medl
