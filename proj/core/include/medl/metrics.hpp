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
#include <optional>
#include <span>
#include <vector>

#include "medl/volume.hpp"

namespace medl {

class BinaryMask {
 public:
  BinaryMask() = default;
  explicit BinaryMask(Dims dims, Spacing spacing = {});
  BinaryMask(Dims dims, Spacing spacing, std::vector<std::uint8_t> bits);

  // Voxels of `labels` equal to `label`.
  static BinaryMask from_labels(const LabelMap& labels, std::uint16_t label);

  const Dims& dims() const noexcept { return dims_; }
  const Spacing& spacing() const noexcept { return spacing_; }
  std::size_t voxels() const noexcept { return dims_.voxels(); }
  std::size_t count() const noexcept;
  bool empty() const noexcept { return count() == 0; }

  bool operator[](std::size_t v) const noexcept { return bits_[v] != 0; }
  void set(std::size_t v, bool on) noexcept { bits_[v] = on ? 1 : 0; }
  bool at(std::size_t i, std::size_t j, std::size_t k) const noexcept {
    return bits_[dims_.index(i, j, k)] != 0;
  }

  const std::vector<std::uint8_t>& bits() const noexcept { return bits_; }

 private:
  Dims dims_{};
  Spacing spacing_{};
  std::vector<std::uint8_t> bits_;
};

struct MetricReport {
  double dice = 0.0;
  double jaccard = 0.0;
  std::optional<double> hd95;  // mm; empty when either mask is empty
  std::optional<double> asd;   // mm
};

// 2|P n G| / (|P| + |G|); 1 when both are empty.
double dice(const BinaryMask& pred, const BinaryMask& gt);
// |P n G| / |P u G|; 1 when both are empty.
double jaccard(const BinaryMask& pred, const BinaryMask& gt);

// Foreground voxels with at least one 6-connected neighbour that is
// background or outside the volume. Returned as linear indices, ascending.
std::vector<std::size_t> surface_voxels(const BinaryMask& mask);

enum class DistanceMethod {
  kAuto,               // brute force below 16^3 voxels, distance transform above
  kBruteForce,         // all surface pairs
  kDistanceTransform,  // exact separable squared Euclidean distance transform
};

struct SurfaceDistances {
  std::vector<double> pred_to_gt;  // one entry per pred surface voxel, mm
  std::vector<double> gt_to_pred;  // one entry per gt surface voxel, mm
};

// Nearest-surface Euclidean distances in mm using the masks' spacing. Throws
// kEmptyMask when either mask is empty and kShapeMismatch on dims mismatch.
SurfaceDistances surface_distances(const BinaryMask& pred, const BinaryMask& gt,
                                   DistanceMethod method = DistanceMethod::kAuto);

// Linear interpolation between order statistics at position q * (n - 1).
double percentile(std::vector<double> values, double q);

double hd95(const SurfaceDistances& d);
double asd(const SurfaceDistances& d);
double hd95(const BinaryMask& pred, const BinaryMask& gt);
double asd(const BinaryMask& pred, const BinaryMask& gt);

// All four metrics; distances are left empty when either mask is empty.
MetricReport evaluate(const BinaryMask& pred, const BinaryMask& gt);

}  // namespace medl
