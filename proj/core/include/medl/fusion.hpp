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
#include <vector>

#include "medl/edl.hpp"
#include "medl/volume.hpp"

namespace medl {

enum class FusionRule {
  kCaef,  // class-aware: singleton/multi-set interaction scaled by 1 / (1 + K)
  kEf,    // conventional: interaction coefficient 1
};

struct FusionConfig {
  FusionRule rule = FusionRule::kCaef;
  double lambda_own = 0.5;    // weight of a network's own uncertainty
  double lambda_fused = 0.5;  // weight of the fused uncertainty

  // Throws kDomain unless both weights lie in [0, 1] and sum to 1.
  void validate() const;
};

// Combines two GPMAs of equal K. Raw masses
//   m_n  = a_n b_n + c (a_n b_K + b_n a_K)
//   m_K  = a_K b_K
// are divided by their total so the result is normalized. c = 1 / (1 + K)
// for CAEF and 1 for EF. Symmetric in (a, b).
Gpma caef_fuse(const Gpma& a, const Gpma& b);
Gpma ef_fuse(const Gpma& a, const Gpma& b);
Gpma fuse(const Gpma& a, const Gpma& b, FusionRule rule);

// exp(m_K * sum_n m_n log2 m_n), with 0 log 0 = 0. Lies in (0, 1].
double reliability(const Gpma& fused);

// lambda_own * own + lambda_fused * fused.
double blend_uncertainty(double own_uncertainty, double fused_uncertainty,
                         const FusionConfig& cfg);

struct FusedVoxel {
  Gpma masses;
  double reliability = 1.0;
  std::uint16_t label = kContentious;
};

class FusedLabelMap {
 public:
  FusedLabelMap(Dims dims, std::size_t num_classes, Spacing spacing,
                std::vector<FusedVoxel> voxels);

  const Dims& dims() const noexcept { return dims_; }
  const Spacing& spacing() const noexcept { return spacing_; }
  std::size_t num_classes() const noexcept { return num_classes_; }
  const std::vector<FusedVoxel>& voxels() const noexcept { return voxels_; }
  const FusedVoxel& operator[](std::size_t v) const noexcept { return voxels_[v]; }

  LabelMap labels() const;
  ScalarField reliability_field() const;
  ScalarField uncertainty_field() const;  // fused multi-set mass

 private:
  Dims dims_;
  Spacing spacing_;
  std::size_t num_classes_;
  std::vector<FusedVoxel> voxels_;
};

// Voxel-wise: evidence -> belief -> GPMA for both sources, fuse with
// cfg.rule, score reliability. A voxel keeps its argmax label (lowest index
// on ties) when reliability >= threshold and is marked kContentious
// otherwise. Output does not depend on `threads`.
FusedLabelMap fuse_volumes(const EvidenceMap& a, const EvidenceMap& b, const FusionConfig& cfg,
                           double reliability_threshold,
                           std::optional<std::size_t> threads = std::nullopt);

}  // namespace medl
