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
#include <span>
#include <vector>

#include "medl/volume.hpp"

namespace medl {

enum class RankOrder {
  kAscendingUncertainty,   // rank 1 = least uncertain voxel (easy first)
  kDescendingUncertainty,  // rank 1 = most uncertain voxel
};

struct CurriculumConfig {
  double xi = 1.0;  // amplitude of the weight swing around 1
  std::uint32_t total_epochs = 1;
  RankOrder order = RankOrder::kAscendingUncertainty;

  void validate() const;
};

// Ranks h(v) in 1..V. Equal uncertainties keep linear-index order in both
// directions. Throws kDomain on NaN.
std::vector<std::uint32_t> rank_voxels(std::span<const double> uncertainty, RankOrder order);

// xi * tanh((2h/V - 1) * (2q/Q - 1)) + 1 for epoch q in 1..Q and rank h in
// 1..V.
double omega(std::uint32_t epoch, std::uint32_t rank, std::size_t num_voxels,
             const CurriculumConfig& cfg);

struct CurriculumWeights {
  std::vector<double> weights;
  std::uint32_t epoch = 0;
};

// Ranks the given uncertainties (recomputed on every call) and evaluates omega
// for each voxel.
CurriculumWeights curriculum_weights(std::span<const double> uncertainty, std::uint32_t epoch,
                                     const CurriculumConfig& cfg);
ScalarField curriculum_weights(const ScalarField& uncertainty, std::uint32_t epoch,
                               const CurriculumConfig& cfg);

}  // namespace medl
