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

#include "medl/curriculum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "medl/error.hpp"

namespace medl {

void CurriculumConfig::validate() const {
  if (!(xi > 0.0) || !std::isfinite(xi)) fail(ErrorCode::kDomain, "xi must be finite and > 0");
  if (total_epochs < 1) fail(ErrorCode::kDomain, "total_epochs must be >= 1");
}

std::vector<std::uint32_t> rank_voxels(std::span<const double> uncertainty, RankOrder order) {
  for (double u : uncertainty) {
    if (std::isnan(u)) fail(ErrorCode::kDomain, "uncertainty contains NaN");
  }
  std::vector<std::uint32_t> order_idx(uncertainty.size());
  std::iota(order_idx.begin(), order_idx.end(), 0u);
  if (order == RankOrder::kAscendingUncertainty) {
    std::stable_sort(order_idx.begin(), order_idx.end(),
                     [&](std::uint32_t x, std::uint32_t y) { return uncertainty[x] < uncertainty[y]; });
  } else {
    std::stable_sort(order_idx.begin(), order_idx.end(),
                     [&](std::uint32_t x, std::uint32_t y) { return uncertainty[x] > uncertainty[y]; });
  }
  std::vector<std::uint32_t> ranks(uncertainty.size());
  for (std::size_t r = 0; r < order_idx.size(); ++r) {
    ranks[order_idx[r]] = static_cast<std::uint32_t>(r + 1);
  }
  return ranks;
}

double omega(std::uint32_t epoch, std::uint32_t rank, std::size_t num_voxels,
             const CurriculumConfig& cfg) {
  if (epoch < 1 || epoch > cfg.total_epochs) {
    fail(ErrorCode::kDomain, "epoch " + std::to_string(epoch) + " outside 1.." +
                                 std::to_string(cfg.total_epochs));
  }
  if (rank < 1 || rank > num_voxels) {
    fail(ErrorCode::kDomain,
         "rank " + std::to_string(rank) + " outside 1.." + std::to_string(num_voxels));
  }
  const double psi = 2.0 * rank / static_cast<double>(num_voxels) - 1.0;
  const double zeta = 2.0 * epoch / static_cast<double>(cfg.total_epochs) - 1.0;
  return cfg.xi * std::tanh(psi * zeta) + 1.0;
}

CurriculumWeights curriculum_weights(std::span<const double> uncertainty, std::uint32_t epoch,
                                     const CurriculumConfig& cfg) {
  cfg.validate();
  const auto ranks = rank_voxels(uncertainty, cfg.order);
  CurriculumWeights out{std::vector<double>(ranks.size()), epoch};
  for (std::size_t v = 0; v < ranks.size(); ++v) {
    out.weights[v] = omega(epoch, ranks[v], ranks.size(), cfg);
  }
  return out;
}

ScalarField curriculum_weights(const ScalarField& uncertainty, std::uint32_t epoch,
                               const CurriculumConfig& cfg) {
  const std::vector<double> u(uncertainty.values().begin(), uncertainty.values().end());
  const CurriculumWeights w = curriculum_weights(u, epoch, cfg);
  ScalarField out(uncertainty.dims(), uncertainty.spacing());
  for (std::size_t v = 0; v < w.weights.size(); ++v) out[v] = static_cast<float>(w.weights[v]);
  return out;
}

}  // namespace medl
