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

#include "medl/edl.hpp"

namespace medl {

struct IedlConfig {
  double lambda_fisher = 0.1;  // weight of the -log det I(alpha) regularizer

  void validate() const;
};

struct WarmupConfig {
  double lambda_max = 1.0;
  std::uint32_t ramp_len = 1;

  void validate() const;
};

// Fisher information of Dir(alpha) is diag(trigamma(alpha_n)) -
// trigamma(S) * ones. Its determinant follows from the rank-one update
//   det = prod_n trigamma(alpha_n) * (1 - trigamma(S) * sum_n 1/trigamma(alpha_n)).
double fisher_determinant(const DirichletParams& alpha);
double fisher_log_determinant(const DirichletParams& alpha);

// Per-voxel Fisher-weighted evidential loss
//   weight * ( sum_n [(y_n - p_n)^2 + p_n (1 - p_n) / (S + 1)] trigamma(alpha_n)
//              - lambda_fisher * log det I(alpha) )
// with p_n = alpha_n / S. The weight multiplies both terms.
double iedl_voxel_loss(const DirichletParams& alpha, std::span<const double> y_onehot,
                       double weight, const IedlConfig& cfg);

// d iedl_voxel_loss / d alpha, length K.
std::vector<double> iedl_voxel_grad(const DirichletParams& alpha,
                                    std::span<const double> y_onehot, double weight,
                                    const IedlConfig& cfg);

// Class probabilities for a set of voxels, voxel-major: p[v * K + c].
struct ClassProbabilities {
  std::size_t num_classes = 0;
  std::vector<double> values;

  std::size_t voxels() const noexcept { return num_classes ? values.size() / num_classes : 0; }
  double at(std::size_t v, std::size_t c) const noexcept { return values[v * num_classes + c]; }
};

inline constexpr double kDiceSmooth = 1e-5;
inline constexpr double kProbabilityClamp = 1e-12;

// Labels equal to kContentious are skipped. Optional voxel_weights (empty =
// all ones) scale each voxel's contribution.
//
// 1 - mean_c (2 sum_v w p_vc y_vc + s) / (sum_v w p_vc + sum_v w y_vc + s)
double dice_loss(const ClassProbabilities& prob, std::span<const std::uint16_t> labels,
                 std::span<const double> voxel_weights = {});
// d dice_loss / d p, same layout as prob.values.
std::vector<double> dice_loss_grad(const ClassProbabilities& prob,
                                   std::span<const std::uint16_t> labels,
                                   std::span<const double> voxel_weights = {});

// sum_v w_v (-log max(p_{v,y_v}, 1e-12)) / (number of non-contentious voxels)
double cross_entropy_loss(const ClassProbabilities& prob, std::span<const std::uint16_t> labels,
                          std::span<const double> voxel_weights = {});
std::vector<double> cross_entropy_grad(const ClassProbabilities& prob,
                                       std::span<const std::uint16_t> labels,
                                       std::span<const double> voxel_weights = {});

// Fixed-order pairwise summation; the result depends only on the input order.
double pairwise_sum(std::span<const double> values);

// sum_i sum_v omega_iv * loss_iv / V_i over samples i.
double aggregate_weighted_labeled(const std::vector<std::vector<double>>& per_voxel_losses,
                                  const std::vector<std::vector<double>>& weights);
// sum_j sum_v loss_jv / V'_j over samples j.
double aggregate_unlabeled_iedl(const std::vector<std::vector<double>>& per_voxel_losses);

// lambda_max * exp(-5 (1 - min(q, ramp_len) / ramp_len)^2)
double gaussian_warmup(std::uint32_t epoch, const WarmupConfig& cfg);

// Loss terms of one network.
struct LossParts {
  double labeled = 0.0;           // Dice + CE on labeled data
  double unlabeled = 0.0;         // Dice + CE against fused pseudo-labels
  double weighted_labeled = 0.0;  // curriculum-weighted labeled term
  double iedl_unlabeled = 0.0;    // Fisher evidential term on unlabeled data
};

struct Objective {
  LossParts parts;
  double lambda_gwu = 0.0;
  double total = 0.0;  // labeled + unlabeled + weighted_labeled + lambda_gwu * iedl_unlabeled
};

Objective total_objective(const LossParts& parts, std::uint32_t epoch, const WarmupConfig& warmup);

// Both networks' objectives for one step.
struct LossBreakdown {
  Objective first;
  Objective second;
  double total = 0.0;  // first.total + second.total
};

LossBreakdown combine_objectives(const Objective& first, const Objective& second);

}  // namespace medl
