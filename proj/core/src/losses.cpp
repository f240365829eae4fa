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

#include "medl/losses.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "medl/error.hpp"
#include "medl/special_functions.hpp"
#include "medl/volume.hpp"

namespace medl {
namespace {

void check_iedl_inputs(const DirichletParams& alpha, std::span<const double> y, double weight) {
  if (alpha.num_classes() < 2) fail(ErrorCode::kDomain, "Dirichlet needs at least 2 classes");
  if (y.size() != alpha.num_classes()) {
    fail(ErrorCode::kShapeMismatch, "one-hot target length differs from class count");
  }
  for (double a : alpha.alpha) {
    if (!(a >= 1.0) || !std::isfinite(a)) {
      fail(ErrorCode::kDomain, "alpha must be finite and >= 1, got " + std::to_string(a));
    }
  }
  int ones = 0;
  for (double v : y) {
    if (v == 1.0) {
      ++ones;
    } else if (v != 0.0) {
      fail(ErrorCode::kDomain, "target is not one-hot");
    }
  }
  if (ones != 1) fail(ErrorCode::kDomain, "target is not one-hot");
  if (!(weight > 0.0) || !std::isfinite(weight)) {
    fail(ErrorCode::kDomain, "voxel weight must be finite and > 0");
  }
}

// 1 - trigamma(S) * sum_n 1/trigamma(alpha_n); positive for a valid Dirichlet.
struct FisherFactors {
  std::vector<double> trigammas;
  double inverse_sum = 0.0;
  double trigamma_strength = 0.0;
  double correction = 0.0;
};

FisherFactors fisher_factors(const DirichletParams& alpha) {
  FisherFactors f;
  f.trigammas.reserve(alpha.num_classes());
  for (double a : alpha.alpha) {
    const double t = trigamma(a);
    f.trigammas.push_back(t);
    f.inverse_sum += 1.0 / t;
  }
  f.trigamma_strength = trigamma(alpha.strength);
  f.correction = 1.0 - f.trigamma_strength * f.inverse_sum;
  return f;
}

void check_labels(const ClassProbabilities& prob, std::span<const std::uint16_t> labels,
                  std::span<const double> weights) {
  if (prob.num_classes < 2 || prob.values.size() % prob.num_classes != 0) {
    fail(ErrorCode::kShapeMismatch, "probability field is not a multiple of the class count");
  }
  if (labels.size() != prob.voxels()) {
    fail(ErrorCode::kShapeMismatch, "label count differs from probability voxel count");
  }
  if (!weights.empty() && weights.size() != labels.size()) {
    fail(ErrorCode::kShapeMismatch, "voxel weight count differs from label count");
  }
  for (std::uint16_t y : labels) {
    if (y != kContentious && y >= prob.num_classes) {
      fail(ErrorCode::kDomain, "label " + std::to_string(y) + " outside class range");
    }
  }
}

struct DiceTerms {
  std::vector<double> intersection, predicted, target;
};

DiceTerms dice_terms(const ClassProbabilities& prob, std::span<const std::uint16_t> labels,
                     std::span<const double> weights) {
  const std::size_t k = prob.num_classes;
  DiceTerms t{std::vector<double>(k), std::vector<double>(k), std::vector<double>(k)};
  for (std::size_t v = 0; v < labels.size(); ++v) {
    if (labels[v] == kContentious) continue;
    const double w = weights.empty() ? 1.0 : weights[v];
    for (std::size_t c = 0; c < k; ++c) {
      const double p = prob.at(v, c);
      const double y = labels[v] == c ? 1.0 : 0.0;
      t.intersection[c] += w * p * y;
      t.predicted[c] += w * p;
      t.target[c] += w * y;
    }
  }
  return t;
}

std::size_t labeled_count(std::span<const std::uint16_t> labels) {
  return static_cast<std::size_t>(
      std::count_if(labels.begin(), labels.end(), [](auto y) { return y != kContentious; }));
}

}  // namespace

void IedlConfig::validate() const {
  if (!(lambda_fisher >= 0.0) || !std::isfinite(lambda_fisher)) {
    fail(ErrorCode::kDomain, "lambda_fisher must be finite and >= 0");
  }
}

void WarmupConfig::validate() const {
  if (!(lambda_max >= 0.0) || !std::isfinite(lambda_max)) {
    fail(ErrorCode::kDomain, "lambda_max must be finite and >= 0");
  }
  if (ramp_len == 0) fail(ErrorCode::kDomain, "ramp_len must be > 0");
}

double fisher_determinant(const DirichletParams& alpha) {
  const FisherFactors f = fisher_factors(alpha);
  double det = f.correction;
  for (double t : f.trigammas) det *= t;
  return det;
}

double fisher_log_determinant(const DirichletParams& alpha) {
  const FisherFactors f = fisher_factors(alpha);
  double log_det = std::log1p(-f.trigamma_strength * f.inverse_sum);
  for (double t : f.trigammas) log_det += std::log(t);
  return log_det;
}

double iedl_voxel_loss(const DirichletParams& alpha, std::span<const double> y_onehot,
                       double weight, const IedlConfig& cfg) {
  check_iedl_inputs(alpha, y_onehot, weight);
  cfg.validate();
  const double s = alpha.strength;
  double fit = 0.0;
  for (std::size_t n = 0; n < alpha.num_classes(); ++n) {
    const double p = alpha.alpha[n] / s;
    const double err = y_onehot[n] - p;
    const double var = alpha.alpha[n] * (s - alpha.alpha[n]) / (s * s * (s + 1.0));
    fit += (err * err + var) * trigamma(alpha.alpha[n]);
  }
  const double reg = cfg.lambda_fisher > 0.0 ? cfg.lambda_fisher * fisher_log_determinant(alpha)
                                             : 0.0;
  return weight * (fit - reg);
}

std::vector<double> iedl_voxel_grad(const DirichletParams& alpha,
                                    std::span<const double> y_onehot, double weight,
                                    const IedlConfig& cfg) {
  check_iedl_inputs(alpha, y_onehot, weight);
  cfg.validate();
  const std::size_t k = alpha.num_classes();
  const double s = alpha.strength;
  const double s1 = s + 1.0;

  // f_n = (y_n - p_n)^2 + p_n (1 - p_n) / (S + 1); p_n depends on every alpha
  // through S, so d f_n / d alpha_k = a_n (delta_nk - p_n) / S - p_n (1 - p_n) / (S+1)^2
  // with a_n = -2 (y_n - p_n) + (1 - 2 p_n) / (S + 1).
  std::vector<double> tri(k), g(k), fit(k);
  double g_dot_p = 0.0;
  double var_sum = 0.0;
  for (std::size_t n = 0; n < k; ++n) {
    const double p = alpha.alpha[n] / s;
    tri[n] = trigamma(alpha.alpha[n]);
    const double err = y_onehot[n] - p;
    fit[n] = err * err + p * (1.0 - p) / s1;
    g[n] = (-2.0 * err + (1.0 - 2.0 * p) / s1) * tri[n] / s;
    g_dot_p += g[n] * p;
    var_sum += tri[n] * p * (1.0 - p);
  }
  const double shared = -g_dot_p - var_sum / (s1 * s1);

  std::vector<double> grad(k);
  for (std::size_t n = 0; n < k; ++n) {
    grad[n] = g[n] + shared + fit[n] * tetragamma(alpha.alpha[n]);
  }

  if (cfg.lambda_fisher > 0.0) {
    const FisherFactors f = fisher_factors(alpha);
    const double tetra_strength = tetragamma(s);
    for (std::size_t n = 0; n < k; ++n) {
      const double tetra = tetragamma(alpha.alpha[n]);
      const double d_correction =
          -tetra_strength * f.inverse_sum + f.trigamma_strength * tetra / (tri[n] * tri[n]);
      const double d_log_det = tetra / tri[n] + d_correction / f.correction;
      grad[n] -= cfg.lambda_fisher * d_log_det;
    }
  }
  for (double& x : grad) x *= weight;
  return grad;
}

double dice_loss(const ClassProbabilities& prob, std::span<const std::uint16_t> labels,
                 std::span<const double> voxel_weights) {
  check_labels(prob, labels, voxel_weights);
  const DiceTerms t = dice_terms(prob, labels, voxel_weights);
  double score = 0.0;
  for (std::size_t c = 0; c < prob.num_classes; ++c) {
    score += (2.0 * t.intersection[c] + kDiceSmooth) /
             (t.predicted[c] + t.target[c] + kDiceSmooth);
  }
  return 1.0 - score / static_cast<double>(prob.num_classes);
}

std::vector<double> dice_loss_grad(const ClassProbabilities& prob,
                                   std::span<const std::uint16_t> labels,
                                   std::span<const double> voxel_weights) {
  check_labels(prob, labels, voxel_weights);
  const std::size_t k = prob.num_classes;
  const DiceTerms t = dice_terms(prob, labels, voxel_weights);
  std::vector<double> grad(prob.values.size(), 0.0);
  for (std::size_t v = 0; v < labels.size(); ++v) {
    if (labels[v] == kContentious) continue;
    const double w = voxel_weights.empty() ? 1.0 : voxel_weights[v];
    for (std::size_t c = 0; c < k; ++c) {
      const double num = 2.0 * t.intersection[c] + kDiceSmooth;
      const double den = t.predicted[c] + t.target[c] + kDiceSmooth;
      const double y = labels[v] == c ? 1.0 : 0.0;
      grad[v * k + c] = -w * (2.0 * y * den - num) / (den * den * static_cast<double>(k));
    }
  }
  return grad;
}

double cross_entropy_loss(const ClassProbabilities& prob, std::span<const std::uint16_t> labels,
                          std::span<const double> voxel_weights) {
  check_labels(prob, labels, voxel_weights);
  const std::size_t count = labeled_count(labels);
  if (count == 0) return 0.0;
  std::vector<double> terms;
  terms.reserve(count);
  for (std::size_t v = 0; v < labels.size(); ++v) {
    if (labels[v] == kContentious) continue;
    const double w = voxel_weights.empty() ? 1.0 : voxel_weights[v];
    const double p = std::clamp(prob.at(v, labels[v]), kProbabilityClamp, 1.0);
    terms.push_back(-w * std::log(p));
  }
  return pairwise_sum(terms) / static_cast<double>(count);
}

std::vector<double> cross_entropy_grad(const ClassProbabilities& prob,
                                       std::span<const std::uint16_t> labels,
                                       std::span<const double> voxel_weights) {
  check_labels(prob, labels, voxel_weights);
  std::vector<double> grad(prob.values.size(), 0.0);
  const std::size_t count = labeled_count(labels);
  if (count == 0) return grad;
  for (std::size_t v = 0; v < labels.size(); ++v) {
    if (labels[v] == kContentious) continue;
    const double w = voxel_weights.empty() ? 1.0 : voxel_weights[v];
    const double p = prob.at(v, labels[v]);
    if (p > kProbabilityClamp) {
      grad[v * prob.num_classes + labels[v]] = -w / (p * static_cast<double>(count));
    }
  }
  return grad;
}

double pairwise_sum(std::span<const double> values) {
  constexpr std::size_t kLeaf = 16;
  if (values.size() <= kLeaf) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

double aggregate_weighted_labeled(const std::vector<std::vector<double>>& per_voxel_losses,
                                  const std::vector<std::vector<double>>& weights) {
  if (per_voxel_losses.size() != weights.size()) {
    fail(ErrorCode::kShapeMismatch, "loss and weight sample counts differ");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < per_voxel_losses.size(); ++i) {
    const auto& losses = per_voxel_losses[i];
    if (losses.size() != weights[i].size()) {
      fail(ErrorCode::kShapeMismatch, "loss and weight lengths differ in sample " + std::to_string(i));
    }
    if (losses.empty()) continue;
    std::vector<double> weighted(losses.size());
    for (std::size_t v = 0; v < losses.size(); ++v) weighted[v] = weights[i][v] * losses[v];
    total += pairwise_sum(weighted) / static_cast<double>(losses.size());
  }
  return total;
}

double aggregate_unlabeled_iedl(const std::vector<std::vector<double>>& per_voxel_losses) {
  double total = 0.0;
  for (const auto& losses : per_voxel_losses) {
    if (losses.empty()) continue;
    total += pairwise_sum(losses) / static_cast<double>(losses.size());
  }
  return total;
}

double gaussian_warmup(std::uint32_t epoch, const WarmupConfig& cfg) {
  cfg.validate();
  const double t = std::min<double>(epoch, cfg.ramp_len) / static_cast<double>(cfg.ramp_len);
  return cfg.lambda_max * std::exp(-5.0 * (1.0 - t) * (1.0 - t));
}

Objective total_objective(const LossParts& parts, std::uint32_t epoch, const WarmupConfig& warmup) {
  for (double p : {parts.labeled, parts.unlabeled, parts.weighted_labeled, parts.iedl_unlabeled}) {
    if (!std::isfinite(p)) fail(ErrorCode::kDomain, "loss part is not finite");
  }
  Objective out;
  out.parts = parts;
  out.lambda_gwu = gaussian_warmup(epoch, warmup);
  out.total = parts.labeled + parts.unlabeled + parts.weighted_labeled +
              out.lambda_gwu * parts.iedl_unlabeled;
  return out;
}

LossBreakdown combine_objectives(const Objective& first, const Objective& second) {
  return LossBreakdown{first, second, first.total + second.total};
}

}  // namespace medl
