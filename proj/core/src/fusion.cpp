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

#include "medl/fusion.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "medl/error.hpp"
#include "medl/parallel.hpp"

namespace medl {
namespace {

Gpma combine(const Gpma& a, const Gpma& b, double coeff) {
  const std::size_t k = a.num_classes();
  Gpma out;
  out.singletons.resize(k);
  out.multiset_cardinality = k;

  double total = 0.0;
  for (std::size_t n = 0; n < k; ++n) {
    const double m = a.singletons[n] * b.singletons[n] +
                     coeff * (a.singletons[n] * b.multiset + b.singletons[n] * a.multiset);
    out.singletons[n] = m;
    total += m;
  }
  out.multiset = a.multiset * b.multiset;
  total += out.multiset;

  if (!(total > 0.0)) {
    fail(ErrorCode::kDomain, "fused masses have zero total; inputs are not valid GPMAs");
  }
  // A total that is 1 up to summation rounding means the masses are already
  // normalized; dividing would only perturb their last bits.
  const double rounding = 2.0 * static_cast<double>(k + 1) * std::numeric_limits<double>::epsilon();
  if (std::fabs(total - 1.0) > rounding) {
    for (double& m : out.singletons) m /= total;
    out.multiset /= total;
  }
  return out;
}

void check_pair(const Gpma& a, const Gpma& b) {
  if (a.num_classes() != b.num_classes()) {
    fail(ErrorCode::kDomain, "cannot fuse GPMAs with " + std::to_string(a.num_classes()) +
                                 " and " + std::to_string(b.num_classes()) + " classes");
  }
  if (a.num_classes() < 2) fail(ErrorCode::kDomain, "GPMA needs at least 2 classes");
}

}  // namespace

void FusionConfig::validate() const {
  const bool in_range = lambda_own >= 0.0 && lambda_own <= 1.0 && lambda_fused >= 0.0 &&
                        lambda_fused <= 1.0;
  if (!in_range || std::abs(lambda_own + lambda_fused - 1.0) > 1e-12) {
    fail(ErrorCode::kDomain, "fusion weights must lie in [0,1] and sum to 1");
  }
}

Gpma caef_fuse(const Gpma& a, const Gpma& b) {
  check_pair(a, b);
  const double k = static_cast<double>(a.num_classes());
  return combine(a, b, 1.0 / (1.0 + k));
}

Gpma ef_fuse(const Gpma& a, const Gpma& b) {
  check_pair(a, b);
  return combine(a, b, 1.0);
}

Gpma fuse(const Gpma& a, const Gpma& b, FusionRule rule) {
  return rule == FusionRule::kCaef ? caef_fuse(a, b) : ef_fuse(a, b);
}

double reliability(const Gpma& fused) {
  double plogp = 0.0;
  for (double z : fused.singletons) {
    if (z > 0.0) plogp += z * std::log2(z);
  }
  return std::exp(fused.multiset * plogp);
}

double blend_uncertainty(double own_uncertainty, double fused_uncertainty,
                         const FusionConfig& cfg) {
  return cfg.lambda_own * own_uncertainty + cfg.lambda_fused * fused_uncertainty;
}

FusedLabelMap::FusedLabelMap(Dims dims, std::size_t num_classes, Spacing spacing,
                             std::vector<FusedVoxel> voxels)
    : dims_(dims), spacing_(spacing), num_classes_(num_classes), voxels_(std::move(voxels)) {
  if (voxels_.size() != dims_.voxels()) {
    fail(ErrorCode::kShapeMismatch, "fused voxel count does not match dims");
  }
}

LabelMap FusedLabelMap::labels() const {
  LabelMap out(dims_, num_classes_, spacing_);
  for (std::size_t v = 0; v < voxels_.size(); ++v) out[v] = voxels_[v].label;
  return out;
}

ScalarField FusedLabelMap::reliability_field() const {
  ScalarField out(dims_, spacing_);
  for (std::size_t v = 0; v < voxels_.size(); ++v) {
    out[v] = static_cast<float>(voxels_[v].reliability);
  }
  return out;
}

ScalarField FusedLabelMap::uncertainty_field() const {
  ScalarField out(dims_, spacing_);
  for (std::size_t v = 0; v < voxels_.size(); ++v) {
    out[v] = static_cast<float>(voxels_[v].masses.multiset);
  }
  return out;
}

FusedLabelMap fuse_volumes(const EvidenceMap& a, const EvidenceMap& b, const FusionConfig& cfg,
                           double reliability_threshold, std::optional<std::size_t> threads) {
  cfg.validate();
  if (a.dims() != b.dims() || a.num_classes() != b.num_classes()) {
    fail(ErrorCode::kShapeMismatch, "evidence maps differ in dims or class count");
  }
  if (!(reliability_threshold >= 0.0 && reliability_threshold <= 1.0)) {
    fail(ErrorCode::kDomain, "reliability threshold must lie in [0,1]");
  }

  const std::size_t k = a.num_classes();
  std::vector<FusedVoxel> voxels(a.voxels());
  parallel_for(voxels.size(), resolve_threads(threads), [&](std::size_t begin, std::size_t end) {
    for (std::size_t v = begin; v < end; ++v) {
      const Gpma ga = belief_to_gpma(evidence_to_belief(a.voxel(v)), k);
      const Gpma gb = belief_to_gpma(evidence_to_belief(b.voxel(v)), k);
      FusedVoxel& out = voxels[v];
      out.masses = fuse(ga, gb, cfg.rule);
      out.reliability = reliability(out.masses);
      out.label = out.reliability >= reliability_threshold
                      ? static_cast<std::uint16_t>(argmax(out.masses.singletons))
                      : kContentious;
    }
  });
  return FusedLabelMap(a.dims(), k, a.spacing(), std::move(voxels));
}

}  // namespace medl
