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

#include "medl/edl.hpp"

#include <cmath>
#include <string>

#include "medl/error.hpp"

namespace medl {
namespace {

double floor_mass(double m, const char* what) {
  if (!std::isfinite(m)) fail(ErrorCode::kDomain, std::string(what) + " is not finite");
  if (m < 0.0) {
    if (m > -kMassFloor) return 0.0;
    fail(ErrorCode::kDomain, std::string(what) + " is negative: " + std::to_string(m));
  }
  return m < kMassFloor ? 0.0 : m;
}

void check_total(double total, double tolerance) {
  if (std::abs(total - 1.0) > tolerance) {
    fail(ErrorCode::kDomain, "masses sum to " + std::to_string(total) + ", expected 1");
  }
}

}  // namespace

EvidenceVector::EvidenceVector(std::vector<double> evidence) : evidence_(std::move(evidence)) {
  if (evidence_.size() < 2) {
    fail(ErrorCode::kDomain, "evidence needs at least 2 classes, got " +
                                 std::to_string(evidence_.size()));
  }
  for (double e : evidence_) {
    if (!std::isfinite(e) || e < 0.0) {
      fail(ErrorCode::kDomain, "evidence must be finite and non-negative, got " +
                                   std::to_string(e));
    }
  }
}

BeliefAssignment evidence_to_belief(const EvidenceVector& evidence) {
  const std::size_t k = evidence.num_classes();
  double strength = static_cast<double>(k);
  for (double e : evidence.values()) strength += e;

  BeliefAssignment out;
  out.belief.resize(k);
  for (std::size_t n = 0; n < k; ++n) out.belief[n] = evidence[n] / strength;
  out.uncertainty = static_cast<double>(k) / strength;
  return out;
}

DirichletParams evidence_to_dirichlet(const EvidenceVector& evidence) {
  DirichletParams out;
  out.alpha.reserve(evidence.num_classes());
  for (double e : evidence.values()) {
    out.alpha.push_back(e + 1.0);
    out.strength += e + 1.0;
  }
  return out;
}

Gpma belief_to_gpma(const BeliefAssignment& b, std::size_t num_classes) {
  if (b.num_classes() != num_classes) {
    fail(ErrorCode::kShapeMismatch, "belief has " + std::to_string(b.num_classes()) +
                                        " classes, expected " + std::to_string(num_classes));
  }
  return Gpma{b.belief, b.uncertainty, num_classes};
}

BeliefAssignment gpma_to_belief(const Gpma& m) {
  return BeliefAssignment{m.singletons, m.multiset};
}

Gpma vacuous_gpma(std::size_t num_classes) {
  return Gpma{std::vector<double>(num_classes, 0.0), 1.0, num_classes};
}

Gpma validated(Gpma m, double tolerance) {
  if (m.num_classes() < 2) fail(ErrorCode::kDomain, "GPMA needs at least 2 classes");
  double total = 0.0;
  for (double& s : m.singletons) {
    s = floor_mass(s, "singleton mass");
    total += s;
  }
  m.multiset = floor_mass(m.multiset, "multi-set mass");
  check_total(total + m.multiset, tolerance);
  return m;
}

BeliefAssignment validated(BeliefAssignment b, double tolerance) {
  double total = 0.0;
  for (double& s : b.belief) {
    s = floor_mass(s, "belief mass");
    total += s;
  }
  b.uncertainty = floor_mass(b.uncertainty, "uncertainty mass");
  check_total(total + b.uncertainty, tolerance);
  return b;
}

std::size_t argmax(std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t n = 1; n < values.size(); ++n) {
    if (values[n] > values[best]) best = n;
  }
  return best;
}

}  // namespace medl
