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
#include <span>
#include <vector>

namespace medl {

// Masses smaller than this in magnitude are treated as exact zeros when a
// mass assignment is validated.
inline constexpr double kMassFloor = 1e-15;

// Non-negative, finite per-class support for one voxel. K >= 2.
class EvidenceVector {
 public:
  explicit EvidenceVector(std::vector<double> evidence);
  EvidenceVector(std::initializer_list<double> evidence)
      : EvidenceVector(std::vector<double>(evidence)) {}

  std::size_t num_classes() const noexcept { return evidence_.size(); }
  double operator[](std::size_t n) const noexcept { return evidence_[n]; }
  std::span<const double> values() const noexcept { return evidence_; }

 private:
  std::vector<double> evidence_;
};

// A point on the (K+1)-simplex: per-class belief plus uncertainty.
struct BeliefAssignment {
  std::vector<double> belief;
  double uncertainty = 1.0;

  std::size_t num_classes() const noexcept { return belief.size(); }
};

struct DirichletParams {
  std::vector<double> alpha;  // alpha_n = e_n + 1
  double strength = 0.0;      // S = sum alpha_n

  std::size_t num_classes() const noexcept { return alpha.size(); }
  double probability(std::size_t n) const noexcept { return alpha[n] / strength; }
};

// Generalized probability mass assignment: K singleton masses plus one mass on
// the multi-set C_K holding every class.
struct Gpma {
  std::vector<double> singletons;
  double multiset = 0.0;
  std::size_t multiset_cardinality = 0;  // |C_K|

  std::size_t num_classes() const noexcept { return singletons.size(); }
};

BeliefAssignment evidence_to_belief(const EvidenceVector& evidence);
DirichletParams evidence_to_dirichlet(const EvidenceVector& evidence);

// Moves the uncertainty onto C_K. num_classes must equal b.num_classes().
Gpma belief_to_gpma(const BeliefAssignment& b, std::size_t num_classes);
inline Gpma belief_to_gpma(const BeliefAssignment& b) {
  return belief_to_gpma(b, b.num_classes());
}

// Drops the multi-set label again.
BeliefAssignment gpma_to_belief(const Gpma& m);

// Vacuous assignment: all mass on C_K.
Gpma vacuous_gpma(std::size_t num_classes);

// Throws kDomain unless every mass is non-negative (after flooring values in
// (-kMassFloor, 0) to zero) and the total is 1 within `tolerance`. Returns
// the floored copy.
Gpma validated(Gpma m, double tolerance = 1e-12);
BeliefAssignment validated(BeliefAssignment b, double tolerance = 1e-12);

// Index of the largest value; the lowest index wins ties.
std::size_t argmax(std::span<const double> values);

}  // namespace medl
