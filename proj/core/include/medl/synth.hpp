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
#include <random>

#include "medl/volume.hpp"

namespace medl {

enum class SourceBias {
  kNone,
  kBoundaryBlur,    // weak, neighbourhood-averaged evidence near label edges
  kClassSwapPatch,  // one cubic patch votes for the next class instead
};

struct PhantomSpec {
  Dims dims{32, 32, 32};
  std::size_t num_classes = 3;
  std::size_t blobs_per_class = 2;
  double gain = 3.0;  // evidence placed on the true class before noise
  double noise_a = 0.5;
  double noise_b = 0.5;
  SourceBias bias_a = SourceBias::kNone;
  SourceBias bias_b = SourceBias::kNone;
  double image_noise = 0.15;  // std-dev of the intensity image noise
  std::uint64_t seed = 0;

  void validate() const;
};

struct Phantom {
  LabelMap ground_truth;
  EvidenceMap evidence_a;
  EvidenceMap evidence_b;
  ScalarField image;  // class-dependent intensity plus noise, in roughly [0, 1]
};

// Ground truth is the union of axis-aligned ellipsoids, painted class by
// class over a class-0 background. Each source draws
//   e_vc = max(0, gain * [c == truth_v] + sigma * z)
// with z a standard normal truncated to [-4, 4], after its bias mode has
// reshaped the noiseless part. Output is a pure function of the spec.
Phantom generate_phantom(const PhantomSpec& spec);

// Portable random source: std::mt19937_64 (sequence fixed by the C++
// standard) with uniforms built from the top 53 bits and normals by inverse
// CDF. Identical streams on every conforming platform.
class PortableRng {
 public:
  explicit PortableRng(std::uint64_t seed) : engine_(seed) {}

  double uniform();                               // [0, 1)
  double uniform(double lo, double hi);           // [lo, hi)
  std::size_t index(std::size_t n);               // 0..n-1
  double truncated_normal(double bound = 4.0);    // N(0,1) restricted to [-bound, bound]

 private:
  std::mt19937_64 engine_;
};

}  // namespace medl
