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
#include <vector>

#include "medl/curriculum.hpp"
#include "medl/fusion.hpp"
#include "medl/losses.hpp"
#include "medl/metrics.hpp"
#include "medl/volume.hpp"

namespace medl::demo {

// Toy semi-supervised run on synthetic phantoms. Two linear evidential
// classifiers (evidence = softplus(W * features)) with different feature sets
// are trained by full-batch gradient descent, once on the labeled objective
// alone and once on the full objective with fused pseudo-labels.
struct DemoConfig {
  std::uint64_t seed = 0;
  std::uint32_t epochs = 50;
  double labeled_fraction = 0.1;
  std::size_t train_volumes = 10;
  Dims dims{20, 20, 20};
  double image_noise = 0.35;
  double learning_rate = 8.0;
  double reliability_threshold = 0.9;
  double xi = 1.0;
  FusionConfig fusion{};
  IedlConfig iedl{};
  WarmupConfig warmup{1.0, 20};
  std::size_t threads = 1;

  void validate() const;
};

enum class Pipeline { kLabeledOnly, kMedl };

struct EpochLog {
  std::uint32_t epoch = 0;
  LossBreakdown losses;
};

struct PipelineResult {
  std::vector<EpochLog> history;
  MetricReport report;  // foreground class on the held-out phantom
};

struct DemoResult {
  std::size_t labeled_volumes = 0;
  std::size_t unlabeled_volumes = 0;
  PipelineResult baseline;
  PipelineResult medl;
};

DemoResult run_demo(const DemoConfig& cfg);

}  // namespace medl::demo
