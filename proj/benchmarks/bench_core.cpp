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

#include <random>

#include <benchmark/benchmark.h>

#include "medl/fusion.hpp"
#include "medl/losses.hpp"
#include "medl/metrics.hpp"
#include "medl/special_functions.hpp"
#include "medl/synth.hpp"

namespace {

using namespace medl;

void BM_Trigamma(benchmark::State& state) {
  double x = 0.37;
  for (auto _ : state) {
    benchmark::DoNotOptimize(trigamma(x));
    x = x > 50.0 ? 0.37 : x + 0.71;
  }
}
BENCHMARK(BM_Trigamma);

void BM_IedlLossAndGrad(benchmark::State& state) {
  const std::size_t k = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> a(1.0, 20.0);
  DirichletParams d;
  for (std::size_t n = 0; n < k; ++n) {
    d.alpha.push_back(a(rng));
    d.strength += d.alpha.back();
  }
  std::vector<double> y(k, 0.0);
  y[0] = 1.0;
  const IedlConfig cfg{0.1};
  for (auto _ : state) {
    benchmark::DoNotOptimize(iedl_voxel_loss(d, y, 1.0, cfg));
    benchmark::DoNotOptimize(iedl_voxel_grad(d, y, 1.0, cfg));
  }
}
BENCHMARK(BM_IedlLossAndGrad)->Arg(2)->Arg(4)->Arg(8);

void BM_FuseVolumes(benchmark::State& state) {
  PhantomSpec spec;
  const auto side = static_cast<std::uint32_t>(state.range(0));
  spec.dims = {side, side, side};
  spec.bias_a = SourceBias::kBoundaryBlur;
  spec.bias_b = SourceBias::kClassSwapPatch;
  const Phantom ph = generate_phantom(spec);
  FusionConfig cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fuse_volumes(ph.evidence_a, ph.evidence_b, cfg, 0.5, 1));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(spec.dims.voxels()));
}
BENCHMARK(BM_FuseVolumes)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_SurfaceDistances(benchmark::State& state) {
  PhantomSpec spec;
  const auto side = static_cast<std::uint32_t>(state.range(0));
  spec.dims = {side, side, side};
  spec.num_classes = 2;
  spec.blobs_per_class = 3;
  spec.noise_a = 1.5;
  const Phantom ph = generate_phantom(spec);
  LabelMap noisy(spec.dims, 2);
  for (std::size_t v = 0; v < noisy.voxels(); ++v) {
    noisy[v] = ph.evidence_a.at(1, v) > ph.evidence_a.at(0, v) ? 1 : 0;
  }
  const BinaryMask p = BinaryMask::from_labels(noisy, 1);
  const BinaryMask g = BinaryMask::from_labels(ph.ground_truth, 1);
  const auto method = static_cast<DistanceMethod>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(surface_distances(p, g, method));
  }
}
BENCHMARK(BM_SurfaceDistances)
    ->Args({24, static_cast<int>(DistanceMethod::kBruteForce)})
    ->Args({24, static_cast<int>(DistanceMethod::kDistanceTransform)})
    ->Args({48, static_cast<int>(DistanceMethod::kDistanceTransform)})
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
