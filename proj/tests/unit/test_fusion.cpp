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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "../oracles/oracles.hpp"
#include "medl/error.hpp"
#include "medl/fusion.hpp"

namespace medl {
namespace {

Gpma make(std::vector<double> singletons, double multiset) {
  const std::size_t k = singletons.size();
  return Gpma{std::move(singletons), multiset, k};
}

std::vector<double> flat(const Gpma& m) {
  std::vector<double> out = m.singletons;
  out.push_back(m.multiset);
  return out;
}

double total(const Gpma& m) {
  double s = m.multiset;
  for (double x : m.singletons) s += x;
  return s;
}

Gpma random_gpma(std::mt19937_64& rng, std::size_t k) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> w(k + 1);
  double s = 0.0;
  for (double& x : w) {
    x = u(rng) < 0.1 ? 0.0 : -std::log(1.0 - u(rng));
    s += x;
  }
  if (s == 0.0) {
    w.back() = 1.0;
    s = 1.0;
  }
  for (double& x : w) x /= s;
  const double multi = w.back();
  w.pop_back();
  return make(std::move(w), multi);
}

TEST(CaefFuse, AgreementPreservesCertainty) {
  const Gpma certain = make({1.0, 0.0}, 0.0);
  const Gpma out = caef_fuse(certain, certain);
  EXPECT_EQ(out.singletons, (std::vector<double>{1.0, 0.0}));
  EXPECT_EQ(out.multiset, 0.0);
}

TEST(CaefFuse, HandEvaluatedTwoClassCase) {
  // raw (0.37333.., 0.09333..; 0.04), values from the mpmath oracle script
  const Gpma out = caef_fuse(make({0.6, 0.2}, 0.2), make({0.5, 0.3}, 0.2));
  EXPECT_NEAR(out.singletons[0], 0.73684210526315789, 1e-15);
  EXPECT_NEAR(out.singletons[1], 0.18421052631578947, 1e-15);
  EXPECT_NEAR(out.multiset, 0.078947368421052632, 1e-15);
}

TEST(CaefFuse, VacuousPartnerDiscountsButKeepsRanking) {
  const Gpma a = make({0.6, 0.2}, 0.2);
  const Gpma out = caef_fuse(a, vacuous_gpma(2));
  // raw singletons a_n / 3, raw multiset a_K
  const double raw_total = 0.6 / 3 + 0.2 / 3 + 0.2;
  EXPECT_NEAR(out.singletons[0], 0.2 / raw_total, 1e-15);
  EXPECT_NEAR(out.singletons[1], (0.2 / 3) / raw_total, 1e-15);
  EXPECT_NEAR(out.multiset, 0.2 / raw_total, 1e-15);
  EXPECT_EQ(argmax(out.singletons), argmax(a.singletons));
}

TEST(EfFuse, HandEvaluatedTwoClassCase) {
  const Gpma out = ef_fuse(make({0.6, 0.2}, 0.2), make({0.5, 0.3}, 0.2));
  EXPECT_NEAR(out.singletons[0], 0.72222222222222222, 1e-15);
  EXPECT_NEAR(out.singletons[1], 0.22222222222222222, 1e-15);
  EXPECT_NEAR(out.multiset, 0.055555555555555556, 1e-15);
}

TEST(EfFuse, VacuousIdentityAndCertainAgreement) {
  const Gpma a = make({0.6, 0.2}, 0.2);
  const Gpma out = ef_fuse(a, vacuous_gpma(2));
  EXPECT_EQ(out.singletons, a.singletons);
  EXPECT_EQ(out.multiset, a.multiset);

  const Gpma certain = make({1.0, 0.0}, 0.0);
  EXPECT_EQ(flat(ef_fuse(certain, certain)), (std::vector<double>{1.0, 0.0, 0.0}));
}

TEST(Fuse, RejectsMismatchedClassCounts) {
  EXPECT_THROW(caef_fuse(vacuous_gpma(2), vacuous_gpma(3)), Error);
  EXPECT_THROW(ef_fuse(vacuous_gpma(3), vacuous_gpma(2)), Error);
}

TEST(Reliability, EdgeCases) {
  EXPECT_EQ(reliability(make({0.3, 0.3, 0.4}, 0.0)), 1.0);
  EXPECT_EQ(reliability(make({0.0, 1.0}, 0.0)), 1.0);
  // A single singleton plus the multi-set still carries entropy.
  EXPECT_NEAR(reliability(make({0.0, 0.6}, 0.4)), std::exp(0.4 * 0.6 * std::log2(0.6)), 1e-15);
  EXPECT_EQ(reliability(vacuous_gpma(4)), 1.0);
}

TEST(Reliability, HandEvaluatedCase) {
  // exponent 0.2 * (0.8 log2 0.4) = -0.21150849518197798
  EXPECT_NEAR(reliability(make({0.4, 0.4}, 0.2)), 0.80936240534260115, 1e-14);
}

TEST(Reliability, ShapeInUncertaintyAndEntropy) {
  // Not monotone in the multi-set mass: both ends are fully reliable.
  const auto shaped = [](double u) {
    return reliability(make({0.5 * (1 - u), 0.3 * (1 - u), 0.2 * (1 - u)}, u));
  };
  EXPECT_GT(shaped(0.05), shaped(0.5));
  EXPECT_LT(shaped(0.5), shaped(0.95));
  // Fixed multi-set mass, singleton entropy growing toward uniform.
  double prev = 1.0;
  for (double t = 0.05; t <= 0.5; t += 0.05) {
    const double r = reliability(make({(1 - t) * 0.7, t * 0.7}, 0.3));
    EXPECT_LT(r, prev);
    prev = r;
  }
}

TEST(BlendUncertainty, WeightedMean) {
  FusionConfig cfg;
  EXPECT_DOUBLE_EQ(blend_uncertainty(0.4, 0.2, cfg), 0.3);
  cfg.lambda_own = 1.0;
  cfg.lambda_fused = 0.0;
  EXPECT_EQ(blend_uncertainty(0.37, 0.9, cfg), 0.37);
  cfg.lambda_own = 0.3;
  cfg.lambda_fused = 0.7;
  EXPECT_DOUBLE_EQ(blend_uncertainty(1.0, 0.0, cfg), 0.3);
}

TEST(FusionConfig, ValidatesWeights) {
  EXPECT_NO_THROW((FusionConfig{FusionRule::kEf, 0.25, 0.75}.validate()));
  EXPECT_THROW((FusionConfig{FusionRule::kCaef, 0.6, 0.6}.validate()), Error);
  EXPECT_THROW((FusionConfig{FusionRule::kCaef, -0.5, 1.5}.validate()), Error);
}

class FusionProperties : public ::testing::TestWithParam<std::size_t> {
 protected:
  std::mt19937_64 rng_{1234 + GetParam()};
};

TEST_P(FusionProperties, CommutativeNormalizedAndMatchesFocalSetOracle) {
  const std::size_t k = GetParam();
  for (int i = 0; i < 1000; ++i) {
    const Gpma a = random_gpma(rng_, k);
    const Gpma b = random_gpma(rng_, k);
    for (FusionRule rule : {FusionRule::kCaef, FusionRule::kEf}) {
      const Gpma ab = fuse(a, b, rule);
      const Gpma ba = fuse(b, a, rule);
      EXPECT_EQ(flat(ab), flat(ba));
      EXPECT_NEAR(total(ab), 1.0, 1e-10);
      EXPECT_NO_THROW(validated(ab, 1e-10));

      const double coeff = rule == FusionRule::kCaef ? 1.0 / (1.0 + k) : 1.0;
      const auto expected = oracle::focal_set_fusion(flat(a), flat(b), coeff);
      const auto got = flat(ab);
      for (std::size_t n = 0; n <= k; ++n) EXPECT_NEAR(got[n], expected[n], 1e-10);

      const double r = reliability(ab);
      EXPECT_GT(r, 0.0);
      EXPECT_LE(r, 1.0);
    }
  }
}

TEST_P(FusionProperties, VacuousPartner) {
  const std::size_t k = GetParam();
  for (int i = 0; i < 500; ++i) {
    const Gpma a = random_gpma(rng_, k);
    if (a.multiset == 1.0) continue;
    const Gpma ef = ef_fuse(a, vacuous_gpma(k));
    for (std::size_t n = 0; n < k; ++n) EXPECT_NEAR(ef.singletons[n], a.singletons[n], 1e-12);
    EXPECT_NEAR(ef.multiset, a.multiset, 1e-12);
    EXPECT_EQ(argmax(caef_fuse(a, vacuous_gpma(k)).singletons), argmax(a.singletons));
  }
}

TEST_P(FusionProperties, CertainAgreementIsAbsorbed) {
  const std::size_t k = GetParam();
  for (std::size_t c = 0; c < k; ++c) {
    std::vector<double> onehot(k, 0.0);
    onehot[c] = 1.0;
    const Gpma g = make(onehot, 0.0);
    EXPECT_EQ(flat(caef_fuse(g, g)), flat(g));
  }
}

INSTANTIATE_TEST_SUITE_P(ClassCounts, FusionProperties, ::testing::Values(2u, 3u, 4u, 7u));

EvidenceMap evidence_2x1x1(std::vector<float> data) {
  return EvidenceMap(Dims{2, 1, 1}, 2, Spacing{}, std::move(data));
}

TEST(FuseVolumes, ZeroEvidenceTiesGoToClassZero) {
  const EvidenceMap zero(Dims{2, 2, 2}, 3);
  const FusedLabelMap out = fuse_volumes(zero, zero, FusionConfig{}, 0.0);
  for (const FusedVoxel& v : out.voxels()) {
    EXPECT_EQ(v.label, 0);
    EXPECT_EQ(v.reliability, 1.0);
    EXPECT_EQ(v.masses.multiset, 1.0);
  }
}

TEST(FuseVolumes, ThresholdOneMarksUncertainEntropicVoxelsContentious) {
  // channels-major: class 0 evidence then class 1 evidence
  const EvidenceMap a = evidence_2x1x1({2.0f, 1.0f, 1.0f, 1.0f});
  const FusedLabelMap out = fuse_volumes(a, a, FusionConfig{}, 1.0);
  for (const FusedVoxel& v : out.voxels()) {
    EXPECT_LT(v.reliability, 1.0);
    EXPECT_EQ(v.label, kContentious);
  }
}

// Chain oracle: evidence -> belief by hand, focal-set fusion, reliability
// formula written out independently.
TEST(FuseVolumes, TwoVoxelChainMatchesOracle) {
  // voxel 0: a = b = (2, 0); voxel 1: a = b = (0, 0)
  const EvidenceMap ev = evidence_2x1x1({2.0f, 0.0f, 0.0f, 0.0f});
  for (FusionRule rule : {FusionRule::kCaef, FusionRule::kEf}) {
    const double coeff = rule == FusionRule::kCaef ? 1.0 / 3.0 : 1.0;
    const auto m0 = oracle::focal_set_fusion({0.5, 0.0, 0.5}, {0.5, 0.0, 0.5}, coeff);
    const double r0 = std::exp(m0[2] * (m0[0] * std::log2(m0[0])));

    const FusedLabelMap out = fuse_volumes(ev, ev, FusionConfig{rule, 0.5, 0.5}, 0.9);
    EXPECT_NEAR(out[0].masses.singletons[0], m0[0], 1e-15);
    EXPECT_NEAR(out[0].masses.multiset, m0[2], 1e-15);
    EXPECT_NEAR(out[0].reliability, r0, 1e-15);
    // vacuous voxel: all mass on C_K, empty entropy sum, R = 1
    EXPECT_EQ(out[1].reliability, 1.0);
    EXPECT_EQ(out[1].label, 0);
  }
  // mpmath: CAEF (0.625, 0; 0.375) -> R = 0.8530619545562331; EF (0.75, 0; 0.25) -> 0.9251313689059607
  const FusedLabelMap caef = fuse_volumes(ev, ev, FusionConfig{FusionRule::kCaef, 0.5, 0.5}, 0.9);
  EXPECT_NEAR(caef[0].reliability, 0.8530619545562331, 1e-14);
  EXPECT_EQ(caef[0].label, kContentious);
  const FusedLabelMap ef = fuse_volumes(ev, ev, FusionConfig{FusionRule::kEf, 0.5, 0.5}, 0.9);
  EXPECT_NEAR(ef[0].reliability, 0.9251313689059607, 1e-14);
  EXPECT_EQ(ef[0].label, 0);
}

TEST(FuseVolumes, OutputIndependentOfThreadCount) {
  std::mt19937_64 rng(5);
  std::gamma_distribution<float> g(0.7f, 2.0f);
  EvidenceMap a(Dims{9, 7, 5}, 4), b(Dims{9, 7, 5}, 4);
  for (float& x : a.data()) x = g(rng);
  for (float& x : b.data()) x = g(rng);
  const FusedLabelMap one = fuse_volumes(a, b, FusionConfig{}, 0.5, 1);
  for (std::size_t threads : {2u, 3u, 8u}) {
    const FusedLabelMap many = fuse_volumes(a, b, FusionConfig{}, 0.5, threads);
    for (std::size_t v = 0; v < one.voxels().size(); ++v) {
      EXPECT_EQ(flat(one[v].masses), flat(many[v].masses));
      EXPECT_EQ(one[v].reliability, many[v].reliability);
      EXPECT_EQ(one[v].label, many[v].label);
    }
  }
}

TEST(FuseVolumes, RejectsBadInputs) {
  const EvidenceMap a(Dims{2, 2, 2}, 2), b(Dims{2, 2, 3}, 2), c(Dims{2, 2, 2}, 3);
  EXPECT_THROW(fuse_volumes(a, b, FusionConfig{}, 0.0), Error);
  EXPECT_THROW(fuse_volumes(a, c, FusionConfig{}, 0.0), Error);
  EXPECT_THROW(fuse_volumes(a, a, FusionConfig{}, 1.5), Error);
  EXPECT_THROW(fuse_volumes(a, a, FusionConfig{}, -0.1), Error);
  EvidenceMap neg(Dims{2, 2, 2}, 2);
  neg.at(1, 3) = -1.0f;
  EXPECT_THROW(fuse_volumes(neg, a, FusionConfig{}, 0.0, 4), Error);
}

}  // namespace
}  // namespace medl
