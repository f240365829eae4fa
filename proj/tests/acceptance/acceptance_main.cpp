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

// Acceptance gate: every criterion runs at its stated tolerance and prints a
// single PASS/FAIL line. Exit status is non-zero if any selected check fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "../oracles/oracles.hpp"
#include "CLI11.hpp"
#include "medl/curriculum.hpp"
#include "medl/demo.hpp"
#include "medl/edl.hpp"
#include "medl/error.hpp"
#include "medl/fusion.hpp"
#include "medl/losses.hpp"
#include "medl/metrics.hpp"
#include "medl/special_functions.hpp"
#include "medl/synth.hpp"
#include "medl/volume_io.hpp"

namespace {

using namespace medl;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double budget_s;  // 0 = no runtime bound
  std::function<Outcome()> run;
};

std::string format(const char* fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

std::vector<double> flat(const Gpma& m) {
  std::vector<double> v = m.singletons;
  v.push_back(m.multiset);
  return v;
}

Gpma random_gpma(std::mt19937_64& rng, std::size_t k) {
  std::exponential_distribution<double> ex(1.0);
  std::vector<double> w(k + 1);
  for (double& x : w) x = ex(rng);
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  Gpma g;
  for (std::size_t n = 0; n < k; ++n) g.singletons.push_back(w[n] / total);
  g.multiset = w[k] / total;
  g.multiset_cardinality = k;
  return g;
}

DirichletParams dirichlet(std::vector<double> alpha) {
  DirichletParams d{std::move(alpha), 0.0};
  for (double a : d.alpha) d.strength += a;
  return d;
}

// ---------------------------------------------------------------------------

Outcome simplex_conservation() {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> log_scale(-12.0, 12.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  long failures = 0, total = 0;
  double worst = 0.0;
  for (std::size_t k : {2, 3, 4, 8}) {
    for (int i = 0; i < 100000; ++i) {
      std::vector<double> e(k);
      const double scale = std::exp(log_scale(rng));
      for (double& x : e) x = unit(rng) < 0.1 ? 0.0 : scale * unit(rng);
      const BeliefAssignment b = evidence_to_belief(EvidenceVector(e));
      const double s = std::accumulate(b.belief.begin(), b.belief.end(), 0.0) + b.uncertainty;
      const double err = std::fabs(s - 1.0);
      worst = std::max(worst, err);
      failures += err > 1e-12;
      ++total;
    }
  }
  return {failures == 0, format("%ld/%ld vectors off the simplex, max |sum-1| = %.2e", failures,
                                total, worst)};
}

Outcome caef_oracle() {
  std::mt19937_64 rng(2);
  double worst = 0.0;
  long asym = 0, total = 0;
  for (std::size_t k : {2, 3, 4}) {
    const double coeff = 1.0 / (1.0 + static_cast<double>(k));
    for (int i = 0; i < 1000; ++i) {
      const Gpma a = random_gpma(rng, k), b = random_gpma(rng, k);
      const std::vector<double> got = flat(caef_fuse(a, b));
      const std::vector<double> ref = oracle::focal_set_fusion(flat(a), flat(b), coeff);
      for (std::size_t n = 0; n <= k; ++n) worst = std::max(worst, std::fabs(got[n] - ref[n]));
      asym += got != flat(caef_fuse(b, a));
      ++total;
    }
  }
  return {worst <= 1e-10 && asym == 0,
          format("%ld pairs, max |diff| = %.2e, non-commuting pairs = %ld", total, worst, asym)};
}

Outcome vacuous_behaviour() {
  std::mt19937_64 rng(3);
  long ef_broken = 0, argmax_broken = 0, total = 0;
  for (std::size_t k : {2, 3, 4}) {
    for (int i = 0; i < 1000; ++i) {
      const Gpma a = random_gpma(rng, k);
      ef_broken += flat(ef_fuse(a, vacuous_gpma(k))) != flat(a);
      ef_broken += flat(ef_fuse(vacuous_gpma(k), a)) != flat(a);
      argmax_broken += argmax(caef_fuse(a, vacuous_gpma(k)).singletons) != argmax(a.singletons);
      ++total;
    }
  }
  return {ef_broken == 0 && argmax_broken == 0,
          format("%ld inputs: EF identity violations %ld, CAEF argmax changes %ld", total,
                 ef_broken, argmax_broken)};
}

Outcome reliability_range() {
  std::mt19937_64 rng(4);
  long out_of_range = 0;
  for (std::size_t k : {2, 3, 4, 8}) {
    for (int i = 0; i < 25000; ++i) {
      const double r = reliability(caef_fuse(random_gpma(rng, k), random_gpma(rng, k)));
      out_of_range += !(r > 0.0 && r <= 1.0);
    }
  }
  for (std::size_t k : {2, 3, 8}) {
    out_of_range += !(reliability(vacuous_gpma(k)) == 1.0);
  }
  Gpma hand;
  hand.singletons = {0.4, 0.4};
  hand.multiset = 0.2;
  hand.multiset_cardinality = 2;
  const double r = reliability(hand);
  const bool hand_ok = std::fabs(r - 0.80937) <= 1e-5 && std::fabs(r - 0.80936240534260115) <= 1e-14;
  return {out_of_range == 0 && hand_ok,
          format("out of (0,1]: %ld of 100006; hand case R = %.10f (target 0.80937, oracle "
                 "0.8093624053)",
                 out_of_range, r)};
}

Outcome curriculum_properties() {
  long midpoint_bad = 0, bounds_bad = 0, grid = 0;
  for (std::uint32_t q_total : {2u, 10u, 50u, 1000u}) {
    CurriculumConfig cfg;
    cfg.total_epochs = q_total;
    for (std::uint32_t h = 1; h <= 500; ++h) midpoint_bad += omega(q_total / 2, h, 500, cfg) != 1.0;
  }
  for (double xi : {0.1, 0.5, 1.0}) {
    CurriculumConfig cfg;
    cfg.xi = xi;
    cfg.total_epochs = 1000;
    for (std::uint32_t q = 1; q <= 1000; q += 3) {
      for (std::uint32_t h = 1; h <= 1000; ++h) {
        const double w = omega(q, h, 1000, cfg);
        bounds_bad += !(w > 1.0 - xi && w < 1.0 + xi);
        ++grid;
      }
    }
  }
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  long order_bad = 0;
  for (int t = 0; t < 20; ++t) {
    std::vector<double> unc(4096);
    for (double& x : unc) x = u(rng);
    CurriculumConfig cfg;
    cfg.total_epochs = 50;
    const auto w = curriculum_weights(unc, 1, cfg).weights;
    const auto least = std::min_element(unc.begin(), unc.end()) - unc.begin();
    const auto heaviest = std::max_element(w.begin(), w.end()) - w.begin();
    order_bad += least != heaviest;
  }
  return {midpoint_bad == 0 && bounds_bad == 0 && order_bad == 0 && grid >= 1000000,
          format("midpoint != 1: %ld; bound violations: %ld of %ld; q=1 ordering failures: %ld/20",
                 midpoint_bad, bounds_bad, grid, order_bad)};
}

Outcome iedl_gradient() {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> log_a(std::log(1.001), std::log(40.0));
  std::uniform_real_distribution<double> weight(0.2, 2.0);
  long bad = 0, total = 0;
  double worst = 0.0;
  for (std::size_t k : {2, 3, 4}) {
    for (double lambda : {0.0, 0.1, 1.0}) {
      const IedlConfig cfg{lambda};
      for (int i = 0; i < 200; ++i) {
        std::vector<double> alpha(k), y(k, 0.0);
        for (double& a : alpha) a = std::exp(log_a(rng));
        y[rng() % k] = 1.0;
        const double w = weight(rng);
        const auto loss = [&](const std::vector<double>& a) {
          return iedl_voxel_loss(dirichlet(a), y, w, cfg);
        };
        const std::vector<double> fd = oracle::central_difference(loss, alpha, 1e-5);
        const std::vector<double> g = iedl_voxel_grad(dirichlet(alpha), y, w, cfg);
        for (std::size_t n = 0; n < k; ++n) {
          const double abs_err = std::fabs(g[n] - fd[n]);
          const double rel = abs_err / std::max(std::fabs(fd[n]), 1e-300);
          if (std::fabs(fd[n]) > 1e-6) worst = std::max(worst, rel);
          bad += abs_err > 1e-8 && rel >= 1e-4;
          ++total;
        }
      }
    }
  }
  return {bad == 0, format("%ld/%ld components out of tolerance, worst relative error %.2e", bad,
                           total, worst)};
}

Outcome fisher_determinant_oracle() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> log_a(0.0, std::log(200.0));
  long bad = 0, nonpos = 0, nonfinite = 0;
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const std::size_t k = 2 + i % 7;
    std::vector<double> alpha(k);
    for (double& a : alpha) a = std::exp(log_a(rng));
    const DirichletParams d = dirichlet(alpha);
    std::vector<std::vector<long double>> m(k, std::vector<long double>(k));
    const long double ts = trigamma(d.strength);
    for (std::size_t r = 0; r < k; ++r)
      for (std::size_t c = 0; c < k; ++c) m[r][c] = (r == c ? trigamma(alpha[r]) : 0.0L) - ts;
    const long double ref = oracle::dense_determinant(m);
    const double det = fisher_determinant(d);
    const double rel = static_cast<double>(std::fabs((det - ref) / ref));
    worst = std::max(worst, rel);
    bad += rel > 1e-10;
    nonpos += !(det > 0.0);
    nonfinite += !std::isfinite(fisher_log_determinant(d));
  }
  return {bad == 0 && nonpos == 0 && nonfinite == 0,
          format("10000 draws: %ld beyond 1e-10 relative (worst %.2e), %ld non-positive, %ld "
                 "non-finite logs",
                 bad, worst, nonpos, nonfinite)};
}

BinaryMask random_mask(std::mt19937_64& rng, Dims d, Spacing s) {
  BinaryMask m(d, s);
  const int boxes = 1 + static_cast<int>(rng() % 3);
  for (int b = 0; b < boxes; ++b) {
    const std::size_t i0 = rng() % d.h, j0 = rng() % d.w, k0 = rng() % d.l;
    const std::size_t i1 = std::min<std::size_t>(d.h, i0 + 1 + rng() % 6);
    const std::size_t j1 = std::min<std::size_t>(d.w, j0 + 1 + rng() % 6);
    const std::size_t k1 = std::min<std::size_t>(d.l, k0 + 1 + rng() % 6);
    for (std::size_t i = i0; i < i1; ++i)
      for (std::size_t j = j0; j < j1; ++j)
        for (std::size_t k = k0; k < k1; ++k) m.set(d.index(i, j, k), true);
  }
  for (std::size_t v = 0; v < d.voxels(); ++v) {
    if (rng() % 40 == 0) m.set(v, !m[v]);
  }
  if (m.empty()) m.set(rng() % d.voxels(), true);
  return m;
}

Outcome metrics_oracle() {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<float> spacing(0.4f, 2.5f);
  double worst_dist = 0.0, worst_identity = 0.0;
  long bad = 0;
  for (int t = 0; t < 200; ++t) {
    const Dims d{static_cast<std::uint32_t>(2 + rng() % 11), static_cast<std::uint32_t>(2 + rng() % 11),
                 static_cast<std::uint32_t>(2 + rng() % 11)};
    const Spacing s{spacing(rng), spacing(rng), spacing(rng)};
    const BinaryMask p = random_mask(rng, d, s), g = random_mask(rng, d, s);
    const oracle::GridMask gp{d.h, d.w, d.l, p.bits(), s.x, s.y, s.z};
    const oracle::GridMask gg{d.h, d.w, d.l, g.bits(), s.x, s.y, s.z};
    const auto ref = oracle::brute_force_hd95_asd(gp, gg);
    for (DistanceMethod m : {DistanceMethod::kAuto, DistanceMethod::kDistanceTransform}) {
      const SurfaceDistances sd = surface_distances(p, g, m);
      const double e = std::max(std::fabs(hd95(sd) - ref.hd95), std::fabs(asd(sd) - ref.asd));
      worst_dist = std::max(worst_dist, e);
      bad += e > 1e-9;
    }
    const double dc = dice(p, g);
    const double e = std::fabs(jaccard(p, g) - dc / (2.0 - dc));
    worst_identity = std::max(worst_identity, e);
    bad += e > 1e-12;
  }
  return {bad == 0, format("200 pairs: max distance error %.2e, max Jaccard-Dice identity error "
                           "%.2e, failures %ld",
                           worst_dist, worst_identity, bad)};
}

double macro_dice(const LabelMap& pred, const LabelMap& gt) {
  double sum = 0.0;
  for (std::size_t c = 1; c < gt.num_classes(); ++c) {
    sum += dice(BinaryMask::from_labels(pred, static_cast<std::uint16_t>(c)),
                BinaryMask::from_labels(gt, static_cast<std::uint16_t>(c)));
  }
  return sum / static_cast<double>(gt.num_classes() - 1);
}

LabelMap argmax_labels(const EvidenceMap& e) {
  LabelMap out(e.dims(), e.num_classes(), e.spacing());
  for (std::size_t v = 0; v < out.voxels(); ++v) {
    out[v] = static_cast<std::uint16_t>(argmax(e.voxel(v).values()));
  }
  return out;
}

Outcome fusion_helps() {
  int wins = 0;
  double caef_sum = 0.0, ef_sum = 0.0, a_sum = 0.0, b_sum = 0.0;
  constexpr int kSeeds = 50;
  for (int seed = 0; seed < kSeeds; ++seed) {
    PhantomSpec spec;
    spec.seed = static_cast<std::uint64_t>(seed);
    spec.noise_a = spec.noise_b = 0.5;
    spec.bias_a = SourceBias::kBoundaryBlur;
    spec.bias_b = SourceBias::kClassSwapPatch;
    const Phantom ph = generate_phantom(spec);
    FusionConfig caef, ef;
    ef.rule = FusionRule::kEf;
    const double d_caef = macro_dice(fuse_volumes(ph.evidence_a, ph.evidence_b, caef, 0.0).labels(),
                                     ph.ground_truth);
    const double d_ef = macro_dice(fuse_volumes(ph.evidence_a, ph.evidence_b, ef, 0.0).labels(),
                                   ph.ground_truth);
    const double d_a = macro_dice(argmax_labels(ph.evidence_a), ph.ground_truth);
    const double d_b = macro_dice(argmax_labels(ph.evidence_b), ph.ground_truth);
    wins += d_caef >= std::max(d_a, d_b);
    caef_sum += d_caef;
    ef_sum += d_ef;
    a_sum += d_a;
    b_sum += d_b;
  }
  const bool single_ok = wins >= 40;
  const bool ef_ok = caef_sum >= ef_sum;
  return {single_ok && ef_ok,
          format("CAEF >= best single source on %d/%d seeds (need 40) [%s]; mean Dice CAEF %.4f "
                 "vs EF %.4f [%s]; single sources %.4f / %.4f",
                 wins, kSeeds, single_ok ? "ok" : "fail", caef_sum / kSeeds, ef_sum / kSeeds,
                 ef_ok ? "ok" : "fail", a_sum / kSeeds, b_sum / kSeeds)};
}

Outcome demo_benefit() {
  constexpr int kSeeds = 20;
  int wins = 0, medl_decreasing = 0, baseline_decreasing = 0;
  double base_sum = 0.0, medl_sum = 0.0;
  for (int seed = 0; seed < kSeeds; ++seed) {
    demo::DemoConfig cfg;
    cfg.seed = static_cast<std::uint64_t>(seed);
    cfg.labeled_fraction = 0.1;
    const demo::DemoResult r = demo::run_demo(cfg);
    wins += r.medl.report.dice > r.baseline.report.dice;
    base_sum += r.baseline.report.dice;
    medl_sum += r.medl.report.dice;
    medl_decreasing += r.medl.history.back().losses.total < r.medl.history.front().losses.total;
    baseline_decreasing +=
        r.baseline.history.back().losses.total < r.baseline.history.front().losses.total;
  }

  demo::DemoConfig same;
  same.seed = 7;
  same.labeled_fraction = 1.0;
  same.warmup.lambda_max = 0.0;
  const demo::DemoResult r = demo::run_demo(same);
  bool identical = r.baseline.report.dice == r.medl.report.dice &&
                   r.baseline.history.size() == r.medl.history.size();
  for (std::size_t q = 0; identical && q < r.medl.history.size(); ++q) {
    identical = r.baseline.history[q].losses.total == r.medl.history[q].losses.total;
  }

  const bool benefit_ok = wins >= 14;
  return {benefit_ok && identical,
          format("MEDL beats labeled-only on %d/%d seeds (need 14) [%s], mean Dice %.4f vs %.4f; "
                 "fully labeled with no warm-up identical [%s]; total loss fell on %d/%d MEDL "
                 "and %d/%d labeled-only runs",
                 wins, kSeeds, benefit_ok ? "ok" : "fail", medl_sum / kSeeds, base_sum / kSeeds,
                 identical ? "ok" : "fail", medl_decreasing, kSeeds, baseline_decreasing, kSeeds)};
}

Volume random_volume(std::mt19937_64& rng) {
  const Dims d{static_cast<std::uint32_t>(1 + rng() % 9), static_cast<std::uint32_t>(1 + rng() % 9),
               static_cast<std::uint32_t>(1 + rng() % 9)};
  std::uniform_real_distribution<float> sp(0.1f, 4.0f), val(-50.0f, 50.0f), ev(0.0f, 20.0f);
  const Spacing s{sp(rng), sp(rng), sp(rng)};
  switch (rng() % 3) {
    case 0: {
      EvidenceMap e(d, 2 + rng() % 4, s);
      for (float& x : e.data()) x = ev(rng);
      return e;
    }
    case 1: {
      const std::size_t k = 2 + rng() % 6;
      LabelMap l(d, k, s);
      for (std::size_t v = 0; v < l.voxels(); ++v) {
        l[v] = rng() % 10 == 0 ? kContentious : static_cast<std::uint16_t>(rng() % k);
      }
      return l;
    }
    default: {
      ScalarField f(d, s);
      for (float& x : f.values()) x = val(rng);
      return f;
    }
  }
}

std::vector<std::byte> file_bytes(const std::filesystem::path& p) {
  const auto n = std::filesystem::file_size(p);
  std::vector<std::byte> out(n);
  std::FILE* f = std::fopen(p.string().c_str(), "rb");
  if (f == nullptr) return {};
  const std::size_t got = std::fread(out.data(), 1, n, f);
  std::fclose(f);
  out.resize(got);
  return out;
}

std::optional<ErrorCode> error_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

Outcome io_round_trip() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "medl_acceptance_io";
  fs::create_directories(dir);
  std::mt19937_64 rng(11);
  int mismatched = 0;
  for (int i = 0; i < 100; ++i) {
    const Volume v = random_volume(rng);
    const fs::path first = dir / "first.mev", second = dir / "second.mev";
    write_volume(v, first);
    write_volume(read_volume(first), second);
    const auto a = file_bytes(first), b = file_bytes(second);
    mismatched += a != b || a != encode_volume(v);
  }

  const auto good = encode_volume(Volume{EvidenceMap(Dims{2, 2, 2}, 2)});
  auto patched = [&](std::size_t offset, std::uint8_t value) {
    auto bytes = good;
    bytes[offset] = std::byte{value};
    return bytes;
  };
  struct Case {
    const char* name;
    std::vector<std::byte> bytes;
    ErrorCode expected;
  };
  auto bad_magic = good;
  std::memcpy(bad_magic.data(), "XXXX", 4);
  auto huge = good;
  for (std::size_t off : {13u, 17u, 21u}) {
    for (std::size_t b = 0; b < 4; ++b) huge[off + b] = std::byte{0xff};
  }
  std::vector<Case> cases{
      {"bad magic", bad_magic, ErrorCode::kCorruptHeader},
      {"unsupported version", patched(4, 7), ErrorCode::kCorruptHeader},
      {"unknown kind", patched(8, 5), ErrorCode::kCorruptHeader},
      {"unknown dtype", patched(37, 9), ErrorCode::kCorruptHeader},
      {"evidence stored as u16", patched(37, 1), ErrorCode::kKindMismatch},
      {"evidence with K=1", patched(9, 1), ErrorCode::kKindMismatch},
      {"truncated header", std::vector<std::byte>(good.begin(), good.begin() + 30),
       ErrorCode::kSizeMismatch},
      {"15 of 16 floats", std::vector<std::byte>(good.begin(), good.end() - 4),
       ErrorCode::kSizeMismatch},
      {"trailing bytes", [&] { auto b = good; b.push_back(std::byte{0}); return b; }(),
       ErrorCode::kSizeMismatch},
      {"overflowing dims", huge, ErrorCode::kSizeMismatch},
  };
  std::string failed;
  for (const Case& c : cases) {
    const auto code = error_of([&] { decode_volume(c.bytes); });
    if (code != c.expected) failed += std::string(" ") + c.name + ";";
  }
  write_volume(Volume{ScalarField(Dims{2, 2, 2})}, dir / "scalar.mev");
  if (error_of([&] { read_labels(dir / "scalar.mev"); }) != ErrorCode::kKindMismatch) {
    failed += " typed reader;";
  }
  if (error_of([&] { read_volume(dir / "absent.mev"); }) != ErrorCode::kIoFailure) {
    failed += " missing file;";
  }
  fs::remove_all(dir);
  const int malformed = static_cast<int>(cases.size()) + 2;
  return {mismatched == 0 && failed.empty(),
          format("round trips differing: %d/100; malformed cases rejected with the right code: "
                 "%d/%d%s%s",
                 mismatched, malformed - static_cast<int>(std::count(failed.begin(), failed.end(), ';')),
                 malformed, failed.empty() ? "" : " failed:", failed.c_str())};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks"};
  std::vector<int> only;
  app.add_option("--only", only, "criterion ids to run (default: all)");
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria{
      {1, "simplex conservation", 5.0, simplex_conservation},
      {2, "CAEF matches focal-set oracle", 5.0, caef_oracle},
      {3, "vacuous-partner behaviour", 0.0, vacuous_behaviour},
      {4, "reliability range and hand case", 0.0, reliability_range},
      {5, "curriculum weight properties", 0.0, curriculum_properties},
      {6, "I-EDL gradient vs finite differences", 10.0, iedl_gradient},
      {7, "Fisher determinant vs dense oracle", 0.0, fisher_determinant_oracle},
      {8, "surface metrics vs brute force", 0.0, metrics_oracle},
      {9, "fusion beats single sources and EF", 60.0, fusion_helps},
      {10, "semi-supervised demo benefit", 300.0, demo_benefit},
      {11, "volume I/O round trip and rejection", 0.0, io_round_trip},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    const auto start = Clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    const bool in_time = c.budget_s == 0.0 || secs < c.budget_s;
    const bool pass = out.pass && in_time;
    failures += !pass;
    std::printf("[%s] %2d %s: %s (%.2f s%s)\n", pass ? "PASS" : "FAIL", c.id, c.name,
                out.detail.c_str(), secs,
                c.budget_s == 0.0 ? "" : format(", budget %.0f s", c.budget_s).c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
