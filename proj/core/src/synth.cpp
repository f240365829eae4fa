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

#include "medl/synth.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/special_functions/erf.hpp>

#include "medl/error.hpp"

namespace medl {
namespace {

constexpr std::uint32_t kMinExtent = 8;
constexpr double kBlurAttenuation = 0.5;
constexpr int kBlurRadius = 2;
constexpr double kSwapStrength = 0.8;

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double normal_quantile(double p) {
  return -std::sqrt(2.0) * boost::math::erfc_inv(2.0 * p);
}

struct Ellipsoid {
  double ci, cj, ck, ri, rj, rk;

  bool contains(std::size_t i, std::size_t j, std::size_t k) const {
    const double di = (i - ci) / ri, dj = (j - cj) / rj, dk = (k - ck) / rk;
    return di * di + dj * dj + dk * dk <= 1.0;
  }
};

LabelMap paint_ground_truth(const PhantomSpec& spec, PortableRng& rng) {
  const Dims& d = spec.dims;
  LabelMap gt(d, spec.num_classes);
  const double min_extent = std::min({d.h, d.w, d.l});
  for (std::size_t c = 1; c < spec.num_classes; ++c) {
    for (std::size_t b = 0; b < spec.blobs_per_class; ++b) {
      Ellipsoid e{};
      e.ri = rng.uniform(min_extent / 8.0, min_extent / 4.0);
      e.rj = rng.uniform(min_extent / 8.0, min_extent / 4.0);
      e.rk = rng.uniform(min_extent / 8.0, min_extent / 4.0);
      e.ci = rng.uniform(e.ri, d.h - 1 - e.ri);
      e.cj = rng.uniform(e.rj, d.w - 1 - e.rj);
      e.ck = rng.uniform(e.rk, d.l - 1 - e.rk);
      for (std::size_t i = 0; i < d.h; ++i)
        for (std::size_t j = 0; j < d.w; ++j)
          for (std::size_t k = 0; k < d.l; ++k)
            if (e.contains(i, j, k)) gt[d.index(i, j, k)] = static_cast<std::uint16_t>(c);
    }
  }
  return gt;
}

// Noiseless evidence of one source, channels-major like EvidenceMap.
std::vector<double> clean_evidence(const PhantomSpec& spec, const LabelMap& gt, SourceBias bias,
                                   PortableRng& rng) {
  const Dims& d = spec.dims;
  const std::size_t n = d.voxels();
  const std::size_t k = spec.num_classes;
  std::vector<double> e(n * k, 0.0);
  for (std::size_t v = 0; v < n; ++v) e[gt[v] * n + v] = spec.gain;

  if (bias == SourceBias::kBoundaryBlur) {
    const int r = kBlurRadius;
    for (std::size_t i = 0; i < d.h; ++i) {
      for (std::size_t j = 0; j < d.w; ++j) {
        for (std::size_t l = 0; l < d.l; ++l) {
          std::vector<double> counts(k, 0.0);
          double total = 0.0;
          for (int di = -r; di <= r; ++di)
            for (int dj = -r; dj <= r; ++dj)
              for (int dl = -r; dl <= r; ++dl) {
                const long ii = static_cast<long>(i) + di, jj = static_cast<long>(j) + dj,
                           ll = static_cast<long>(l) + dl;
                if (ii < 0 || jj < 0 || ll < 0 || ii >= d.h || jj >= d.w || ll >= d.l) continue;
                counts[gt[d.index(ii, jj, ll)]] += 1.0;
                total += 1.0;
              }
          const std::size_t v = d.index(i, j, l);
          if (counts[gt[v]] == total) continue;  // interior voxel, untouched
          for (std::size_t c = 0; c < k; ++c) {
            e[c * n + v] = spec.gain * kBlurAttenuation * counts[c] / total;
          }
        }
      }
    }
  } else if (bias == SourceBias::kClassSwapPatch) {
    const std::uint32_t side = std::max<std::uint32_t>(2, std::min({d.h, d.w, d.l}) / 3);
    const std::size_t pi = rng.index(d.h - side + 1);
    const std::size_t pj = rng.index(d.w - side + 1);
    const std::size_t pl = rng.index(d.l - side + 1);
    for (std::size_t i = pi; i < pi + side; ++i)
      for (std::size_t j = pj; j < pj + side; ++j)
        for (std::size_t l = pl; l < pl + side; ++l) {
          const std::size_t v = d.index(i, j, l);
          const std::size_t truth = gt[v];
          e[truth * n + v] = 0.0;
          e[((truth + 1) % k) * n + v] = spec.gain * kSwapStrength;
        }
  }
  return e;
}

EvidenceMap noisy_source(const PhantomSpec& spec, const LabelMap& gt, SourceBias bias,
                         double sigma, PortableRng& rng) {
  const std::vector<double> clean = clean_evidence(spec, gt, bias, rng);
  EvidenceMap out(spec.dims, spec.num_classes);
  for (std::size_t idx = 0; idx < clean.size(); ++idx) {
    const double noise = sigma > 0.0 ? sigma * rng.truncated_normal() : 0.0;
    out.data()[idx] = static_cast<float>(std::max(0.0, clean[idx] + noise));
  }
  return out;
}

}  // namespace

double PortableRng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double PortableRng::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform();
}

std::size_t PortableRng::index(std::size_t n) {
  return std::min(n - 1, static_cast<std::size_t>(uniform() * static_cast<double>(n)));
}

double PortableRng::truncated_normal(double bound) {
  const double lo = normal_cdf(-bound);
  const double hi = normal_cdf(bound);
  return normal_quantile(lo + (hi - lo) * uniform());
}

void PhantomSpec::validate() const {
  if (dims.h < kMinExtent || dims.w < kMinExtent || dims.l < kMinExtent) {
    fail(ErrorCode::kDomain, "phantom dims must be at least 8 along every axis");
  }
  if (num_classes < 2 || num_classes >= kContentious) {
    fail(ErrorCode::kDomain, "phantom needs between 2 and 65534 classes");
  }
  for (double s : {noise_a, noise_b, image_noise}) {
    if (!(s >= 0.0) || !std::isfinite(s)) fail(ErrorCode::kDomain, "noise levels must be >= 0");
  }
  if (!(gain > 0.0) || !std::isfinite(gain)) fail(ErrorCode::kDomain, "gain must be > 0");
}

Phantom generate_phantom(const PhantomSpec& spec) {
  spec.validate();
  PortableRng rng(spec.seed);
  LabelMap gt = paint_ground_truth(spec, rng);
  EvidenceMap a = noisy_source(spec, gt, spec.bias_a, spec.noise_a, rng);
  EvidenceMap b = noisy_source(spec, gt, spec.bias_b, spec.noise_b, rng);

  ScalarField image(spec.dims);
  const double levels = static_cast<double>(spec.num_classes - 1);
  for (std::size_t v = 0; v < image.voxels(); ++v) {
    const double noise = spec.image_noise > 0.0 ? spec.image_noise * rng.truncated_normal() : 0.0;
    image[v] = static_cast<float>(gt[v] / levels + noise);
  }
  return Phantom{std::move(gt), std::move(a), std::move(b), std::move(image)};
}

}  // namespace medl
