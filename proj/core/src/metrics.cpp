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

#include "medl/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include "medl/error.hpp"

namespace medl {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kBruteForceLimit = 16 * 16 * 16;

void check_same_dims(const BinaryMask& a, const BinaryMask& b) {
  if (a.dims() != b.dims()) fail(ErrorCode::kShapeMismatch, "mask dims differ");
}

struct Overlap {
  std::size_t pred = 0, gt = 0, both = 0;
};

Overlap overlap(const BinaryMask& pred, const BinaryMask& gt) {
  check_same_dims(pred, gt);
  Overlap o;
  for (std::size_t v = 0; v < pred.voxels(); ++v) {
    o.pred += pred[v];
    o.gt += gt[v];
    o.both += pred[v] && gt[v];
  }
  return o;
}

std::array<double, 3> position_mm(const Dims& d, const Spacing& s, std::size_t v) {
  const std::size_t k = v % d.l;
  const std::size_t j = (v / d.l) % d.w;
  const std::size_t i = v / (static_cast<std::size_t>(d.l) * d.w);
  return {i * static_cast<double>(s.x), j * static_cast<double>(s.y),
          k * static_cast<double>(s.z)};
}

std::vector<double> nearest_brute_force(const BinaryMask& from_mask,
                                        const std::vector<std::size_t>& from,
                                        const std::vector<std::size_t>& to) {
  const Dims& d = from_mask.dims();
  const Spacing& s = from_mask.spacing();
  std::vector<std::array<double, 3>> targets;
  targets.reserve(to.size());
  for (std::size_t v : to) targets.push_back(position_mm(d, s, v));

  std::vector<double> out;
  out.reserve(from.size());
  for (std::size_t v : from) {
    const auto p = position_mm(d, s, v);
    double best = kInf;
    for (const auto& q : targets) {
      const double dx = p[0] - q[0], dy = p[1] - q[1], dz = p[2] - q[2];
      best = std::min(best, dx * dx + dy * dy + dz * dz);
    }
    out.push_back(std::sqrt(best));
  }
  return out;
}

// Lower envelope of parabolas (Felzenszwalb & Huttenlocher) along one line of
// n samples at stride `stride`, sample spacing `step` mm.
void squared_distance_1d(std::vector<double>& grid, std::size_t offset, std::size_t stride,
                         std::size_t n, double step, std::vector<double>& f,
                         std::vector<std::size_t>& site, std::vector<double>& bound) {
  f.resize(n);
  for (std::size_t q = 0; q < n; ++q) f[q] = grid[offset + q * stride];

  site.resize(n);
  bound.resize(n + 1);
  std::size_t hull = 0;
  bool any = false;
  for (std::size_t q = 0; q < n; ++q) {
    if (f[q] == kInf) continue;
    const double xq = q * step;
    if (!any) {
      site[0] = q;
      bound[0] = -kInf;
      bound[1] = kInf;
      any = true;
      continue;
    }
    double cross;
    while (true) {
      const double xv = site[hull] * step;
      cross = ((f[q] + xq * xq) - (f[site[hull]] + xv * xv)) / (2.0 * (xq - xv));
      if (cross <= bound[hull] && hull > 0) {
        --hull;
      } else {
        break;
      }
    }
    ++hull;
    site[hull] = q;
    bound[hull] = cross;
    bound[hull + 1] = kInf;
  }
  if (!any) return;

  std::size_t h = 0;
  for (std::size_t q = 0; q < n; ++q) {
    const double xq = q * step;
    while (bound[h + 1] < xq) ++h;
    const double dx = xq - site[h] * step;
    grid[offset + q * stride] = dx * dx + f[site[h]];
  }
}

// Squared distance (mm^2) from every voxel to the nearest seed voxel.
std::vector<double> squared_distance_transform(const Dims& d, const Spacing& s,
                                               const std::vector<std::size_t>& seeds) {
  std::vector<double> grid(d.voxels(), kInf);
  for (std::size_t v : seeds) grid[v] = 0.0;

  std::vector<double> f, bound;
  std::vector<std::size_t> site;
  for (std::size_t i = 0; i < d.h; ++i)
    for (std::size_t j = 0; j < d.w; ++j)
      squared_distance_1d(grid, d.index(i, j, 0), 1, d.l, s.z, f, site, bound);
  for (std::size_t i = 0; i < d.h; ++i)
    for (std::size_t k = 0; k < d.l; ++k)
      squared_distance_1d(grid, d.index(i, 0, k), d.l, d.w, s.y, f, site, bound);
  for (std::size_t j = 0; j < d.w; ++j)
    for (std::size_t k = 0; k < d.l; ++k)
      squared_distance_1d(grid, d.index(0, j, k), static_cast<std::size_t>(d.w) * d.l, d.h, s.x,
                          f, site, bound);
  return grid;
}

std::vector<double> nearest_transform(const Dims& d, const Spacing& s,
                                      const std::vector<std::size_t>& from,
                                      const std::vector<std::size_t>& to) {
  const std::vector<double> sq = squared_distance_transform(d, s, to);
  std::vector<double> out;
  out.reserve(from.size());
  for (std::size_t v : from) out.push_back(std::sqrt(sq[v]));
  return out;
}

}  // namespace

BinaryMask::BinaryMask(Dims dims, Spacing spacing)
    : BinaryMask(dims, spacing, std::vector<std::uint8_t>(dims.voxels(), 0)) {}

BinaryMask::BinaryMask(Dims dims, Spacing spacing, std::vector<std::uint8_t> bits)
    : dims_(dims), spacing_(spacing), bits_(std::move(bits)) {
  if (bits_.size() != dims_.voxels()) {
    fail(ErrorCode::kShapeMismatch, "mask bit count does not match dims");
  }
  if (!(spacing_.x > 0.0f && spacing_.y > 0.0f && spacing_.z > 0.0f)) {
    fail(ErrorCode::kDomain, "voxel spacing must be positive");
  }
}

BinaryMask BinaryMask::from_labels(const LabelMap& labels, std::uint16_t label) {
  std::vector<std::uint8_t> bits(labels.voxels());
  for (std::size_t v = 0; v < bits.size(); ++v) bits[v] = labels[v] == label ? 1 : 0;
  return BinaryMask(labels.dims(), labels.spacing(), std::move(bits));
}

std::size_t BinaryMask::count() const noexcept {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

double dice(const BinaryMask& pred, const BinaryMask& gt) {
  const Overlap o = overlap(pred, gt);
  if (o.pred + o.gt == 0) return 1.0;
  return 2.0 * static_cast<double>(o.both) / static_cast<double>(o.pred + o.gt);
}

double jaccard(const BinaryMask& pred, const BinaryMask& gt) {
  const Overlap o = overlap(pred, gt);
  const std::size_t uni = o.pred + o.gt - o.both;
  if (uni == 0) return 1.0;
  return static_cast<double>(o.both) / static_cast<double>(uni);
}

std::vector<std::size_t> surface_voxels(const BinaryMask& mask) {
  const Dims& d = mask.dims();
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < d.h; ++i) {
    for (std::size_t j = 0; j < d.w; ++j) {
      for (std::size_t k = 0; k < d.l; ++k) {
        if (!mask.at(i, j, k)) continue;
        const bool boundary = i == 0 || j == 0 || k == 0 || i + 1 == d.h || j + 1 == d.w ||
                              k + 1 == d.l || !mask.at(i - 1, j, k) || !mask.at(i + 1, j, k) ||
                              !mask.at(i, j - 1, k) || !mask.at(i, j + 1, k) ||
                              !mask.at(i, j, k - 1) || !mask.at(i, j, k + 1);
        if (boundary) out.push_back(d.index(i, j, k));
      }
    }
  }
  return out;
}

SurfaceDistances surface_distances(const BinaryMask& pred, const BinaryMask& gt,
                                   DistanceMethod method) {
  check_same_dims(pred, gt);
  if (pred.empty() || gt.empty()) {
    fail(ErrorCode::kEmptyMask, "surface distances are undefined for an empty mask");
  }
  const auto pred_surface = surface_voxels(pred);
  const auto gt_surface = surface_voxels(gt);

  if (method == DistanceMethod::kAuto) {
    method = pred.voxels() < kBruteForceLimit ? DistanceMethod::kBruteForce
                                              : DistanceMethod::kDistanceTransform;
  }
  SurfaceDistances out;
  if (method == DistanceMethod::kBruteForce) {
    out.pred_to_gt = nearest_brute_force(pred, pred_surface, gt_surface);
    out.gt_to_pred = nearest_brute_force(pred, gt_surface, pred_surface);
  } else {
    out.pred_to_gt = nearest_transform(pred.dims(), pred.spacing(), pred_surface, gt_surface);
    out.gt_to_pred = nearest_transform(pred.dims(), pred.spacing(), gt_surface, pred_surface);
  }
  return out;
}

double percentile(std::vector<double> values, double q) {
  if (values.empty()) fail(ErrorCode::kDomain, "percentile of an empty set");
  if (!(q >= 0.0 && q <= 1.0)) fail(ErrorCode::kDomain, "percentile rank must lie in [0,1]");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

double hd95(const SurfaceDistances& d) {
  return std::max(percentile(d.pred_to_gt, 0.95), percentile(d.gt_to_pred, 0.95));
}

double asd(const SurfaceDistances& d) {
  const double total = std::accumulate(d.pred_to_gt.begin(), d.pred_to_gt.end(), 0.0) +
                       std::accumulate(d.gt_to_pred.begin(), d.gt_to_pred.end(), 0.0);
  return total / static_cast<double>(d.pred_to_gt.size() + d.gt_to_pred.size());
}

double hd95(const BinaryMask& pred, const BinaryMask& gt) {
  return hd95(surface_distances(pred, gt));
}

double asd(const BinaryMask& pred, const BinaryMask& gt) {
  return asd(surface_distances(pred, gt));
}

MetricReport evaluate(const BinaryMask& pred, const BinaryMask& gt) {
  MetricReport r;
  r.dice = dice(pred, gt);
  r.jaccard = jaccard(pred, gt);
  if (!pred.empty() && !gt.empty()) {
    const SurfaceDistances d = surface_distances(pred, gt);
    r.hd95 = hd95(d);
    r.asd = asd(d);
  }
  return r;
}

}  // namespace medl
