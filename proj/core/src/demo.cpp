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

#include "medl/demo.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "medl/edl.hpp"
#include "medl/error.hpp"
#include "medl/parallel.hpp"
#include "medl/synth.hpp"
#include "medl/volume_io.hpp"

namespace medl::demo {
namespace {

constexpr std::size_t kNumClasses = 2;
constexpr std::size_t kNetworks = 2;
constexpr std::size_t kFeatures = 5;

// One training or test volume with both networks' feature matrices
// (voxel-major, kFeatures columns).
struct Sample {
  LabelMap truth;
  std::array<std::vector<double>, kNetworks> features;

  std::size_t voxels() const { return truth.voxels(); }
};

std::vector<double> box_mean(const ScalarField& image) {
  const Dims& d = image.dims();
  std::vector<double> out(d.voxels());
  for (long i = 0; i < d.h; ++i)
    for (long j = 0; j < d.w; ++j)
      for (long k = 0; k < d.l; ++k) {
        double sum = 0.0;
        int count = 0;
        for (long di = -1; di <= 1; ++di)
          for (long dj = -1; dj <= 1; ++dj)
            for (long dk = -1; dk <= 1; ++dk) {
              const long ii = i + di, jj = j + dj, kk = k + dk;
              if (ii < 0 || jj < 0 || kk < 0 || ii >= d.h || jj >= d.w || kk >= d.l) continue;
              sum += image[d.index(ii, jj, kk)];
              ++count;
            }
        out[d.index(i, j, k)] = sum / count;
      }
  return out;
}

// Network 1 sees the raw intensity, network 2 a 3x3x3 local mean; both see
// normalized coordinates.
Sample make_sample(const DemoConfig& cfg, std::uint64_t seed) {
  PhantomSpec spec;
  spec.dims = cfg.dims;
  spec.num_classes = kNumClasses;
  spec.blobs_per_class = 3;
  spec.image_noise = cfg.image_noise;
  spec.noise_a = spec.noise_b = 0.0;
  spec.seed = seed;
  Phantom ph = generate_phantom(spec);

  const Dims& d = cfg.dims;
  const std::vector<double> smooth = box_mean(ph.image);
  Sample s{std::move(ph.ground_truth), {}};
  for (auto& f : s.features) f.resize(d.voxels() * kFeatures);
  auto coord = [](std::size_t x, std::uint32_t n) { return 2.0 * x / (n - 1) - 1.0; };
  for (std::size_t i = 0; i < d.h; ++i)
    for (std::size_t j = 0; j < d.w; ++j)
      for (std::size_t k = 0; k < d.l; ++k) {
        const std::size_t v = d.index(i, j, k);
        for (std::size_t net = 0; net < kNetworks; ++net) {
          double* row = &s.features[net][v * kFeatures];
          row[0] = 1.0;
          row[1] = net == 0 ? ph.image[v] : smooth[v];
          row[2] = coord(i, d.h);
          row[3] = coord(j, d.w);
          row[4] = coord(k, d.l);
        }
      }
  return s;
}

struct Forward {
  std::vector<double> logits;  // v * K + c
  std::vector<double> alpha;   // v * K + c
  ClassProbabilities prob;

  DirichletParams dirichlet(std::size_t v) const {
    DirichletParams d;
    d.alpha.assign(alpha.begin() + v * kNumClasses, alpha.begin() + (v + 1) * kNumClasses);
    for (double a : d.alpha) d.strength += a;
    return d;
  }
  Gpma gpma(std::size_t v) const {
    const DirichletParams d = dirichlet(v);
    Gpma m;
    m.singletons.resize(kNumClasses);
    for (std::size_t c = 0; c < kNumClasses; ++c) m.singletons[c] = (d.alpha[c] - 1.0) / d.strength;
    m.multiset = kNumClasses / d.strength;
    m.multiset_cardinality = kNumClasses;
    return m;
  }
};

struct Model {
  std::vector<double> weights = std::vector<double>(kNumClasses * kFeatures, 0.0);

  Forward forward(const std::vector<double>& features, std::size_t voxels) const {
    Forward f;
    f.logits.resize(voxels * kNumClasses);
    f.alpha.resize(voxels * kNumClasses);
    f.prob.num_classes = kNumClasses;
    f.prob.values.resize(voxels * kNumClasses);
    for (std::size_t v = 0; v < voxels; ++v) {
      const double* row = &features[v * kFeatures];
      double strength = 0.0;
      for (std::size_t c = 0; c < kNumClasses; ++c) {
        double z = 0.0;
        for (std::size_t j = 0; j < kFeatures; ++j) z += weights[c * kFeatures + j] * row[j];
        f.logits[v * kNumClasses + c] = z;
        f.alpha[v * kNumClasses + c] = softplus(z) + 1.0;
        strength += f.alpha[v * kNumClasses + c];
      }
      for (std::size_t c = 0; c < kNumClasses; ++c) {
        f.prob.values[v * kNumClasses + c] = f.alpha[v * kNumClasses + c] / strength;
      }
    }
    return f;
  }
};

// Adds d loss / d p into d loss / d alpha: p_c = alpha_c / S.
void chain_probability(const Forward& f, const std::vector<double>& d_prob, double scale,
                       std::vector<double>& d_alpha) {
  const std::size_t voxels = f.prob.voxels();
  for (std::size_t v = 0; v < voxels; ++v) {
    double strength = 0.0, dot = 0.0;
    for (std::size_t c = 0; c < kNumClasses; ++c) {
      strength += f.alpha[v * kNumClasses + c];
      dot += d_prob[v * kNumClasses + c] * f.prob.values[v * kNumClasses + c];
    }
    for (std::size_t c = 0; c < kNumClasses; ++c) {
      d_alpha[v * kNumClasses + c] += scale * (d_prob[v * kNumClasses + c] - dot) / strength;
    }
  }
}

// d alpha / d z = sigmoid(z); d z / d W = features.
void accumulate_weight_grad(const Forward& f, const std::vector<double>& features,
                            const std::vector<double>& d_alpha, std::vector<double>& d_weights) {
  const std::size_t voxels = f.prob.voxels();
  for (std::size_t v = 0; v < voxels; ++v) {
    const double* row = &features[v * kFeatures];
    for (std::size_t c = 0; c < kNumClasses; ++c) {
      const double z = f.logits[v * kNumClasses + c];
      const double dz = d_alpha[v * kNumClasses + c] / (1.0 + std::exp(-z));
      for (std::size_t j = 0; j < kFeatures; ++j) d_weights[c * kFeatures + j] += dz * row[j];
    }
  }
}

std::vector<std::uint16_t> argmax_labels(const ClassProbabilities& p) {
  std::vector<std::uint16_t> out(p.voxels());
  for (std::size_t v = 0; v < out.size(); ++v) {
    out[v] = static_cast<std::uint16_t>(
        argmax(std::span(p.values).subspan(v * kNumClasses, kNumClasses)));
  }
  return out;
}

struct PseudoLabels {
  std::vector<std::uint16_t> labels;
  std::vector<double> reliability;
  std::vector<double> fused_uncertainty;
};

PseudoLabels fuse_predictions(const Forward& a, const Forward& b, const DemoConfig& cfg) {
  const std::size_t voxels = a.prob.voxels();
  PseudoLabels out{std::vector<std::uint16_t>(voxels), std::vector<double>(voxels),
                   std::vector<double>(voxels)};
  for (std::size_t v = 0; v < voxels; ++v) {
    const Gpma fused = fuse(a.gpma(v), b.gpma(v), cfg.fusion.rule);
    const double r = reliability(fused);
    out.reliability[v] = r;
    out.fused_uncertainty[v] = fused.multiset;
    out.labels[v] = r >= cfg.reliability_threshold
                        ? static_cast<std::uint16_t>(argmax(fused.singletons))
                        : kContentious;
  }
  return out;
}

class Trainer {
 public:
  Trainer(const DemoConfig& cfg, const std::vector<Sample>& labeled,
          const std::vector<Sample>& unlabeled, Pipeline pipeline)
      : cfg_(cfg), labeled_(labeled), unlabeled_(unlabeled), pipeline_(pipeline) {
    curriculum_.xi = cfg.xi;
    curriculum_.total_epochs = cfg.epochs;
    curriculum_.order = RankOrder::kAscendingUncertainty;
  }

  LossBreakdown step(std::uint32_t epoch) {
    std::array<std::vector<Forward>, kNetworks> lab_fwd, unl_fwd;
    for (std::size_t net = 0; net < kNetworks; ++net) {
      for (const Sample& s : labeled_) lab_fwd[net].push_back(models_[net].forward(s.features[net], s.voxels()));
      if (pipeline_ == Pipeline::kMedl) {
        for (const Sample& s : unlabeled_) unl_fwd[net].push_back(models_[net].forward(s.features[net], s.voxels()));
      }
    }

    std::vector<PseudoLabels> pseudo;
    std::vector<std::vector<double>> unlabeled_weights;
    for (std::size_t j = 0; j < unl_fwd[0].size(); ++j) {
      pseudo.push_back(fuse_predictions(unl_fwd[0][j], unl_fwd[1][j], cfg_));
      unlabeled_weights.push_back(
          curriculum_weights(pseudo.back().fused_uncertainty, epoch, curriculum_).weights);
    }

    std::array<Objective, kNetworks> objectives;
    std::array<std::vector<double>, kNetworks> grads;
    for (std::size_t net = 0; net < kNetworks; ++net) {
      grads[net].assign(kNumClasses * kFeatures, 0.0);
      objectives[net] = network_step(net, epoch, lab_fwd, unl_fwd, pseudo, unlabeled_weights,
                                     grads[net]);
    }
    for (std::size_t net = 0; net < kNetworks; ++net) {
      for (std::size_t p = 0; p < grads[net].size(); ++p) {
        models_[net].weights[p] -= cfg_.learning_rate * grads[net][p];
      }
    }
    return combine_objectives(objectives[0], objectives[1]);
  }

  // Mean of both networks' probabilities, then argmax.
  LabelMap predict(const Sample& s) const {
    const Forward a = models_[0].forward(s.features[0], s.voxels());
    const Forward b = models_[1].forward(s.features[1], s.voxels());
    ClassProbabilities mean = a.prob;
    for (std::size_t i = 0; i < mean.values.size(); ++i) {
      mean.values[i] = 0.5 * (a.prob.values[i] + b.prob.values[i]);
    }
    return LabelMap(s.truth.dims(), kNumClasses, s.truth.spacing(), argmax_labels(mean));
  }

 private:
  Objective network_step(std::size_t net, std::uint32_t epoch,
                         const std::array<std::vector<Forward>, kNetworks>& lab_fwd,
                         const std::array<std::vector<Forward>, kNetworks>& unl_fwd,
                         const std::vector<PseudoLabels>& pseudo,
                         const std::vector<std::vector<double>>& unlabeled_weights,
                         std::vector<double>& d_weights) const {
    LossParts parts;
    const double lambda_gwu = gaussian_warmup(epoch, cfg_.warmup);

    // Labeled data: Dice + CE, plus the curriculum-weighted per-voxel CE whose
    // ranking uses the blend of own and fused uncertainty.
    std::vector<std::vector<double>> voxel_losses, voxel_weights;
    const double inv_a = 1.0 / static_cast<double>(labeled_.size());
    for (std::size_t i = 0; i < labeled_.size(); ++i) {
      const Forward& f = lab_fwd[net][i];
      const Forward& other = lab_fwd[1 - net][i];
      const auto& y = labeled_[i].truth.labels();
      const std::size_t voxels = labeled_[i].voxels();

      parts.labeled += inv_a * (dice_loss(f.prob, y) + cross_entropy_loss(f.prob, y));

      std::vector<double> blended(voxels), losses(voxels);
      for (std::size_t v = 0; v < voxels; ++v) {
        const Gpma own = f.gpma(v);
        const Gpma fused = net == 0 ? fuse(own, other.gpma(v), cfg_.fusion.rule)
                                    : fuse(other.gpma(v), own, cfg_.fusion.rule);
        blended[v] = blend_uncertainty(own.multiset, fused.multiset, cfg_.fusion);
        losses[v] = -std::log(std::max(f.prob.at(v, y[v]), kProbabilityClamp));
      }
      std::vector<double> omega = curriculum_weights(blended, epoch, curriculum_).weights;

      std::vector<double> d_prob = dice_loss_grad(f.prob, y);
      const std::vector<double> d_ce = cross_entropy_grad(f.prob, y);
      for (std::size_t k = 0; k < d_prob.size(); ++k) d_prob[k] = inv_a * (d_prob[k] + d_ce[k]);
      for (std::size_t v = 0; v < voxels; ++v) {
        const double p = f.prob.at(v, y[v]);
        if (p > kProbabilityClamp) {
          d_prob[v * kNumClasses + y[v]] -= omega[v] / (static_cast<double>(voxels) * p);
        }
      }
      std::vector<double> d_alpha(d_prob.size(), 0.0);
      chain_probability(f, d_prob, 1.0, d_alpha);
      accumulate_weight_grad(f, labeled_[i].features[net], d_alpha, d_weights);

      voxel_losses.push_back(std::move(losses));
      voxel_weights.push_back(std::move(omega));
    }
    parts.weighted_labeled = aggregate_weighted_labeled(voxel_losses, voxel_weights);

    // Unlabeled data: reliability-weighted Dice + CE against the fused
    // pseudo-labels and the curriculum-weighted Fisher evidential term.
    if (pipeline_ == Pipeline::kMedl && !unlabeled_.empty()) {
      const double inv_b = 1.0 / static_cast<double>(unlabeled_.size());
      std::vector<std::vector<double>> iedl_losses;
      for (std::size_t j = 0; j < unlabeled_.size(); ++j) {
        const Forward& f = unl_fwd[net][j];
        const PseudoLabels& pl = pseudo[j];
        const std::size_t voxels = unlabeled_[j].voxels();

        parts.unlabeled += inv_b * (dice_loss(f.prob, pl.labels, pl.reliability) +
                                    cross_entropy_loss(f.prob, pl.labels, pl.reliability));
        std::vector<double> d_prob = dice_loss_grad(f.prob, pl.labels, pl.reliability);
        const std::vector<double> d_ce = cross_entropy_grad(f.prob, pl.labels, pl.reliability);
        for (std::size_t k = 0; k < d_prob.size(); ++k) d_prob[k] = inv_b * (d_prob[k] + d_ce[k]);

        std::vector<double> d_alpha(d_prob.size(), 0.0);
        chain_probability(f, d_prob, 1.0, d_alpha);

        std::vector<double> losses(voxels, 0.0);
        std::array<double, kNumClasses> onehot{};
        for (std::size_t v = 0; v < voxels; ++v) {
          if (pl.labels[v] == kContentious) continue;
          onehot.fill(0.0);
          onehot[pl.labels[v]] = 1.0;
          const DirichletParams alpha = f.dirichlet(v);
          const double w = unlabeled_weights[j][v];
          losses[v] = iedl_voxel_loss(alpha, onehot, w, cfg_.iedl);
          if (lambda_gwu > 0.0) {
            const std::vector<double> g = iedl_voxel_grad(alpha, onehot, w, cfg_.iedl);
            for (std::size_t c = 0; c < kNumClasses; ++c) {
              d_alpha[v * kNumClasses + c] += lambda_gwu * g[c] / static_cast<double>(voxels);
            }
          }
        }
        accumulate_weight_grad(f, unlabeled_[j].features[net], d_alpha, d_weights);
        iedl_losses.push_back(std::move(losses));
      }
      parts.iedl_unlabeled = aggregate_unlabeled_iedl(iedl_losses);
    }
    return total_objective(parts, epoch, cfg_.warmup);
  }

  const DemoConfig& cfg_;
  const std::vector<Sample>& labeled_;
  const std::vector<Sample>& unlabeled_;
  Pipeline pipeline_;
  CurriculumConfig curriculum_;
  std::array<Model, kNetworks> models_{};
};

PipelineResult train(const DemoConfig& cfg, const std::vector<Sample>& labeled,
                     const std::vector<Sample>& unlabeled, const Sample& test, Pipeline pipeline) {
  Trainer trainer(cfg, labeled, unlabeled, pipeline);
  PipelineResult result;
  for (std::uint32_t q = 1; q <= cfg.epochs; ++q) result.history.push_back({q, trainer.step(q)});
  const LabelMap pred = trainer.predict(test);
  result.report = evaluate(BinaryMask::from_labels(pred, 1), BinaryMask::from_labels(test.truth, 1));
  return result;
}

}  // namespace

void DemoConfig::validate() const {
  if (epochs < 1) fail(ErrorCode::kDomain, "demo needs at least one epoch");
  if (!(labeled_fraction > 0.0 && labeled_fraction <= 1.0)) {
    fail(ErrorCode::kDomain, "labeled fraction must lie in (0, 1]");
  }
  if (train_volumes < 1) fail(ErrorCode::kDomain, "demo needs at least one training volume");
  if (!(learning_rate > 0.0)) fail(ErrorCode::kDomain, "learning rate must be > 0");
  if (!(xi > 0.0 && xi <= 1.0)) fail(ErrorCode::kDomain, "xi must lie in (0, 1]");
  fusion.validate();
  iedl.validate();
  warmup.validate();
}

DemoResult run_demo(const DemoConfig& cfg) {
  cfg.validate();
  const auto labeled_count = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::lround(cfg.labeled_fraction * cfg.train_volumes)), 1,
      cfg.train_volumes);

  std::vector<Sample> labeled, unlabeled;
  const std::uint64_t base = cfg.seed * 1000;
  for (std::size_t n = 0; n < cfg.train_volumes; ++n) {
    (n < labeled_count ? labeled : unlabeled).push_back(make_sample(cfg, base + n));
  }
  const Sample test = make_sample(cfg, base + 999);

  DemoResult result;
  result.labeled_volumes = labeled.size();
  result.unlabeled_volumes = unlabeled.size();
  std::array<PipelineResult*, 2> outs{&result.baseline, &result.medl};
  const std::array<Pipeline, 2> pipelines{Pipeline::kLabeledOnly, Pipeline::kMedl};
  parallel_for(2, std::min<std::size_t>(cfg.threads, 2), [&](std::size_t begin, std::size_t end) {
    for (std::size_t p = begin; p < end; ++p) *outs[p] = train(cfg, labeled, unlabeled, test, pipelines[p]);
  });
  return result;
}

}  // namespace medl::demo
