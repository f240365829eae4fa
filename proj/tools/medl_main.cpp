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

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "medl/curriculum.hpp"
#include "medl/demo.hpp"
#include "medl/error.hpp"
#include "medl/fusion.hpp"
#include "medl/metrics.hpp"
#include "medl/parallel.hpp"
#include "medl/synth.hpp"
#include "medl/volume_io.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json number_or_null(const std::optional<double>& x) {
  return x ? json(*x) : json(nullptr);
}

json report_json(const medl::MetricReport& r) {
  return json{{"dice", r.dice}, {"jaccard", r.jaccard}, {"hd95", number_or_null(r.hd95)},
              {"asd", number_or_null(r.asd)}};
}

std::string fmt_metric(const std::optional<double>& x) {
  if (!x) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", *x);
  return buf;
}

// ---- fuse ----------------------------------------------------------------

struct FuseArgs {
  std::string a, b, rule = "caef", out, reliability, uncertainty;
  double threshold = 0.0;
  bool softplus = false;
};

void add_fuse(CLI::App& app, FuseArgs& args) {
  app.add_option("--a", args.a, "evidence volume of the first network")->required();
  app.add_option("--b", args.b, "evidence volume of the second network")->required();
  app.add_option("--rule", args.rule, "fusion rule")
      ->check(CLI::IsMember({"caef", "ef"}))
      ->capture_default_str();
  app.add_option("--threshold", args.threshold, "reliability below which a voxel is contentious")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  app.add_option("--out", args.out, "output label volume")->required();
  app.add_option("--reliability", args.reliability, "output reliability volume")->required();
  app.add_option("--uncertainty", args.uncertainty, "optional output of the fused multi-set mass");
  app.add_flag("--softplus", args.softplus, "inputs hold raw logits; map through softplus on load");
}

int run_fuse(const FuseArgs& args, std::optional<std::size_t> threads) {
  const medl::EvidenceMap a = medl::read_evidence(args.a, args.softplus);
  const medl::EvidenceMap b = medl::read_evidence(args.b, args.softplus);
  medl::FusionConfig cfg;
  cfg.rule = args.rule == "ef" ? medl::FusionRule::kEf : medl::FusionRule::kCaef;
  const medl::FusedLabelMap fused = medl::fuse_volumes(a, b, cfg, args.threshold, threads);

  const medl::LabelMap labels = fused.labels();
  medl::write_volume(labels, args.out);
  medl::write_volume(fused.reliability_field(), args.reliability);
  if (!args.uncertainty.empty()) medl::write_volume(fused.uncertainty_field(), args.uncertainty);

  std::size_t contentious = 0;
  for (auto l : labels.labels()) contentious += l == medl::kContentious;
  std::cerr << "fused " << labels.voxels() << " voxels, " << contentious << " contentious\n";
  return kExitOk;
}

// ---- weights -------------------------------------------------------------

struct WeightsArgs {
  std::string uncertainty, out, order = "asc";
  std::uint32_t epoch = 1, total_epochs = 0;
  double xi = 1.0;
};

void add_weights(CLI::App& app, WeightsArgs& args) {
  app.add_option("--uncertainty", args.uncertainty, "scalar uncertainty volume")->required();
  app.add_option("--epoch", args.epoch, "current epoch, 1-based")->required();
  app.add_option("--total-epochs", args.total_epochs, "total number of epochs")->required();
  app.add_option("--xi", args.xi, "weight amplitude in (0, 1]")->capture_default_str();
  app.add_option("--order", args.order, "rank order: asc puts the least uncertain voxel first")
      ->check(CLI::IsMember({"asc", "desc"}))
      ->capture_default_str();
  app.add_option("--out", args.out, "output weight volume")->required();
}

int run_weights(const WeightsArgs& args) {
  if (args.total_epochs == 0) throw UsageError("--total-epochs must be at least 1");
  if (args.epoch < 1 || args.epoch > args.total_epochs) {
    throw UsageError("--epoch must lie in [1, --total-epochs]");
  }
  if (!(args.xi > 0.0 && args.xi <= 1.0)) throw UsageError("--xi must lie in (0, 1]");
  medl::CurriculumConfig cfg;
  cfg.xi = args.xi;
  cfg.total_epochs = args.total_epochs;
  cfg.order = args.order == "desc" ? medl::RankOrder::kDescendingUncertainty
                                   : medl::RankOrder::kAscendingUncertainty;
  const medl::ScalarField u = medl::read_scalar_field(args.uncertainty);
  medl::write_volume(medl::curriculum_weights(u, args.epoch, cfg), args.out);
  return kExitOk;
}

// ---- metrics -------------------------------------------------------------

struct MetricsArgs {
  std::string pred, gt;
  std::uint16_t label = 1;
  bool json_only = false;
};

void add_metrics(CLI::App& app, MetricsArgs& args) {
  app.add_option("--pred", args.pred, "predicted label volume")->required();
  app.add_option("--gt", args.gt, "ground-truth label volume")->required();
  app.add_option("--class", args.label, "class to evaluate")->required();
  app.add_flag("--json", args.json_only, "print only the JSON report");
}

int run_metrics(const MetricsArgs& args) {
  const medl::LabelMap pred = medl::read_labels(args.pred);
  const medl::LabelMap gt = medl::read_labels(args.gt);
  if (!(pred.dims() == gt.dims())) {
    medl::fail(medl::ErrorCode::kShapeMismatch, "prediction and ground truth differ in dims");
  }
  if (!(pred.spacing() == gt.spacing())) {
    medl::fail(medl::ErrorCode::kShapeMismatch, "prediction and ground truth differ in spacing");
  }
  const auto p = medl::BinaryMask::from_labels(pred, args.label);
  const auto g = medl::BinaryMask::from_labels(gt, args.label);
  if (p.empty() || g.empty()) {
    std::cerr << "warning: class " << args.label << " is empty in the "
              << (g.empty() ? "ground truth" : "prediction")
              << "; surface distances are undefined\n";
  }
  const medl::MetricReport r = medl::evaluate(p, g);

  json out = report_json(r);
  out["class"] = args.label;
  out["voxels_pred"] = p.count();
  out["voxels_gt"] = g.count();
  std::cout << out.dump(2) << '\n';
  if (!args.json_only) {
    std::printf("\n%-10s %12s\n", "metric", "value");
    std::printf("%-10s %12.6f\n", "dice", r.dice);
    std::printf("%-10s %12.6f\n", "jaccard", r.jaccard);
    std::printf("%-10s %12s\n", "hd95_mm", fmt_metric(r.hd95).c_str());
    std::printf("%-10s %12s\n", "asd_mm", fmt_metric(r.asd).c_str());
  }
  return kExitOk;
}

// ---- demo ----------------------------------------------------------------

struct DemoArgs {
  std::uint64_t seed = 0;
  std::uint32_t epochs = 50;
  double labeled_frac = 0.1;
  std::optional<double> lambda_max;
  bool json_only = false;
};

void add_demo(CLI::App& app, DemoArgs& args) {
  app.add_option("--seed", args.seed, "phantom seed")->capture_default_str();
  app.add_option("--epochs", args.epochs, "training epochs")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--labeled-frac", args.labeled_frac, "fraction of training volumes with labels")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  app.add_option("--lambda-max", args.lambda_max, "plateau of the warm-up coefficient");
  app.add_flag("--json", args.json_only, "print one JSON document instead of tables");
}

json history_json(const medl::demo::PipelineResult& r) {
  json rows = json::array();
  for (const auto& log : r.history) {
    const auto& f = log.losses.first;
    const auto& s = log.losses.second;
    rows.push_back({{"epoch", log.epoch},
                    {"l_labeled_n1", f.parts.labeled},
                    {"l_labeled_n2", s.parts.labeled},
                    {"l_unlabeled_n1", f.parts.unlabeled},
                    {"l_unlabeled_n2", s.parts.unlabeled},
                    {"l_weighted_labeled", f.parts.weighted_labeled + s.parts.weighted_labeled},
                    {"l_iedl_unlabeled", f.parts.iedl_unlabeled + s.parts.iedl_unlabeled},
                    {"lambda_gwu", f.lambda_gwu},
                    {"total", log.losses.total}});
  }
  return rows;
}

void print_history(const char* name, const medl::demo::PipelineResult& r) {
  std::printf("\n[%s]\n%5s %10s %10s %10s %10s %10s %10s %8s %10s\n", name, "epoch", "l_n1", "l_n2",
              "u_n1", "u_n2", "w_l", "iedl_u", "gwu", "total");
  for (const auto& log : r.history) {
    const auto& f = log.losses.first;
    const auto& s = log.losses.second;
    std::printf("%5u %10.5f %10.5f %10.5f %10.5f %10.5f %10.5f %8.4f %10.5f\n", log.epoch,
                f.parts.labeled, s.parts.labeled, f.parts.unlabeled, s.parts.unlabeled,
                f.parts.weighted_labeled + s.parts.weighted_labeled,
                f.parts.iedl_unlabeled + s.parts.iedl_unlabeled, f.lambda_gwu, log.losses.total);
  }
}

int run_demo(const DemoArgs& args, std::optional<std::size_t> threads) {
  medl::demo::DemoConfig cfg;
  cfg.seed = args.seed;
  cfg.epochs = args.epochs;
  cfg.labeled_fraction = args.labeled_frac;
  if (args.lambda_max) cfg.warmup.lambda_max = *args.lambda_max;
  cfg.threads = medl::resolve_threads(threads);
  const medl::demo::DemoResult r = medl::demo::run_demo(cfg);

  if (args.json_only) {
    json out{{"seed", args.seed},
             {"labeled_volumes", r.labeled_volumes},
             {"unlabeled_volumes", r.unlabeled_volumes},
             {"labeled_only", {{"history", history_json(r.baseline)}, {"report", report_json(r.baseline.report)}}},
             {"medl", {{"history", history_json(r.medl)}, {"report", report_json(r.medl.report)}}}};
    std::cout << out.dump(2) << '\n';
    return kExitOk;
  }
  std::printf("seed %llu: %zu labeled, %zu unlabeled training volumes\n",
              static_cast<unsigned long long>(args.seed), r.labeled_volumes, r.unlabeled_volumes);
  print_history("labeled-only", r.baseline);
  print_history("medl", r.medl);
  std::printf("\n%-14s %10s %10s %10s %10s\n", "pipeline", "dice", "jaccard", "hd95_mm", "asd_mm");
  for (const auto& [name, res] : {std::pair{"labeled-only", &r.baseline}, std::pair{"medl", &r.medl}}) {
    std::printf("%-14s %10.6f %10.6f %10s %10s\n", name, res->report.dice, res->report.jaccard,
                fmt_metric(res->report.hd95).c_str(), fmt_metric(res->report.asd).c_str());
  }
  return kExitOk;
}

// ---- synth ---------------------------------------------------------------

struct SynthArgs {
  std::string out_dir;
  std::uint64_t seed = 0;
  std::vector<std::uint32_t> dims{32, 32, 32};
  std::size_t classes = 3;
  std::size_t blobs = 2;
  double gain = 3.0, noise_a = 0.5, noise_b = 0.5;
  std::string bias_a = "none", bias_b = "none";
};

medl::SourceBias parse_bias(const std::string& s) {
  if (s == "blur") return medl::SourceBias::kBoundaryBlur;
  if (s == "swap") return medl::SourceBias::kClassSwapPatch;
  return medl::SourceBias::kNone;
}

void add_synth(CLI::App& app, SynthArgs& args) {
  app.add_option("--out-dir", args.out_dir, "directory for gt.mev, evidence_a.mev, evidence_b.mev")
      ->required();
  app.add_option("--seed", args.seed)->capture_default_str();
  app.add_option("--dims", args.dims, "H W L")->expected(3)->capture_default_str();
  app.add_option("--classes", args.classes)->capture_default_str();
  app.add_option("--blobs", args.blobs, "ellipsoids per foreground class")->capture_default_str();
  app.add_option("--gain", args.gain)->capture_default_str();
  app.add_option("--noise-a", args.noise_a)->capture_default_str();
  app.add_option("--noise-b", args.noise_b)->capture_default_str();
  const auto biases = CLI::IsMember({"none", "blur", "swap"});
  app.add_option("--bias-a", args.bias_a)->check(biases)->capture_default_str();
  app.add_option("--bias-b", args.bias_b)->check(biases)->capture_default_str();
}

int run_synth(const SynthArgs& args) {
  medl::PhantomSpec spec;
  spec.dims = {args.dims[0], args.dims[1], args.dims[2]};
  spec.num_classes = args.classes;
  spec.blobs_per_class = args.blobs;
  spec.gain = args.gain;
  spec.noise_a = args.noise_a;
  spec.noise_b = args.noise_b;
  spec.bias_a = parse_bias(args.bias_a);
  spec.bias_b = parse_bias(args.bias_b);
  spec.seed = args.seed;
  const medl::Phantom ph = medl::generate_phantom(spec);

  const fs::path dir(args.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) medl::fail(medl::ErrorCode::kIoFailure, "cannot create " + dir.string());
  medl::write_volume(ph.ground_truth, dir / "gt.mev");
  medl::write_volume(ph.evidence_a, dir / "evidence_a.mev");
  medl::write_volume(ph.evidence_b, dir / "evidence_b.mev");
  return kExitOk;
}

// ---- export-csv ----------------------------------------------------------

struct CsvArgs {
  std::string in, out;
};

int run_export_csv(const CsvArgs& args) {
  medl::export_csv(medl::read_scalar_field(args.in), args.out);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Evidential fusion, curriculum weighting and segmentation metrics on .mev volumes"};
  app.require_subcommand(1);
  std::optional<std::size_t> threads;
  app.add_option("--threads", threads, "worker threads (default: MEVL_THREADS, then hardware count)")
      ->check(CLI::PositiveNumber);

  FuseArgs fuse_args;
  WeightsArgs weights_args;
  MetricsArgs metrics_args;
  DemoArgs demo_args;
  SynthArgs synth_args;
  CsvArgs csv_args;
  CLI::App* fuse = app.add_subcommand("fuse", "fuse two evidence volumes into pseudo-labels");
  CLI::App* weights = app.add_subcommand("weights", "per-voxel curriculum weights");
  CLI::App* metrics = app.add_subcommand("metrics", "overlap and surface-distance metrics");
  CLI::App* demo = app.add_subcommand("demo", "toy two-network training, labeled-only vs full objective");
  CLI::App* synth = app.add_subcommand("synth", "write a synthetic phantom and two evidence volumes");
  CLI::App* csv = app.add_subcommand("export-csv", "dump a scalar volume as i,j,k,value lines");
  add_fuse(*fuse, fuse_args);
  add_weights(*weights, weights_args);
  add_metrics(*metrics, metrics_args);
  add_demo(*demo, demo_args);
  add_synth(*synth, synth_args);
  csv->add_option("--in", csv_args.in, "scalar volume")->required();
  csv->add_option("--out", csv_args.out, "CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*fuse) return run_fuse(fuse_args, threads);
    if (*weights) return run_weights(weights_args);
    if (*metrics) return run_metrics(metrics_args);
    if (*demo) return run_demo(demo_args, threads);
    if (*synth) return run_synth(synth_args);
    if (*csv) return run_export_csv(csv_args);
  } catch (const UsageError& e) {
    std::cerr << "medl: " << e.what() << '\n';
    return kExitUsage;
  } catch (const medl::Error& e) {
    std::cerr << "medl: " << medl::to_string(e.code()) << ": " << e.what() << '\n';
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "medl: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}
