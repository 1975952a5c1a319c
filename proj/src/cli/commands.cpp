/* Copyright 2026 The StyleAug Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "styleaug/adain.hpp"
#include "styleaug/augment.hpp"
#include "styleaug/cli.hpp"
#include "styleaug/config.hpp"
#include "styleaug/dataset.hpp"
#include "styleaug/error.hpp"
#include "styleaug/kernels.hpp"
#include "styleaug/losses.hpp"
#include "styleaug/metrics.hpp"
#include "styleaug/parallel.hpp"
#include "styleaug/rng.hpp"
#include "styleaug/trainer.hpp"

#ifndef STYLEAUG_DEFAULT_IMAGES
#define STYLEAUG_DEFAULT_IMAGES "data/images"
#endif

namespace styleaug {
namespace {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Options shared by the subcommands that run augmentations.
struct CommonOptions {
  std::optional<fs::path> config;
  std::optional<fs::path> weights;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> policy;
  std::optional<std::size_t> workers;
  std::vector<std::string> settings;
};

void add_common(CLI::App* cmd, CommonOptions& o, bool with_policy = true) {
  cmd->add_option("--config", o.config, "INI configuration file")->check(CLI::ExistingFile);
  cmd->add_option("--weights", o.weights, "AdaIN weight file");
  cmd->add_option("--seed", o.seed, "global seed");
  cmd->add_option("--workers", o.workers, "worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--set", o.settings, "override a config key, e.g. policy.style_alpha=20");
  if (with_policy) cmd->add_option("--policy", o.policy, "augmentation policy");
}

PipelineConfig build_config(const CommonOptions& o) {
  PipelineConfig cfg = o.config ? load_pipeline_config(*o.config) : PipelineConfig{};
  for (const auto& s : o.settings) apply_setting(cfg, s);
  if (o.policy) apply_setting(cfg, "policy", "name", *o.policy);
  if (o.seed) {
    cfg.seed = *o.seed;
    cfg.train.seed = *o.seed;
  }
  if (o.workers) cfg.workers = *o.workers;
  cfg.validate();
  return cfg;
}

std::size_t workers_of(const PipelineConfig& cfg) { return cfg.workers.value_or(default_workers()); }

std::optional<WeightStore> weights_if_needed(const CommonOptions& o, const PipelineConfig& cfg,
                                             bool needed) {
  if (!needed) return std::nullopt;
  const fs::path path = resolve_weights_path(o.weights, cfg);
  if (!fs::exists(path)) fail(ErrorCode::kWeightsMissing, "weight file not found: " + path.string());
  return load_weights(path);
}

std::vector<fs::path> list_images(const fs::path& dir) {
  if (!fs::is_directory(dir)) fail(ErrorCode::kIoError, "input directory not found: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".png" || ext == ".ppm") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) fail(ErrorCode::kEmptyInput, "no PNG or PPM images in " + dir.string());
  return files;
}

ojson trace_json(const AugTrace& trace) {
  ojson j = ojson::object();
  for (const auto& [key, values] : trace.entries()) {
    if (values.size() == 1) {
      j[key] = values[0];
    } else {
      j[key] = values;
    }
  }
  return j;
}

// ---- augment ----

struct AugmentArgs {
  CommonOptions common;
  fs::path input;
  fs::path output;
};

int cmd_augment(const AugmentArgs& a, std::ostream& out) {
  const PipelineConfig cfg = build_config(a.common);
  const std::vector<fs::path> files = list_images(a.input);
  const std::optional<WeightStore> weights =
      weights_if_needed(a.common, cfg, cfg.policy.needs_weights());
  std::vector<ImageRGB> images;
  images.reserve(files.size());
  for (const auto& f : files) {
    ImageRGB img = load_image(f);
    img.set_source_id(f.filename().string());
    images.push_back(std::move(img));
  }
  fs::create_directories(a.output);

  const Rng root(cfg.seed);
  std::vector<TripletTrace> traces(images.size());
  std::vector<std::array<std::string, 3>> names(images.size());
  parallel_for(images.size(), workers_of(cfg), [&](std::size_t i) {
    const AugTriplet t = make_triplet(images, i, cfg.policy, root.fork(i),
                                      weights ? &*weights : nullptr, &traces[i]);
    char prefix[16];
    std::snprintf(prefix, sizeof(prefix), "%04zu_", i);
    const std::string stem = prefix + files[i].stem().string();
    names[i] = {stem + "_orig.png", stem + "_aug1.png", stem + "_aug2.png"};
    save_image(t.orig, a.output / names[i][0]);
    save_image(t.aug1, a.output / names[i][1]);
    save_image(t.aug2, a.output / names[i][2]);
  });

  ojson manifest;
  manifest["seed"] = cfg.seed;
  manifest["policy"] = ojson::parse(policy_to_json(cfg.policy));
  manifest["weights"] = weights ? ojson(resolve_weights_path(a.common.weights, cfg).filename().string())
                                : ojson(nullptr);
  manifest["images"] = ojson::array();
  for (std::size_t i = 0; i < images.size(); ++i) {
    ojson entry;
    entry["index"] = i;
    entry["source"] = files[i].filename().string();
    entry["orig"] = names[i][0];
    entry["aug1"] = names[i][1];
    entry["aug2"] = names[i][2];
    entry["trace"] = {{"orig", trace_json(traces[i].orig)},
                      {"aug1", trace_json(traces[i].aug1)},
                      {"aug2", trace_json(traces[i].aug2)}};
    if (traces[i].style_indices) {
      const auto [s1, s2] = *traces[i].style_indices;
      entry["style_sources"] = {files[s1].filename().string(), files[s2].filename().string()};
    }
    manifest["images"].push_back(std::move(entry));
  }
  std::ofstream mf(a.output / "manifest.json", std::ios::binary);
  mf << manifest.dump(2) << '\n';
  if (!mf) fail(ErrorCode::kIoError, "cannot write manifest in " + a.output.string());
  out << "seed: " << cfg.seed << '\n';
  out << "wrote " << images.size() << " triplets (" << policy_name(cfg.policy.kind) << ") to "
      << a.output.string() << '\n';
  return kExitOk;
}

// ---- styletransfer ----

struct StyleTransferArgs {
  std::optional<fs::path> weights;
  fs::path content;
  fs::path style;
  fs::path output;
  float alpha = 1.0f;
};

ImageRGB crop_to_multiple_of_8(const ImageRGB& img) {
  const std::size_t h = img.height() / 8 * 8;
  const std::size_t w = img.width() / 8 * 8;
  if (h == 0 || w == 0) fail(ErrorCode::kShapeError, "image smaller than 8x8");
  return h == img.height() && w == img.width() ? img : center_crop(img, h, w);
}

int cmd_styletransfer(const StyleTransferArgs& a, std::ostream& out) {
  if (!(a.alpha >= 0.0f && a.alpha <= 1.0f)) throw UsageError("--alpha must be in [0,1]");
  const fs::path path = resolve_weights_path(a.weights, PipelineConfig{});
  if (!fs::exists(path)) fail(ErrorCode::kWeightsMissing, "weight file not found: " + path.string());
  const WeightStore weights = load_weights(path);
  const ImageRGB content = crop_to_multiple_of_8(load_image(a.content));
  const ImageRGB style = crop_to_multiple_of_8(load_image(a.style));
  AdainConfig cfg;
  cfg.alpha_blend = a.alpha;
  save_image(stylize(weights, content, style, cfg), a.output);
  out << "wrote " << a.output.string() << " (" << content.width() << "x" << content.height() << ")\n";
  return kExitOk;
}

// ---- loss-check ----

struct LossCheckArgs {
  std::size_t instances = 1000;
  std::uint64_t seed = 0;
};

// |a - b| relative to the larger magnitude, with an absolute floor for
// components that are zero up to rounding.
double relative_error(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-8});
}

int cmd_loss_check(const LossCheckArgs& a, std::ostream& out) {
  if (a.instances == 0) throw UsageError("--instances must be positive");
  ojson checks = ojson::array();
  bool all_ok = true;
  auto record = [&](const std::string& name, bool ok, double value) {
    checks.push_back({{"name", name}, {"passed", ok}, {"value", value}});
    all_ok = all_ok && ok;
  };

  const std::vector<double> uniform2{0.5, 0.5}, d1{1.0, 0.0}, d2{0.0, 1.0};
  const std::vector<double> e0{1, 0, 0}, e1{0, 1, 0}, e2{0, 0, 1};
  const std::vector<double> p{0.2, 0.3, 0.5};
  const double same = jsd3(p, p, p);
  record("jsd_identical_is_zero", same == 0.0, same);
  const double disjoint = jsd3(e0, e1, e2);
  record("jsd_disjoint_is_log3", std::abs(disjoint - std::log(3.0)) < 1e-9, disjoint);
  const double mixed = jsd3(uniform2, d1, d2);
  record("jsd_uniform_delta_case", std::abs(mixed - 2.0 / 3.0 * std::log(2.0)) < 1e-9, mixed);

  constexpr std::size_t kClasses = 10;
  constexpr double kStep = 1e-4;
  LossConfig cfg;
  cfg.num_classes = kClasses;
  Rng rng(a.seed);
  double worst = 0.0;
  double worst_sum = 0.0;
  for (std::size_t n = 0; n < a.instances; ++n) {
    std::array<std::vector<double>, 3> z;
    for (auto& v : z) {
      v.resize(kClasses);
      for (double& x : v) x = 2.0 * rng.normal();
    }
    const std::size_t label = rng.below(kClasses);
    const LossReport r = combined_loss(z[0], z[1], z[2], label, cfg);
    const std::vector<double>* grads[3] = {&r.grad_orig, &r.grad_aug1, &r.grad_aug2};
    for (std::size_t v = 0; v < 3; ++v) {
      double sum = 0.0;
      for (std::size_t k = 0; k < kClasses; ++k) {
        auto zp = z;
        auto zm = z;
        zp[v][k] += kStep;
        zm[v][k] -= kStep;
        const double fd = (combined_loss(zp[0], zp[1], zp[2], label, cfg).total -
                           combined_loss(zm[0], zm[1], zm[2], label, cfg).total) /
                          (2.0 * kStep);
        worst = std::max(worst, relative_error((*grads[v])[k], fd));
        sum += (*grads[v])[k];
      }
      worst_sum = std::max(worst_sum, std::abs(sum));
    }
  }
  record("gradient_matches_finite_differences", worst < 1e-4, worst);
  record("gradient_components_sum_to_zero", worst_sum < 1e-6, worst_sum);

  ojson report;
  report["seed"] = a.seed;
  report["instances"] = a.instances;
  report["checks"] = checks;
  report["passed"] = all_ok;
  out << report.dump() << '\n';
  return all_ok ? kExitOk : kExitRuntime;
}

// ---- eval ----

int cmd_eval(const std::string& metric, const fs::path& log, std::ostream& out) {
  const std::vector<PredictionRecord> records = read_prediction_log(log);
  MetricReport report;
  if (metric == "shape-bias") {
    report.metric = "shape_bias";
    const ShapeBias sb = shape_bias(records);
    report.value = sb.bias;
    report.n = sb.n_shape + sb.n_texture;
  } else if (metric == "top1") {
    report.metric = "top1_accuracy";
    report.value = top1_accuracy(records);
    report.n = records.size();
  } else {
    report.metric = "mean_corruption_accuracy";
    if (records.empty()) fail(ErrorCode::kEmptyInput, "no prediction records");
    const CorruptionMean cm = mean_corruption_accuracy(per_dataset_accuracy(records));
    report.value = cm.value;
    report.n = cm.n;
    report.warnings = cm.warnings;
  }
  out << report.to_json() << '\n';
  return kExitOk;
}

// ---- train-toy ----

struct TrainArgs {
  CommonOptions common;
  std::optional<fs::path> data;
  std::size_t synthetic_classes = 4;
  std::size_t per_class = 40;
  fs::path output;
  std::optional<double> lambda;
  std::optional<std::size_t> epochs;
  bool no_jsd = false;
};

int cmd_train_toy(const TrainArgs& a, std::ostream& out) {
  PipelineConfig cfg = build_config(a.common);
  if (a.lambda) apply_setting(cfg, "loss", "lambda", std::to_string(*a.lambda));
  if (a.epochs) cfg.train.epochs = *a.epochs;
  if (a.no_jsd) cfg.train.use_jsd = false;
  cfg.validate();
  TrainConfig tc = cfg.train;
  tc.seed = cfg.seed;
  tc.policy = cfg.policy;
  tc.loss = cfg.loss;
  tc.workers = workers_of(cfg);
  const Dataset ds = a.data ? load_dataset_dir(*a.data)
                            : make_synthetic_dataset({a.synthetic_classes, a.per_class, 64, cfg.seed});
  const std::optional<WeightStore> weights =
      weights_if_needed(a.common, cfg, cfg.policy.needs_weights());
  out << "seed: " << cfg.seed << '\n';
  const TrainResult result = train(ds, tc, weights ? &*weights : nullptr);
  fs::create_directories(a.output);
  write_history_csv(result.history, a.output / "history.csv");
  write_tensor_file(result.probe.to_tensor_file(), a.output / "probe.adwt");
  for (const auto& m : result.history) {
    char line[160];
    std::snprintf(line, sizeof(line),
                  "epoch %3zu  loss %.5f  ce %.5f  jsd %.5f  eval_acc %.4f  mean_jsd %.5f\n",
                  m.epoch, m.loss, m.ce, m.jsd, m.eval_acc, m.mean_jsd);
    out << line;
  }
  return kExitOk;
}

// ---- bench ----

struct BenchArgs {
  CommonOptions common;
  std::vector<std::string> policies{"augmix_lite", "randaugment_lite", "styleaug"};
  long n = 20;
  std::optional<fs::path> input;
};

double percentile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

int cmd_bench(const BenchArgs& a, std::ostream& out) {
  if (a.n <= 0) throw UsageError("--n must be a positive image count");
  const PipelineConfig cfg = build_config(a.common);
  std::vector<AugmentationPolicy> policies;
  bool needs_weights = false;
  for (const auto& name : a.policies) {
    AugmentationPolicy p = cfg.policy;
    try {
      p.kind = parse_policy_kind(name);
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
    needs_weights = needs_weights || p.needs_weights();
    policies.push_back(p);
  }
  const std::optional<WeightStore> weights = weights_if_needed(a.common, cfg, needs_weights);

  std::vector<ImageRGB> inputs;
  const fs::path dir = a.input.value_or(STYLEAUG_DEFAULT_IMAGES);
  if (a.input || fs::is_directory(dir)) {
    for (const auto& f : list_images(dir)) inputs.push_back(validation_preprocess(load_image(f)));
  }
  if (inputs.size() < 2) {
    for (std::size_t i = inputs.size(); i < 4; ++i) {
      inputs.push_back(make_synthetic_dataset({2, 1, kAugmentSize, cfg.seed + i}).items[i % 2].image);
    }
  }

  const auto count = static_cast<std::size_t>(a.n);
  const Rng root(cfg.seed);
  out << "seed: " << cfg.seed << '\n';
  out << "isa: " << kernels::isa_name(kernels::active_isa()) << '\n';
  std::optional<double> augmix_median, styleaug_median;
  for (const auto& policy : policies) {
    std::vector<double> ms;
    ms.reserve(count);
    for (std::size_t i = 0; i <= count; ++i) {
      const ImageRGB& img = inputs[i % inputs.size()];
      const ImageRGB& style = inputs[(i + 1) % inputs.size()];
      Rng rng = root.fork(i);
      const auto t0 = std::chrono::steady_clock::now();
      const ImageRGB result =
          apply_policy(img, policy, rng, weights ? &*weights : nullptr, &style);
      const auto t1 = std::chrono::steady_clock::now();
      if (i > 0) ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
      if (result.height() != img.height()) fail(ErrorCode::kShapeError, "benchmark output changed shape");
    }
    const double median = percentile(ms, 0.5);
    ojson line;
    line["policy"] = policy_name(policy.kind);
    line["n"] = count;
    line["median_ms"] = median;
    line["p95_ms"] = percentile(ms, 0.95);
    out << line.dump() << '\n';
    if (policy.kind == PolicyKind::kAugMixLite) augmix_median = median;
    if (policy.kind == PolicyKind::kStyleAug) styleaug_median = median;
  }
  if (augmix_median && styleaug_median) {
    ojson ratio;
    ratio["styleaug_over_augmix_lite"] = *styleaug_median / *augmix_median;
    out << ratio.dump() << '\n';
  }
  return kExitOk;
}

// ---- synth ----

struct SynthArgs {
  fs::path output;
  SyntheticSpec spec;
};

int cmd_synth(const SynthArgs& a, std::ostream& out) {
  save_dataset_dir(make_synthetic_dataset(a.spec), a.output);
  out << "seed: " << a.spec.seed << '\n';
  out << "wrote " << a.spec.num_classes * a.spec.per_class << " images to " << a.output.string() << '\n';
  return kExitOk;
}

void report_error(std::ostream& err, std::string_view kind, std::string_view message) {
  ojson j;
  j["error"] = kind;
  j["message"] = message;
  err << j.dump() << '\n';
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"StyleAug augmentation toolkit"};
  app.require_subcommand(1);

  AugmentArgs augment;
  CLI::App* c_augment = app.add_subcommand("augment", "write orig/aug1/aug2 triplets for a directory");
  add_common(c_augment, augment.common);
  c_augment->add_option("--input", augment.input, "input image directory")->required();
  c_augment->add_option("--output", augment.output, "output directory")->required();

  StyleTransferArgs st;
  CLI::App* c_st = app.add_subcommand("styletransfer", "stylize one content image with one style image");
  c_st->add_option("--content", st.content)->required()->check(CLI::ExistingFile);
  c_st->add_option("--style", st.style)->required()->check(CLI::ExistingFile);
  c_st->add_option("--output", st.output)->required();
  c_st->add_option("--weights", st.weights, "AdaIN weight file");
  c_st->add_option("--alpha", st.alpha, "feature-space blend in [0,1]");

  LossCheckArgs lc;
  CLI::App* c_lc = app.add_subcommand("loss-check", "validate loss values and gradients");
  c_lc->add_option("--instances", lc.instances, "random gradient-check instances");
  c_lc->add_option("--seed", lc.seed);

  std::string metric;
  fs::path log_path;
  CLI::App* c_eval = app.add_subcommand("eval", "compute a metric over a prediction log");
  c_eval->add_option("metric", metric, "shape-bias | corruption | top1")
      ->required()
      ->check(CLI::IsMember({"shape-bias", "corruption", "top1"}));
  c_eval->add_option("log", log_path, "JSON-lines prediction log")->required()->check(CLI::ExistingFile);

  TrainArgs tr;
  CLI::App* c_train = app.add_subcommand("train-toy", "train a linear probe with the consistency loss");
  add_common(c_train, tr.common);
  c_train->add_option("--data", tr.data, "dataset directory with one folder per class")
      ->check(CLI::ExistingDirectory);
  c_train->add_option("--synthetic-classes", tr.synthetic_classes, "classes of the generated dataset");
  c_train->add_option("--per-class", tr.per_class, "images per generated class");
  c_train->add_option("--output", tr.output, "directory for history.csv and probe.adwt")->required();
  c_train->add_option("--lambda", tr.lambda, "consistency weight");
  c_train->add_option("--epochs", tr.epochs);
  c_train->add_flag("--no-jsd", tr.no_jsd, "cross-entropy on aug1 only");

  BenchArgs bench;
  CLI::App* c_bench = app.add_subcommand("bench", "per-image latency of augmentation policies");
  add_common(c_bench, bench.common, false);
  c_bench->add_option("--policy", bench.policies, "policies to time")->delimiter(',');
  c_bench->add_option("--n", bench.n, "images per policy");
  c_bench->add_option("--input", bench.input, "image directory")->check(CLI::ExistingDirectory);

  SynthArgs synth;
  CLI::App* c_synth = app.add_subcommand("synth", "write the synthetic pattern dataset");
  c_synth->add_option("--output", synth.output)->required();
  c_synth->add_option("--classes", synth.spec.num_classes);
  c_synth->add_option("--per-class", synth.spec.per_class);
  c_synth->add_option("--size", synth.spec.size);
  c_synth->add_option("--seed", synth.spec.seed);

  std::vector<std::string> argv_rest(args.begin() + (args.empty() ? 0 : 1), args.end());
  std::reverse(argv_rest.begin(), argv_rest.end());
  try {
    app.parse(argv_rest);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    report_error(err, "UsageError", e.what());
    return kExitUsage;
  }

  try {
    if (c_augment->parsed()) return cmd_augment(augment, out);
    if (c_st->parsed()) return cmd_styletransfer(st, out);
    if (c_lc->parsed()) return cmd_loss_check(lc, out);
    if (c_eval->parsed()) return cmd_eval(metric, log_path, out);
    if (c_train->parsed()) return cmd_train_toy(tr, out);
    if (c_bench->parsed()) return cmd_bench(bench, out);
    if (c_synth->parsed()) return cmd_synth(synth, out);
  } catch (const UsageError& e) {
    report_error(err, "UsageError", e.what());
    return kExitUsage;
  } catch (const Error& e) {
    report_error(err, e.name(), e.what());
    return e.code() == ErrorCode::kConfigError ? kExitUsage : kExitRuntime;
  } catch (const std::exception& e) {
    report_error(err, "InternalError", e.what());
    return kExitRuntime;
  }
  return kExitUsage;
}

int run_cli(int argc, char** argv) {
  return run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}

}  // namespace styleaug
