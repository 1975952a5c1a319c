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

// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "reference_forward.hpp"
#include "styleaug/adain.hpp"
#include "styleaug/augment.hpp"
#include "styleaug/cli.hpp"
#include "styleaug/dataset.hpp"
#include "styleaug/losses.hpp"
#include "styleaug/metrics.hpp"
#include "styleaug/rng.hpp"
#include "styleaug/tensor.hpp"
#include "styleaug/tensor_file.hpp"
#include "styleaug/trainer.hpp"
#include "test_util.hpp"

namespace styleaug {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

std::vector<double> random_distribution(Rng& rng, std::size_t k) {
  std::vector<double> z(k);
  for (double& v : z) v = rng.normal() * 4.0;
  return softmax(z);
}

// Straight-line evaluation of the combined loss for finite differences.
double reference_total(const std::array<std::vector<double>, 3>& z, std::size_t label) {
  std::array<std::vector<double>, 3> p;
  for (std::size_t v = 0; v < 3; ++v) {
    const double mx = *std::max_element(z[v].begin(), z[v].end());
    double s = 0.0;
    for (double x : z[v]) s += std::exp(x - mx);
    for (double x : z[v]) p[v].push_back(std::exp(x - mx) / s);
  }
  const double k = static_cast<double>(z[0].size());
  double ce = 0.0, js = 0.0;
  for (std::size_t i = 0; i < z[0].size(); ++i) {
    ce -= ((i == label ? 0.9 : 0.0) + 0.1 / k) * std::log(p[0][i]);
    const double m = (p[0][i] + p[1][i] + p[2][i]) / 3.0;
    for (std::size_t v = 0; v < 3; ++v) js += p[v][i] * std::log(p[v][i] / m) / 3.0;
  }
  return ce + 12.0 * js;
}

Outcome jsd_correctness() {
  Outcome o;
  const auto t0 = Clock::now();
  const std::vector<double> a{0.1, 0.2, 0.7};
  o.require(jsd3(a, a, a) == 0.0, "identical triple not 0");
  const std::vector<double> e0{1, 0, 0}, e1{0, 1, 0}, e2{0, 0, 1};
  o.require(std::abs(jsd3(e0, e1, e2) - std::log(3.0)) <= 1e-9, "disjoint one-hots != log 3");
  const std::vector<double> u{0.5, 0.5}, d0{1, 0}, d1{0, 1};
  o.require(std::abs(jsd3(u, d0, d1) - 2.0 / 3.0 * std::numbers::ln2) <= 1e-9,
            "uniform/delta case != (2/3) log 2");
  Rng rng(101);
  double lo = 1.0, hi = 0.0, asym = 0.0;
  for (int t = 0; t < 100000; ++t) {
    const std::size_t k = 2 + rng.below(9);
    const auto p0 = random_distribution(rng, k), p1 = random_distribution(rng, k),
               p2 = random_distribution(rng, k);
    const double j = jsd3(p0, p1, p2);
    lo = std::min(lo, j);
    hi = std::max(hi, j);
    if (t % 10 == 0) {
      for (double other : {jsd3(p0, p2, p1), jsd3(p1, p0, p2), jsd3(p1, p2, p0), jsd3(p2, p0, p1),
                           jsd3(p2, p1, p0)}) {
        asym = std::max(asym, std::abs(other - j));
      }
    }
  }
  o.require(lo >= 0.0 && hi <= std::log(3.0), "value outside [0, log 3]");
  o.require(asym <= 1e-12, "permutation changed the value by " + fmt("%.3g", asym));
  const double secs = seconds_since(t0);
  o.require(secs < 5.0, "took " + fmt("%.2f", secs) + " s");
  o.detail = (o.pass ? "" : o.detail + " | ") + "1e5 triples in [" + fmt("%.3g", lo) + ", " +
             fmt("%.6f", hi) + "], max asymmetry " + fmt("%.2g", asym) + ", " + fmt("%.2f", secs) + " s";
  return o;
}

Outcome gradient_fidelity() {
  Outcome o;
  const auto t0 = Clock::now();
  Rng rng(202);
  const LossConfig cfg;
  const double h = 1e-4;
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    std::array<std::vector<double>, 3> z;
    for (auto& v : z) {
      v.resize(10);
      for (double& x : v) x = rng.normal() * 3.0;
    }
    const std::size_t label = rng.below(10);
    const LossReport r = combined_loss(z[0], z[1], z[2], label, cfg);
    const std::array<const std::vector<double>*, 3> g{&r.grad_orig, &r.grad_aug1, &r.grad_aug2};
    for (std::size_t v = 0; v < 3; ++v) {
      for (std::size_t i = 0; i < 10; ++i) {
        auto plus = z, minus = z;
        plus[v][i] += h;
        minus[v][i] -= h;
        const double fd = (reference_total(plus, label) - reference_total(minus, label)) / (2 * h);
        const double an = (*g[v])[i];
        worst = std::max(worst, std::abs(an - fd) / std::max({std::abs(an), std::abs(fd), 1e-8}));
      }
    }
  }
  const double secs = seconds_since(t0);
  o.require(worst < 1e-4, "worst relative error " + fmt("%.3g", worst));
  o.require(secs < 30.0, "took " + fmt("%.2f", secs) + " s");
  if (o.pass) o.detail = "1000 instances, worst relative error " + fmt("%.3g", worst) + ", " + fmt("%.2f", secs) + " s";
  return o;
}

Outcome adain_statistics() {
  Outcome o;
  double stat_err = 0.0, ident = 0.0, perm = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Tensor content = testing::random_tensor({16, 12, 12}, 300 + seed, -3.0f, 3.0f);
    Tensor style = testing::random_tensor({16, 10, 14}, 400 + seed, -1.0f, 5.0f);
    const Tensor out = adain(content, style);
    const ops::ChannelStats so = ops::channel_stats(out), ss = ops::channel_stats(style);
    for (std::size_t c = 0; c < 16; ++c) {
      stat_err = std::max({stat_err, static_cast<double>(std::abs(so.mean[c] - ss.mean[c])),
                           static_cast<double>(std::abs(so.std[c] - ss.std[c]))});
    }
    // Identity, measured as relative L2 distance.
    const Tensor same = adain(content, content);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < content.size(); ++i) {
      num += std::pow(static_cast<double>(same[i]) - content[i], 2);
      den += std::pow(static_cast<double>(content[i]), 2);
    }
    ident = std::max(ident, std::sqrt(num / den));
    // Shuffle the style's spatial positions within each channel.
    Tensor shuffled = style;
    Rng rng(500 + seed);
    const std::size_t hw = 10 * 14;
    std::vector<std::size_t> idx(hw);
    for (std::size_t i = 0; i < hw; ++i) idx[i] = i;
    for (std::size_t i = hw - 1; i > 0; --i) std::swap(idx[i], idx[rng.below(i + 1)]);
    for (std::size_t c = 0; c < 16; ++c)
      for (std::size_t i = 0; i < hw; ++i) shuffled[c * hw + i] = style[c * hw + idx[i]];
    perm = std::max(perm, testing::max_abs_diff(adain(content, shuffled), out));
  }
  o.require(stat_err <= 1e-4, "statistics error " + fmt("%.3g", stat_err));
  o.require(ident <= 1e-5, "identity relative L2 " + fmt("%.3g", ident));
  o.require(perm <= 1e-5, "permutation difference " + fmt("%.3g", perm));
  if (o.pass) {
    o.detail = "stats err " + fmt("%.2g", stat_err) + ", identity rel-L2 " + fmt("%.2g", ident) +
               ", permutation " + fmt("%.2g", perm);
  }
  return o;
}

Outcome styleaug_mixing(const WeightStore& w) {
  Outcome o;
  const ImageRGB content = load_image(testing::shipped_images_dir() / "astronaut.png");
  const ImageRGB style = load_image(testing::shipped_images_dir() / "rocket.png");
  StyleAugParams p;
  Rng rng(600);
  p.forced_m = 1.0;
  o.require(styleaug(content, style, rng, w, p) == content, "m=1 is not the content image");
  p.forced_m = 0.0;
  o.require(styleaug(content, style, rng, w, p) == decode(w, adain(encode(w, content), encode(w, style))),
            "m=0 is not the decoded stylization");
  Rng beta_rng(601);
  const int n = 100000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double m = sample_beta(beta_rng, 50.0, 50.0);
    sum += m;
    sq += m * m;
  }
  const double mean = sum / n, var = sq / n - mean * mean;
  o.require(std::abs(mean - 0.5) <= 0.005, "Beta mean " + fmt("%.5f", mean));
  o.require(std::abs(var - 0.002475) <= 0.0005, "Beta variance " + fmt("%.6f", var));
  if (o.pass) o.detail = "exact endpoints, Beta(50,50) mean " + fmt("%.5f", mean) + " var " + fmt("%.6f", var);
  return o;
}

Outcome encoder_regression(const WeightStore& w) {
  Outcome o;
  double worst_mae = 0.0;
  std::size_t count = 0;
  for (const auto& entry : fs::directory_iterator(testing::shipped_images_dir())) {
    const ImageRGB img = load_image(entry.path());
    const double mae = testing::mean_abs_diff(decode(w, encode(w, img)).pixels(), img.pixels());
    o.require(mae < 0.15, entry.path().filename().string() + " MAE " + fmt("%.4f", mae));
    worst_mae = std::max(worst_mae, mae);
    ++count;
  }
  o.require(count >= 4, "fewer than 4 shipped images");
  const ImageRGB golden_in = load_image(testing::test_data_dir() / "golden_input.ppm");
  const Tensor z = encode(w, golden_in);
  const std::vector<double> ref = testing::reference_encode(w, golden_in);
  double ref_err = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) ref_err = std::max(ref_err, std::abs(z[i] - ref[i]));
  o.require(ref.size() == z.size() && ref_err <= 1e-4, "reference forward differs by " + fmt("%.3g", ref_err));
  const TensorFile golden = read_tensor_file(testing::test_data_dir() / "golden_encode.adwt");
  const double golden_err = testing::max_abs_diff(z, golden.entries.at(0).second);
  o.require(golden_err <= 1e-4, "stored golden differs by " + fmt("%.3g", golden_err));
  if (o.pass) {
    o.detail = std::to_string(count) + " images, worst MAE " + fmt("%.4f", worst_mae) +
               ", reference diff " + fmt("%.2g", ref_err) + ", golden diff " + fmt("%.2g", golden_err);
  }
  return o;
}

Outcome metric_formulas() {
  Outcome o;
  std::vector<PredictionRecord> records;
  auto cue = [&](const std::string& pred) {
    PredictionRecord r;
    r.image_id = std::to_string(records.size());
    r.predicted_label = pred;
    r.shape_label = "cat";
    r.texture_label = "elephant";
    records.push_back(r);
  };
  for (int i = 0; i < 60; ++i) cue("cat");
  for (int i = 0; i < 40; ++i) cue("elephant");
  for (int i = 0; i < 25; ++i) cue("clock");
  const ShapeBias sb = shape_bias(records);
  o.require(sb.bias == 0.6 && sb.n_shape == 60 && sb.n_texture == 40, "shape bias " + fmt("%.17g", sb.bias));
  Rng rng(700);
  std::map<std::string, double> acc;
  double sum = 0.0;
  for (int i = 0; i < 95; ++i) {
    const double v = rng.uniform();
    acc["corruption-" + std::to_string(i)] = v;
    sum += v;
  }
  const CorruptionMean cm = mean_corruption_accuracy(acc);
  const double err = std::abs(cm.value - sum / 95.0);
  o.require(err <= 1e-9 && cm.warnings.empty(), "corruption mean error " + fmt("%.3g", err));
  if (o.pass) o.detail = "shape bias 0.6 exact, corruption mean error " + fmt("%.2g", err);
  return o;
}

Outcome consistency_effect() {
  Outcome o;
  double sum_jsd = 0.0, sum_plain = 0.0, slowest = 0.0;
  std::string per_seed;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Dataset ds = make_synthetic_dataset({.num_classes = 4, .per_class = 40, .size = 64, .seed = seed});
    const auto [train_set, eval_set] = split_dataset(ds, 0.2);
    std::array<double, 2> value{};
    for (int arm = 0; arm < 2; ++arm) {
      TrainConfig cfg;
      cfg.seed = seed;
      cfg.policy = AugmentationPolicy::named(PolicyKind::kCrop);
      cfg.loss.lambda = arm == 0 ? 12.0 : 0.0;
      const auto t0 = Clock::now();
      const TrainResult r = train(ds, cfg);
      value[arm] = consistency_eval(r.probe, eval_set, cfg.policy, 1000 + seed);
      const double secs = seconds_since(t0);
      slowest = std::max(slowest, secs);
      o.require(secs < 60.0, "run took " + fmt("%.1f", secs) + " s");
    }
    sum_jsd += value[0];
    sum_plain += value[1];
    per_seed += (seed ? " " : "") + fmt("%.4f", value[0]) + "/" + fmt("%.4f", value[1]);
  }
  const double jsd_mean = sum_jsd / 5.0, plain_mean = sum_plain / 5.0;
  o.require(jsd_mean < plain_mean, "lambda=12 mean " + fmt("%.5f", jsd_mean) + " not below lambda=0 mean " +
                                       fmt("%.5f", plain_mean));
  o.detail = (o.pass ? "" : o.detail + " | ") + "mean consistency " + fmt("%.5f", jsd_mean) + " (lambda 12) vs " +
             fmt("%.5f", plain_mean) + " (lambda 0); per seed " + per_seed + "; slowest run " +
             fmt("%.1f", slowest) + " s";
  return o;
}

int run_quiet(std::vector<std::string> args, std::string* out = nullptr) {
  args.insert(args.begin(), "styleaug");
  std::ostringstream os, es;
  const int code = run_cli(args, os, es);
  if (out) *out = os.str();
  if (code != 0) std::fprintf(stderr, "%s", es.str().c_str());
  return code;
}

std::map<std::string, std::string> directory_bytes(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    std::ifstream in(entry.path(), std::ios::binary);
    files[entry.path().filename().string()] = {std::istreambuf_iterator<char>(in), {}};
  }
  return files;
}

Outcome determinism() {
  Outcome o;
  const fs::path root = fs::temp_directory_path() / "styleaug_acceptance_determinism";
  fs::remove_all(root);
  std::size_t files = 0;
  for (const char* policy : {"crop", "augmix_lite", "randaugment_lite", "neurofovea", "styleaug_crop"}) {
    std::map<std::string, std::map<std::string, std::string>> runs;
    for (const auto& [name, workers] : std::vector<std::pair<std::string, std::string>>{
             {"run1_w1", "1"}, {"run2_w1", "1"}, {"run3_w8", "8"}}) {
      const fs::path out = root / policy / name;
      const int code = run_quiet({"augment", "--input", testing::shipped_images_dir().string(), "--output",
                                  out.string(), "--seed", "1234", "--policy", policy, "--workers", workers});
      o.require(code == 0, std::string(policy) + " exited " + std::to_string(code));
      runs[name] = directory_bytes(out);
    }
    o.require(runs["run1_w1"] == runs["run2_w1"], std::string(policy) + " differs between runs");
    o.require(runs["run1_w1"] == runs["run3_w8"], std::string(policy) + " differs between 1 and 8 workers");
    files += runs["run1_w1"].size();
  }
  fs::remove_all(root);
  if (o.pass) o.detail = "5 policies, " + std::to_string(files) + " files byte-identical over 2 runs and 1 vs 8 workers";
  return o;
}

Outcome relative_cost() {
  Outcome o;
  std::string out;
  const int code = run_quiet({"bench", "--policy", "augmix_lite,styleaug", "--n", "20"}, &out);
  o.require(code == 0, "bench exited " + std::to_string(code));
  std::istringstream lines(out);
  std::string line;
  double ratio = -1.0, augmix = 0.0, style = 0.0;
  while (std::getline(lines, line)) {
    if (line.empty() || line[0] != '{') continue;
    const auto j = nlohmann::json::parse(line);
    if (j.contains("styleaug_over_augmix_lite")) ratio = j["styleaug_over_augmix_lite"];
    if (j.value("policy", "") == "augmix_lite") augmix = j["median_ms"];
    if (j.value("policy", "") == "styleaug") style = j["median_ms"];
  }
  o.require(ratio > 0.0, "no ratio reported");
  o.require(ratio <= 5.0, "styleaug/augmix_lite median ratio " + fmt("%.2f", ratio));
  o.detail = (o.pass ? "" : o.detail + " | ") + "median styleaug " + fmt("%.1f", style) + " ms, augmix_lite " +
             fmt("%.1f", augmix) + " ms, ratio " + fmt("%.2f", ratio);
  return o;
}

}  // namespace
}  // namespace styleaug

int main() {
  using namespace styleaug;
  const WeightStore weights = load_weights(testing::shipped_weights());
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"JSD correctness", jsd_correctness},
      {"gradient fidelity", gradient_fidelity},
      {"AdaIN statistics", adain_statistics},
      {"StyleAug mixing", [&] { return styleaug_mixing(weights); }},
      {"encoder/decoder regression", [&] { return encoder_regression(weights); }},
      {"metric formulas", metric_formulas},
      {"consistency-training effect", consistency_effect},
      {"determinism", determinism},
      {"relative cost", relative_cost},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failures += o.pass ? 0 : 1;
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
