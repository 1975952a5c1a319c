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

#include "styleaug/trainer.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <numeric>
#include <string>

#include "styleaug/error.hpp"
#include "styleaug/parallel.hpp"
#include "styleaug/rng.hpp"

namespace styleaug {
namespace {

constexpr std::uint64_t kShuffleStream = 0x5348u;
constexpr std::uint64_t kConsistencyStream = 0x4a53u;
constexpr std::size_t kMinPerClass = 20;

using Views = std::array<std::vector<double>, 3>;

struct SampleLoss {
  double total = 0.0;
  double ce = 0.0;
  double jsd = 0.0;
  std::array<std::vector<double>, 3> grads;  // empty when the view gets no gradient
};

SampleLoss sample_loss(const LinearProbe& probe, const Views& x, std::size_t label,
                       const TrainConfig& cfg, const LossConfig& loss) {
  const std::vector<double> z0 = probe.logits(x[0]);
  const std::vector<double> z1 = probe.logits(x[1]);
  const std::vector<double> z2 = probe.logits(x[2]);
  SampleLoss s;
  if (cfg.use_jsd) {
    LossReport r = combined_loss(z0, z1, z2, label, loss);
    s.total = r.total;
    s.ce = r.ce;
    s.jsd = r.jsd;
    s.grads[0] = std::move(r.grad_orig);
    if (loss.lambda > 0.0) {
      s.grads[1] = std::move(r.grad_aug1);
      s.grads[2] = std::move(r.grad_aug2);
    }
    return s;
  }
  const std::size_t view = cfg.ce_target == CeTarget::kOrig ? 0 : 1;
  std::vector<double> g(probe.num_classes);
  s.ce = cross_entropy_with_grad(view == 0 ? z0 : z1, label, loss.label_smoothing, g);
  s.grads[view] = std::move(g);
  s.jsd = jsd3(softmax(z0), softmax(z1), softmax(z2));
  s.total = s.ce;
  return s;
}

std::vector<std::size_t> batch_bounds(std::size_t n, std::size_t batch_size) {
  // Remainder is spread over the batches so none is smaller than batch_size.
  const std::size_t batches = std::max<std::size_t>(1, n / batch_size);
  std::vector<std::size_t> bounds{0};
  for (std::size_t b = 1; b <= batches; ++b) bounds.push_back(b * n / batches);
  return bounds;
}

std::vector<ImageRGB> images_of(const Dataset& ds) {
  std::vector<ImageRGB> out;
  out.reserve(ds.items.size());
  for (const auto& item : ds.items) out.push_back(item.image);
  return out;
}

}  // namespace

std::vector<double> probe_features(const ImageRGB& image) {
  if (image.height() % kProbeResolution != 0 || image.width() != image.height()) {
    fail(ErrorCode::kShapeError, "probe input must be square with a multiple of 32 pixels");
  }
  const Tensor small = block_average(image.pixels(), image.height() / kProbeResolution);
  std::vector<double> x(small.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = static_cast<double>(small[i]) - 0.5;
  return x;
}

LinearProbe LinearProbe::zeros(std::size_t num_classes, std::size_t input_dim) {
  LinearProbe p;
  p.num_classes = num_classes;
  p.input_dim = input_dim;
  p.weights.assign(num_classes * input_dim, 0.0);
  p.bias.assign(num_classes, 0.0);
  return p;
}

std::vector<double> LinearProbe::logits(std::span<const double> features) const {
  if (features.size() != input_dim) fail(ErrorCode::kShapeMismatch, "probe feature length mismatch");
  std::vector<double> z(bias);
  for (std::size_t k = 0; k < num_classes; ++k) {
    const double* w = weights.data() + k * input_dim;
    double acc = 0.0;
    for (std::size_t d = 0; d < input_dim; ++d) acc += w[d] * features[d];
    z[k] += acc;
  }
  return z;
}

std::size_t LinearProbe::predict(std::span<const double> features) const {
  const std::vector<double> z = logits(features);
  return static_cast<std::size_t>(std::max_element(z.begin(), z.end()) - z.begin());
}

bool LinearProbe::all_finite() const {
  auto finite = [](double v) { return std::isfinite(v); };
  return std::all_of(weights.begin(), weights.end(), finite) &&
         std::all_of(bias.begin(), bias.end(), finite);
}

TensorFile LinearProbe::to_tensor_file() const {
  TensorFile f;
  f.entries.emplace_back("probe.weight",
                         Tensor({num_classes, input_dim}, std::vector<float>(weights.begin(), weights.end())));
  f.entries.emplace_back("probe.bias", Tensor({num_classes}, std::vector<float>(bias.begin(), bias.end())));
  return f;
}

LinearProbe LinearProbe::from_tensor_file(const TensorFile& file) {
  const Tensor* w = nullptr;
  const Tensor* b = nullptr;
  for (const auto& [name, t] : file.entries) {
    if (name == "probe.weight") w = &t;
    if (name == "probe.bias") b = &t;
  }
  if (!w || !b || w->rank() != 2 || b->rank() != 1 || b->dim(0) != w->dim(0)) {
    fail(ErrorCode::kManifestMismatch, "file does not hold a linear probe");
  }
  LinearProbe p = zeros(w->dim(0), w->dim(1));
  std::copy(w->data().begin(), w->data().end(), p.weights.begin());
  std::copy(b->data().begin(), b->data().end(), p.bias.begin());
  return p;
}

void TrainConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) fail(ErrorCode::kInvalidParameter, what);
  };
  require(epochs > 0, "epochs must be positive");
  require(batch_size > 0, "batch size must be positive");
  require(learning_rate > 0.0 && std::isfinite(learning_rate), "learning rate must be positive");
  require(weight_decay >= 0.0 && std::isfinite(weight_decay), "weight decay must be non-negative");
  require(eval_fraction > 0.0 && eval_fraction < 1.0, "eval fraction must be in (0,1)");
  require(workers > 0, "worker count must be positive");
  require(!policy.needs_style_sources() || batch_size >= 3, "style policies need batches of at least 3");
  policy.validate();
  if (loss.label_smoothing < 0.0 || loss.label_smoothing >= 1.0 || !(loss.lambda >= 0.0)) {
    fail(ErrorCode::kInvalidParameter, "invalid loss configuration");
  }
}

TrainResult train(const Dataset& dataset, const TrainConfig& cfg, const WeightStore* weights) {
  cfg.validate();
  const std::size_t k = dataset.num_classes();
  if (k < 2) fail(ErrorCode::kDatasetTooSmall, "training needs at least two classes");
  const std::vector<std::size_t> counts = dataset.class_counts();
  for (std::size_t c = 0; c < k; ++c) {
    if (counts[c] < kMinPerClass) {
      fail(ErrorCode::kDatasetTooSmall, "class '" + dataset.class_names[c] + "' has " +
                                            std::to_string(counts[c]) + " images, need " +
                                            std::to_string(kMinPerClass));
    }
  }
  LossConfig loss = cfg.loss;
  loss.num_classes = k;
  loss.validate();

  const auto [train_set, eval_set] = split_dataset(dataset, cfg.eval_fraction);
  const std::vector<ImageRGB> images = images_of(train_set);
  const std::size_t n = images.size();
  const std::size_t d = kProbeInputDim;

  TrainResult result;
  result.probe = LinearProbe::zeros(k, d);
  LinearProbe& probe = result.probe;
  const Rng root(cfg.seed);
  std::vector<double> grad_w(k * d), grad_b(k);

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    Rng shuffle = root.fork({kShuffleStream, epoch});
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[shuffle.below(i)]);

    EpochMetrics m;
    m.epoch = epoch + 1;
    const std::vector<std::size_t> bounds = batch_bounds(n, cfg.batch_size);
    for (std::size_t b = 0; b + 1 < bounds.size(); ++b) {
      const std::size_t bs = bounds[b + 1] - bounds[b];
      std::vector<ImageRGB> batch;
      batch.reserve(bs);
      for (std::size_t j = 0; j < bs; ++j) batch.push_back(images[order[bounds[b] + j]]);

      std::vector<Views> feats(bs);
      parallel_for(bs, cfg.workers, [&](std::size_t j) {
        const std::size_t idx = order[bounds[b] + j];
        const AugTriplet t =
            make_triplet(batch, j, cfg.policy, image_rng(cfg.seed, idx, epoch), weights);
        feats[j] = {probe_features(t.orig), probe_features(t.aug1), probe_features(t.aug2)};
      });

      std::fill(grad_w.begin(), grad_w.end(), 0.0);
      std::fill(grad_b.begin(), grad_b.end(), 0.0);
      const double inv_bs = 1.0 / static_cast<double>(bs);
      double batch_total = 0.0;
      for (std::size_t j = 0; j < bs; ++j) {
        const std::size_t label = train_set.items[order[bounds[b] + j]].label;
        const SampleLoss s = sample_loss(probe, feats[j], label, cfg, loss);
        batch_total += s.total;
        m.loss += s.total;
        m.ce += s.ce;
        m.jsd += s.jsd;
        for (std::size_t v = 0; v < 3; ++v) {
          if (s.grads[v].empty()) continue;
          for (std::size_t c = 0; c < k; ++c) {
            const double g = s.grads[v][c] * inv_bs;
            grad_b[c] += g;
            double* row = grad_w.data() + c * d;
            for (std::size_t i = 0; i < d; ++i) row[i] += g * feats[j][v][i];
          }
        }
      }
      if (!std::isfinite(batch_total)) {
        fail(ErrorCode::kDivergenceDetected,
             "loss became non-finite in epoch " + std::to_string(epoch + 1));
      }
      const double lr = cfg.learning_rate;
      const double decay = lr * cfg.weight_decay;
      for (std::size_t i = 0; i < probe.weights.size(); ++i) {
        probe.weights[i] -= lr * grad_w[i] + decay * probe.weights[i];
      }
      for (std::size_t c = 0; c < k; ++c) probe.bias[c] -= lr * grad_b[c];
      if (!probe.all_finite()) {
        fail(ErrorCode::kDivergenceDetected,
             "probe parameters became non-finite in epoch " + std::to_string(epoch + 1));
      }
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    m.loss *= inv_n;
    m.ce *= inv_n;
    m.jsd *= inv_n;
    m.eval_acc = evaluate_accuracy(probe, eval_set, cfg.workers);
    m.mean_jsd = consistency_eval(probe, eval_set, cfg.policy, cfg.seed, weights, cfg.workers);
    result.history.push_back(m);
  }
  return result;
}

double evaluate_accuracy(const LinearProbe& probe, const Dataset& dataset, std::size_t workers) {
  if (dataset.items.empty()) fail(ErrorCode::kEmptyInput, "no evaluation images");
  std::vector<char> hit(dataset.items.size(), 0);
  parallel_for(dataset.items.size(), workers, [&](std::size_t i) {
    const auto& item = dataset.items[i];
    hit[i] = probe.predict(probe_features(validation_preprocess(item.image))) == item.label;
  });
  const auto correct = static_cast<double>(std::count(hit.begin(), hit.end(), 1));
  return correct / static_cast<double>(hit.size());
}

double consistency_eval(const LinearProbe& probe, const Dataset& dataset,
                        const AugmentationPolicy& policy, std::uint64_t seed,
                        const WeightStore* weights, std::size_t workers) {
  if (dataset.items.empty()) fail(ErrorCode::kEmptyInput, "no evaluation images");
  const std::vector<ImageRGB> images = images_of(dataset);
  const Rng root(seed);
  std::vector<double> values(images.size());
  parallel_for(images.size(), workers, [&](std::size_t i) {
    const AugTriplet t =
        make_triplet(images, i, policy, root.fork({kConsistencyStream, i}), weights);
    values[i] = jsd3(softmax(probe.logits(probe_features(t.orig))),
                     softmax(probe.logits(probe_features(t.aug1))),
                     softmax(probe.logits(probe_features(t.aug2))));
  });
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

void write_history_csv(const std::vector<EpochMetrics>& history, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::kIoError, "cannot write " + path.string());
  out << "epoch,loss,ce,jsd,eval_acc,mean_jsd\n";
  out.precision(9);
  for (const auto& m : history) {
    out << m.epoch << ',' << m.loss << ',' << m.ce << ',' << m.jsd << ',' << m.eval_acc << ','
        << m.mean_jsd << '\n';
  }
  if (!out) fail(ErrorCode::kIoError, "failed writing " + path.string());
}

}  // namespace styleaug
