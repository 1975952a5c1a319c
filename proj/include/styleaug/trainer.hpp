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

#ifndef STYLEAUG_TRAINER_HPP_
#define STYLEAUG_TRAINER_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "styleaug/adain.hpp"
#include "styleaug/augment.hpp"
#include "styleaug/dataset.hpp"
#include "styleaug/losses.hpp"
#include "styleaug/tensor.hpp"

namespace styleaug {

inline constexpr std::size_t kProbeResolution = 32;
inline constexpr std::size_t kProbeInputDim = 3 * kProbeResolution * kProbeResolution;

// Probe input: block-average of a 224x224 image down to 32x32, flattened and
// shifted by -0.5.
std::vector<double> probe_features(const ImageRGB& image);

// Linear softmax classifier logits = W x + b.
struct LinearProbe {
  std::size_t num_classes = 0;
  std::size_t input_dim = kProbeInputDim;
  std::vector<double> weights;  // [K, D] row-major
  std::vector<double> bias;     // [K]

  static LinearProbe zeros(std::size_t num_classes, std::size_t input_dim = kProbeInputDim);
  std::vector<double> logits(std::span<const double> features) const;
  std::size_t predict(std::span<const double> features) const;
  bool all_finite() const;

  TensorFile to_tensor_file() const;
  static LinearProbe from_tensor_file(const TensorFile& file);
};

enum class CeTarget { kAug1, kOrig };

struct TrainConfig {
  std::size_t epochs = 20;
  std::size_t batch_size = 16;
  double learning_rate = 0.01;
  double weight_decay = 1e-4;
  std::uint64_t seed = 0;
  AugmentationPolicy policy;
  LossConfig loss;
  bool use_jsd = true;
  // Image whose prediction gets the cross-entropy when use_jsd is off.
  CeTarget ce_target = CeTarget::kAug1;
  double eval_fraction = 0.2;
  std::size_t workers = 1;

  void validate() const;  // InvalidParameter
};

struct EpochMetrics {
  std::size_t epoch = 0;
  double loss = 0.0;
  double ce = 0.0;
  double jsd = 0.0;
  double eval_acc = 0.0;
  double mean_jsd = 0.0;
};

struct TrainResult {
  LinearProbe probe;
  std::vector<EpochMetrics> history;
};

// Requires >= 2 classes and >= 20 images per class (DatasetTooSmall).
// Throws DivergenceDetected if a batch loss becomes non-finite.
TrainResult train(const Dataset& dataset, const TrainConfig& cfg, const WeightStore* weights = nullptr);

// Top-1 accuracy on validation-preprocessed images.
double evaluate_accuracy(const LinearProbe& probe, const Dataset& dataset, std::size_t workers = 1);

// Mean jsd3 over the probe's predictions on a triplet per image.
double consistency_eval(const LinearProbe& probe, const Dataset& dataset,
                        const AugmentationPolicy& policy, std::uint64_t seed,
                        const WeightStore* weights = nullptr, std::size_t workers = 1);

void write_history_csv(const std::vector<EpochMetrics>& history, const std::filesystem::path& path);

}  // namespace styleaug

#endif  // STYLEAUG_TRAINER_HPP_
