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

#ifndef STYLEAUG_ADAIN_HPP_
#define STYLEAUG_ADAIN_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "styleaug/image.hpp"
#include "styleaug/tensor.hpp"
#include "styleaug/tensor_file.hpp"

namespace styleaug {

// VGG-19 convolutions up to relu4_1 and the mirrored decoder. Channel counts
// scale with base_width; 64 is the full-size network (512 feature channels).
struct ConvLayer {
  enum class After { kNone, kMaxPool, kUpsample };
  std::string name;
  std::size_t in_channels;
  std::size_t out_channels;
  bool relu;
  After after;

  std::string weight_name() const { return name + ".weight"; }
  std::string bias_name() const { return name + ".bias"; }
};

struct AdainArchitecture {
  std::size_t base_width = 64;
  std::vector<ConvLayer> encoder;
  std::vector<ConvLayer> decoder;

  std::size_t feature_channels() const { return 8 * base_width; }
  // Expected (name, shape) pairs in canonical file order.
  std::vector<std::pair<std::string, Shape>> manifest() const;
};

AdainArchitecture adain_architecture(std::size_t base_width);

// Immutable encoder/decoder parameters validated against the architecture.
// A default-constructed store is "not loaded" and every use of it fails with
// WeightsMissing.
class WeightStore {
 public:
  WeightStore() = default;

  // Throws ManifestMismatch naming the first offending layer.
  static WeightStore from_tensor_file(TensorFile file);

  bool loaded() const { return !tensors_.empty(); }
  const AdainArchitecture& architecture() const { return arch_; }
  const Tensor& get(const std::string& name) const;
  const std::array<float, 3>& input_mean() const { return file_.input_mean; }
  const std::array<float, 3>& input_std() const { return file_.input_std; }
  const TensorFile& tensor_file() const { return file_; }

 private:
  TensorFile file_;
  AdainArchitecture arch_;
  std::map<std::string, const Tensor*> tensors_;
};

WeightStore load_weights(const std::filesystem::path& path);
void save_weights(const WeightStore& weights, const std::filesystem::path& path);

// He-initialised store with the given width. Test and benchmark helper.
WeightStore random_weights(std::size_t base_width, std::uint64_t seed,
                           std::array<float, 3> input_mean = {0.485f, 0.456f, 0.406f},
                           std::array<float, 3> input_std = {0.229f, 0.224f, 0.225f});

struct AdainConfig {
  float epsilon = 1e-5f;     // added to the content standard deviation
  float alpha_blend = 1.0f;  // feature-space blend; 1 = full stylization
};

// Forward pass to relu4_1; H and W must be multiples of 8.
Tensor encode(const WeightStore& weights, const ImageRGB& image);

// Per channel: sigma_s * (x - mu_c) / (sigma_c + eps) + mu_s.
Tensor adain(const Tensor& content, const Tensor& style, const AdainConfig& cfg = {});

// Decoder output, de-normalized and clamped to [0,1]; spatial size 8h x 8w.
ImageRGB decode(const WeightStore& weights, const Tensor& features);

// decode(adain(encode(content), encode(style))).
ImageRGB stylize(const WeightStore& weights, const ImageRGB& content, const ImageRGB& style,
                 const AdainConfig& cfg = {});

}  // namespace styleaug

#endif  // STYLEAUG_ADAIN_HPP_
