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

#ifndef STYLEAUG_AUGMENT_HPP_
#define STYLEAUG_AUGMENT_HPP_

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "styleaug/adain.hpp"
#include "styleaug/image.hpp"
#include "styleaug/rng.hpp"

namespace styleaug {

inline constexpr std::size_t kAugmentSize = 224;

enum class PolicyKind {
  kCrop,
  kTranslate,
  kColor,
  kAugMixLite,
  kRandAugmentLite,
  kNeurofovea,
  kStyleAug,
  kStyleAugCrop,
};

std::string_view policy_name(PolicyKind kind);
PolicyKind parse_policy_kind(std::string_view name);
std::vector<PolicyKind> all_policy_kinds();

struct ResizedCropParams {
  double scale_min = 0.5;
  double scale_max = 1.0;
  double ratio_min = 3.0 / 4.0;
  double ratio_max = 4.0 / 3.0;
};

// Random resized crop to size x size plus horizontal flip.
struct InceptionParams {
  ResizedCropParams crop{};
  double flip_prob = 0.5;
  std::size_t size = kAugmentSize;
  std::size_t min_input = 64;
};

struct CropParams {
  ResizedCropParams crop{0.25, 1.0, 3.0 / 4.0, 4.0 / 3.0};
};

struct TranslateParams {
  double max_fraction_x = 0.5;
  double max_fraction_y = 0.5;
};

struct ColorParams {
  double brightness = 0.4;
  double contrast = 0.4;
  double saturation = 0.2;
  double hue = 0.1;
};

struct AugMixParams {
  int width = 3;
  int depth_min = 1;
  int depth_max = 3;
  double severity = 3.0;
  double dirichlet_alpha = 1.0;
  double beta_alpha = 1.0;
  // Overrides the sampled weight of the original image in the final blend.
  std::optional<double> forced_orig_weight;
};

struct RandAugmentParams {
  int num_ops = 2;
  int magnitude = 9;
  int num_bins = 31;
};

struct NeurofoveaParams {
  double tau = 56.0;  // decay length in pixels
  double min_weight = 0.25;
};

struct StyleAugParams {
  double alpha = 50.0;
  double beta = 50.0;
  std::optional<double> forced_m;
};

struct AugmentationPolicy {
  PolicyKind kind = PolicyKind::kCrop;
  InceptionParams inception;
  CropParams crop;
  TranslateParams translate;
  ColorParams color;
  AugMixParams augmix;
  RandAugmentParams randaugment;
  NeurofoveaParams neurofovea;
  StyleAugParams styleaug;

  static AugmentationPolicy named(PolicyKind kind);
  static AugmentationPolicy named(std::string_view name) { return named(parse_policy_kind(name)); }

  // Throws InvalidParameter on out-of-range parameters.
  void validate() const;
  bool needs_weights() const;
  bool needs_style_sources() const;
};

// Sampled parameters of one augmentation call, in sampling order.
class AugTrace {
 public:
  void add(std::string key, std::vector<double> values) {
    entries_.emplace_back(std::move(key), std::move(values));
  }
  void add(std::string key, double value) { add(std::move(key), std::vector<double>{value}); }
  const std::vector<std::pair<std::string, std::vector<double>>>& entries() const { return entries_; }
  const std::vector<double>* find(std::string_view key) const;

 private:
  std::vector<std::pair<std::string, std::vector<double>>> entries_;
};

// ---- Pixel and geometry primitives (deterministic) ----

ImageRGB adjust_brightness(const ImageRGB& img, double factor);
ImageRGB adjust_contrast(const ImageRGB& img, double factor);
ImageRGB adjust_saturation(const ImageRGB& img, double factor);
ImageRGB adjust_hue(const ImageRGB& img, double offset);

ImageRGB autocontrast(const ImageRGB& img);
ImageRGB equalize(const ImageRGB& img);
ImageRGB posterize(const ImageRGB& img, int bits);
// Values >= threshold become 1 - value.
ImageRGB solarize(const ImageRGB& img, double threshold);

// Affine warps about the image centre; bilinear sampling, zero fill.
ImageRGB rotate(const ImageRGB& img, double degrees);
ImageRGB shear_x(const ImageRGB& img, double factor);
ImageRGB shear_y(const ImageRGB& img, double factor);
ImageRGB translate_x(const ImageRGB& img, double pixels);
ImageRGB translate_y(const ImageRGB& img, double pixels);

// Integer shift with zero fill: out(y, x) = in(y - dy, x - dx).
ImageRGB translate(const ImageRGB& img, int dx, int dy);

// Per-pixel weight of the original: max(min_weight, exp(-d / tau)), d the
// distance to (fovea_y, fovea_x). Returned as an [H,W] tensor.
Tensor foveation_mask(std::size_t height, std::size_t width, double fovea_y, double fovea_x,
                      double tau, double min_weight);

// ---- Stochastic augmentations ----

// Box with area fraction uniform in [scale_min, scale_max] and log-uniform
// aspect ratio, restricted to ratios for which the box fits.
CropBox sample_resized_crop_box(Rng& rng, std::size_t height, std::size_t width,
                                const ResizedCropParams& params, AugTrace* trace = nullptr,
                                std::string_view prefix = "crop");

ImageRGB inception_preprocess(const ImageRGB& img, Rng& rng, const InceptionParams& params = {},
                              AugTrace* trace = nullptr);
ImageRGB random_crop(const ImageRGB& img, Rng& rng, const CropParams& params = {},
                     AugTrace* trace = nullptr);
ImageRGB random_translate(const ImageRGB& img, Rng& rng, const TranslateParams& params = {},
                          AugTrace* trace = nullptr);
ImageRGB color_jitter(const ImageRGB& img, Rng& rng, const ColorParams& params = {},
                      AugTrace* trace = nullptr);
ImageRGB augmix_lite(const ImageRGB& img, Rng& rng, const AugMixParams& params = {},
                     AugTrace* trace = nullptr);
ImageRGB randaugment_lite(const ImageRGB& img, Rng& rng, const RandAugmentParams& params = {},
                          AugTrace* trace = nullptr);
ImageRGB neurofovea(const ImageRGB& img, Rng& rng, const WeightStore& weights,
                    const NeurofoveaParams& params = {}, AugTrace* trace = nullptr);

// m * content + (1 - m) * decode(adain(encode(content), encode(style))),
// m ~ Beta(alpha, beta) unless forced.
ImageRGB styleaug(const ImageRGB& content, const ImageRGB& style, Rng& rng,
                  const WeightStore& weights, const StyleAugParams& params = {},
                  AugTrace* trace = nullptr);

// Applies policy.kind to an already preprocessed image. Style policies need
// `style`; weight-backed policies need `weights`.
ImageRGB apply_policy(const ImageRGB& img, const AugmentationPolicy& policy, Rng& rng,
                      const WeightStore* weights, const ImageRGB* style = nullptr,
                      AugTrace* trace = nullptr);

struct AugTriplet {
  ImageRGB orig;
  ImageRGB aug1;
  ImageRGB aug2;
};

struct TripletTrace {
  AugTrace orig;
  AugTrace aug1;
  AugTrace aug2;
  std::optional<std::array<std::size_t, 2>> style_indices;
};

struct TripletOptions {
  // Drives both augmentations from the same stream so aug1 == aug2.
  bool shared_aug_stream = false;
};

// Two distinct batch members other than `index`, drawn from the triplet
// stream's selection child. BatchTooSmall below 3 images.
std::array<std::size_t, 2> pick_style_sources(const Rng& triplet_rng, std::size_t batch_size,
                                              std::size_t index);

// orig = inception_preprocess(batch[index]); aug1/aug2 = policy(orig) with
// independent child streams. Style policies draw two distinct style sources
// from the rest of the batch, each preprocessed independently.
AugTriplet make_triplet(std::span<const ImageRGB> batch, std::size_t index,
                        const AugmentationPolicy& policy, const Rng& rng,
                        const WeightStore* weights, TripletTrace* trace = nullptr,
                        const TripletOptions& options = {});

}  // namespace styleaug

#endif  // STYLEAUG_AUGMENT_HPP_
