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
#include <cmath>
#include <string>

#include "styleaug/augment.hpp"
#include "styleaug/error.hpp"
#include "styleaug/kernels.hpp"

namespace styleaug {
namespace {

constexpr std::pair<PolicyKind, std::string_view> kPolicyNames[] = {
    {PolicyKind::kCrop, "crop"},
    {PolicyKind::kTranslate, "translate"},
    {PolicyKind::kColor, "color"},
    {PolicyKind::kAugMixLite, "augmix_lite"},
    {PolicyKind::kRandAugmentLite, "randaugment_lite"},
    {PolicyKind::kNeurofovea, "neurofovea"},
    {PolicyKind::kStyleAug, "styleaug"},
    {PolicyKind::kStyleAugCrop, "styleaug_crop"},
};

// Shared op set of augmix_lite and randaugment_lite.
enum class Op {
  kAutoContrast,
  kEqualize,
  kPosterize,
  kSolarize,
  kRotate,
  kShearX,
  kShearY,
  kTranslateX,
  kTranslateY,
};
constexpr int kNumOps = 9;

void require(bool ok, const std::string& what) {
  if (!ok) fail(ErrorCode::kInvalidParameter, what);
}

void validate_crop(const ResizedCropParams& p, const std::string& name) {
  require(p.scale_min > 0.0 && p.scale_max <= 1.0 && p.scale_min <= p.scale_max,
          name + " scale range must satisfy 0 < min <= max <= 1");
  require(p.ratio_min > 0.0 && p.ratio_min <= p.ratio_max,
          name + " ratio range must satisfy 0 < min <= max");
}

bool in_unit(double v) { return v >= 0.0 && v <= 1.0; }

void check_image(const ImageRGB& img) {
  const Tensor& t = img.pixels();
  if (t.rank() != 3 || t.dim(0) != 3) {
    fail(ErrorCode::kShapeError, "expected a [3,H,W] image, got " + shape_to_string(t.shape()));
  }
}

double signed_by(Rng& rng, double v) { return rng.bernoulli(0.5) ? -v : v; }

ImageRGB apply_op(const ImageRGB& img, Op op, double param) {
  switch (op) {
    case Op::kAutoContrast: return autocontrast(img);
    case Op::kEqualize: return equalize(img);
    case Op::kPosterize: return posterize(img, static_cast<int>(param));
    case Op::kSolarize: return solarize(img, param);
    case Op::kRotate: return rotate(img, param);
    case Op::kShearX: return shear_x(img, param);
    case Op::kShearY: return shear_y(img, param);
    case Op::kTranslateX: return translate_x(img, param);
    case Op::kTranslateY: return translate_y(img, param);
  }
  return img;
}

// AugMix-style magnitude for a level in [0.1, severity] on a 0..10 scale.
double augmix_param(Op op, double level, std::size_t width, Rng& rng) {
  switch (op) {
    case Op::kAutoContrast:
    case Op::kEqualize: return 0.0;
    case Op::kPosterize: return 4.0 - std::floor(level * 4.0 / 10.0);
    case Op::kSolarize: return (256.0 - std::floor(level * 256.0 / 10.0)) / 255.0;
    case Op::kRotate: return signed_by(rng, std::floor(level * 30.0 / 10.0));
    case Op::kShearX:
    case Op::kShearY: return signed_by(rng, level * 0.3 / 10.0);
    case Op::kTranslateX:
    case Op::kTranslateY:
      return signed_by(rng, std::floor(level * (static_cast<double>(width) / 3.0) / 10.0));
  }
  return 0.0;
}

// Fixed-bin magnitude: bin `magnitude` of a linear scale with `bins` entries.
double randaugment_param(Op op, const RandAugmentParams& p, std::size_t width, Rng& rng) {
  const double frac = static_cast<double>(p.magnitude) / static_cast<double>(p.num_bins - 1);
  switch (op) {
    case Op::kAutoContrast:
    case Op::kEqualize: return 0.0;
    case Op::kPosterize: {
      const double step = static_cast<double>(p.num_bins - 1) / 4.0;
      return 8.0 - std::round(static_cast<double>(p.magnitude) / step);
    }
    case Op::kSolarize: return 1.0 - frac;
    case Op::kRotate: return signed_by(rng, 30.0 * frac);
    case Op::kShearX:
    case Op::kShearY: return signed_by(rng, 0.3 * frac);
    case Op::kTranslateX:
    case Op::kTranslateY:
      return signed_by(rng, std::trunc(150.0 / 331.0 * static_cast<double>(width) * frac));
  }
  return 0.0;
}

ImageRGB mix(const ImageRGB& a, const ImageRGB& b, double weight_a) {
  ImageRGB out(Tensor(a.pixels().shape()), a.source_id());
  kernels::active().mix_clamp(a.pixels().raw(), b.pixels().raw(), static_cast<float>(weight_a),
                              out.pixels().raw(), a.pixels().size());
  return out;
}

double sample_m(Rng& rng, const StyleAugParams& p, AugTrace* trace) {
  const double m = p.forced_m ? *p.forced_m : sample_beta(rng, p.alpha, p.beta);
  if (trace) trace->add("styleaug.m", m);
  return m;
}

// Style transfer with the content features already computed.
ImageRGB styleaug_encoded(const ImageRGB& content, const Tensor& content_features,
                          const ImageRGB& style, Rng& rng, const WeightStore& weights,
                          const StyleAugParams& params, AugTrace* trace) {
  if (style.height() != content.height() || style.width() != content.width()) {
    fail(ErrorCode::kShapeError, "style and content images must have equal dimensions");
  }
  const double m = sample_m(rng, params, trace);
  const ImageRGB stylized = decode(weights, adain(content_features, encode(weights, style)));
  return mix(content, stylized, m);
}

}  // namespace

std::string_view policy_name(PolicyKind kind) {
  for (const auto& [k, name] : kPolicyNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

PolicyKind parse_policy_kind(std::string_view name) {
  for (const auto& [k, n] : kPolicyNames) {
    if (n == name) return k;
  }
  fail(ErrorCode::kInvalidParameter, "unknown policy '" + std::string(name) + "'");
}

std::vector<PolicyKind> all_policy_kinds() {
  std::vector<PolicyKind> kinds;
  for (const auto& entry : kPolicyNames) kinds.push_back(entry.first);
  return kinds;
}

AugmentationPolicy AugmentationPolicy::named(PolicyKind kind) {
  AugmentationPolicy p;
  p.kind = kind;
  return p;
}

void AugmentationPolicy::validate() const {
  validate_crop(inception.crop, "inception");
  validate_crop(crop.crop, "crop");
  require(in_unit(inception.flip_prob), "flip probability must be in [0,1]");
  require(inception.size >= 8, "inception output size must be at least 8");
  require(in_unit(translate.max_fraction_x) && in_unit(translate.max_fraction_y),
          "translate fractions must be in [0,1]");
  require(color.brightness >= 0.0 && color.contrast >= 0.0 && color.saturation >= 0.0,
          "color jitter strengths must be non-negative");
  require(color.hue >= 0.0 && color.hue <= 0.5, "hue strength must be in [0,0.5]");
  require(augmix.width >= 1, "augmix width must be positive");
  require(augmix.depth_min >= 1 && augmix.depth_min <= augmix.depth_max,
          "augmix depth range must satisfy 1 <= min <= max");
  require(augmix.severity > 0.1 && augmix.severity <= 10.0, "augmix severity must be in (0.1,10]");
  require(augmix.dirichlet_alpha > 0.0 && augmix.beta_alpha > 0.0,
          "augmix concentrations must be positive");
  require(!augmix.forced_orig_weight || in_unit(*augmix.forced_orig_weight),
          "augmix forced weight must be in [0,1]");
  require(randaugment.num_ops >= 0, "randaugment op count must be non-negative");
  require(randaugment.num_bins >= 2, "randaugment needs at least two bins");
  require(randaugment.magnitude >= 0 && randaugment.magnitude < randaugment.num_bins,
          "randaugment magnitude must index a bin");
  require(neurofovea.tau > 0.0, "neurofovea tau must be positive");
  require(in_unit(neurofovea.min_weight), "neurofovea floor must be in [0,1]");
  require(styleaug.alpha > 0.0 && styleaug.beta > 0.0, "styleaug Beta parameters must be positive");
  require(!styleaug.forced_m || in_unit(*styleaug.forced_m), "styleaug forced m must be in [0,1]");
}

bool AugmentationPolicy::needs_weights() const {
  return kind == PolicyKind::kNeurofovea || needs_style_sources();
}

bool AugmentationPolicy::needs_style_sources() const {
  return kind == PolicyKind::kStyleAug || kind == PolicyKind::kStyleAugCrop;
}

const std::vector<double>* AugTrace::find(std::string_view key) const {
  for (const auto& [k, v] : entries_) {
    if (k == key) return &v;
  }
  return nullptr;
}

CropBox sample_resized_crop_box(Rng& rng, std::size_t height, std::size_t width,
                                const ResizedCropParams& params, AugTrace* trace,
                                std::string_view prefix) {
  validate_crop(params, std::string(prefix));
  const double h = static_cast<double>(height);
  const double w = static_cast<double>(width);
  const double scale = rng.uniform(params.scale_min, params.scale_max);
  // Ratios r for which a box of this area fits: scale*w/h <= r <= w/(scale*h).
  const double fit_lo = std::log(scale * w / h);
  const double fit_hi = std::log(w / (scale * h));
  double lo = std::max(std::log(params.ratio_min), fit_lo);
  double hi = std::min(std::log(params.ratio_max), fit_hi);
  double log_ratio;
  if (lo <= hi) {
    log_ratio = lo == hi ? lo : rng.uniform(lo, hi);
  } else {
    // Image aspect lies outside the ratio range: use the nearest allowed ratio.
    log_ratio = fit_lo > std::log(params.ratio_max) ? std::log(params.ratio_max)
                                                     : std::log(params.ratio_min);
  }
  const double ratio = std::exp(log_ratio);
  const double area = scale * h * w;
  const auto ih = static_cast<long>(height);
  const auto iw = static_cast<long>(width);
  const long cw = std::clamp(std::lround(std::sqrt(area * ratio)), 1L, iw);
  const long ch = std::clamp(std::lround(std::sqrt(area / ratio)), 1L, ih);
  CropBox box;
  box.width = static_cast<int>(cw);
  box.height = static_cast<int>(ch);
  box.y = static_cast<int>(rng.uniform_int(0, ih - ch));
  box.x = static_cast<int>(rng.uniform_int(0, iw - cw));
  if (trace) {
    const std::string p(prefix);
    trace->add(p + ".scale", scale);
    trace->add(p + ".ratio", ratio);
    trace->add(p + ".box", {static_cast<double>(box.x), static_cast<double>(box.y),
                            static_cast<double>(box.width), static_cast<double>(box.height)});
  }
  return box;
}

ImageRGB inception_preprocess(const ImageRGB& img, Rng& rng, const InceptionParams& params,
                              AugTrace* trace) {
  check_image(img);
  if (img.height() < params.min_input || img.width() < params.min_input) {
    fail(ErrorCode::kImageTooSmall,
         "source image " + std::to_string(img.height()) + "x" + std::to_string(img.width()) +
             " is smaller than " + std::to_string(params.min_input) + "x" +
             std::to_string(params.min_input));
  }
  require(in_unit(params.flip_prob), "flip probability must be in [0,1]");
  const CropBox box = sample_resized_crop_box(rng, img.height(), img.width(), params.crop, trace,
                                              "inception");
  ImageRGB out = resized_crop(img, box, params.size, params.size);
  const bool flip = rng.bernoulli(params.flip_prob);
  if (trace) trace->add("inception.flip", flip ? 1.0 : 0.0);
  return flip ? hflip(out) : out;
}

ImageRGB random_crop(const ImageRGB& img, Rng& rng, const CropParams& params, AugTrace* trace) {
  check_image(img);
  const CropBox box = sample_resized_crop_box(rng, img.height(), img.width(), params.crop, trace,
                                              "crop");
  return resized_crop(img, box, img.height(), img.width());
}

ImageRGB random_translate(const ImageRGB& img, Rng& rng, const TranslateParams& params,
                          AugTrace* trace) {
  check_image(img);
  require(in_unit(params.max_fraction_x) && in_unit(params.max_fraction_y),
          "translate fractions must be in [0,1]");
  const double max_dx = params.max_fraction_x * static_cast<double>(img.width());
  const double max_dy = params.max_fraction_y * static_cast<double>(img.height());
  const int dx = static_cast<int>(std::lround(rng.uniform(-max_dx, max_dx)));
  const int dy = static_cast<int>(std::lround(rng.uniform(-max_dy, max_dy)));
  if (trace) trace->add("translate.offset", {static_cast<double>(dx), static_cast<double>(dy)});
  return translate(img, dx, dy);
}

ImageRGB color_jitter(const ImageRGB& img, Rng& rng, const ColorParams& params, AugTrace* trace) {
  check_image(img);
  std::array<int, 4> order{0, 1, 2, 3};
  for (int i = 3; i > 0; --i) {
    std::swap(order[i], order[rng.below(static_cast<std::uint64_t>(i) + 1)]);
  }
  auto factor = [&rng](double strength) {
    return strength > 0.0 ? rng.uniform(std::max(0.0, 1.0 - strength), 1.0 + strength) : 1.0;
  };
  const double brightness = factor(params.brightness);
  const double contrast = factor(params.contrast);
  const double saturation = factor(params.saturation);
  const double hue = params.hue > 0.0 ? rng.uniform(-params.hue, params.hue) : 0.0;
  if (trace) {
    trace->add("color.order", std::vector<double>(order.begin(), order.end()));
    trace->add("color.factors", {brightness, contrast, saturation, hue});
  }
  ImageRGB out = img;
  for (int op : order) {
    switch (op) {
      case 0:
        if (params.brightness > 0.0) out = adjust_brightness(out, brightness);
        break;
      case 1:
        if (params.contrast > 0.0) out = adjust_contrast(out, contrast);
        break;
      case 2:
        if (params.saturation > 0.0) out = adjust_saturation(out, saturation);
        break;
      default:
        if (params.hue > 0.0) out = adjust_hue(out, hue);
        break;
    }
  }
  return out;
}

ImageRGB augmix_lite(const ImageRGB& img, Rng& rng, const AugMixParams& params, AugTrace* trace) {
  check_image(img);
  const std::vector<double> ws =
      sample_dirichlet(rng, params.dirichlet_alpha, static_cast<std::size_t>(params.width));
  const double sampled = sample_beta(rng, params.beta_alpha, params.beta_alpha);
  const double m = params.forced_orig_weight ? *params.forced_orig_weight : sampled;
  if (trace) {
    trace->add("augmix.weights", ws);
    trace->add("augmix.m", m);
  }
  Tensor mixed(img.pixels().shape());
  const auto& k = kernels::active();
  for (int chain = 0; chain < params.width; ++chain) {
    const auto depth = rng.uniform_int(params.depth_min, params.depth_max);
    ImageRGB cur = img;
    std::vector<double> record;
    for (std::int64_t d = 0; d < depth; ++d) {
      const auto op = static_cast<Op>(rng.below(kNumOps));
      const double level = rng.uniform(0.1, params.severity);
      const double param = augmix_param(op, level, img.width(), rng);
      cur = apply_op(cur, op, param);
      record.push_back(static_cast<double>(op));
      record.push_back(param);
    }
    if (trace) trace->add("augmix.chain" + std::to_string(chain), std::move(record));
    k.axpy(static_cast<float>(ws[static_cast<std::size_t>(chain)]), cur.pixels().raw(),
           mixed.raw(), mixed.size());
  }
  return mix(img, ImageRGB(std::move(mixed), img.source_id()), m);
}

ImageRGB randaugment_lite(const ImageRGB& img, Rng& rng, const RandAugmentParams& params,
                          AugTrace* trace) {
  check_image(img);
  require(params.num_bins >= 2 && params.magnitude >= 0 && params.magnitude < params.num_bins,
          "randaugment magnitude must index a bin");
  ImageRGB cur = img;
  std::vector<double> record;
  for (int i = 0; i < params.num_ops; ++i) {
    const auto op = static_cast<Op>(rng.below(kNumOps));
    const double param = randaugment_param(op, params, img.width(), rng);
    cur = apply_op(cur, op, param);
    record.push_back(static_cast<double>(op));
    record.push_back(param);
  }
  if (trace) trace->add("randaugment.ops", std::move(record));
  return cur;
}

ImageRGB neurofovea(const ImageRGB& img, Rng& rng, const WeightStore& weights,
                    const NeurofoveaParams& params, AugTrace* trace) {
  check_image(img);
  if (!weights.loaded()) fail(ErrorCode::kWeightsMissing, "neurofovea needs AdaIN weights");
  const auto h = static_cast<std::int64_t>(img.height());
  const auto w = static_cast<std::int64_t>(img.width());
  const auto fy = rng.uniform_int(h / 4, std::max(h / 4, 3 * h / 4 - 1));
  const auto fx = rng.uniform_int(w / 4, std::max(w / 4, 3 * w / 4 - 1));
  if (trace) trace->add("neurofovea.fovea", {static_cast<double>(fy), static_cast<double>(fx)});
  ImageRGB noise(img.height(), img.width());
  for (float& v : noise.pixels().data()) v = static_cast<float>(rng.uniform());
  const ImageRGB stylized = stylize(weights, noise, img);
  const Tensor mask = foveation_mask(img.height(), img.width(), static_cast<double>(fy),
                                     static_cast<double>(fx), params.tau, params.min_weight);
  ImageRGB out(Tensor(img.pixels().shape()), img.source_id());
  const std::size_t plane = mask.size();
  for (std::size_t c = 0; c < 3; ++c) {
    kernels::active().mix_weighted_clamp(img.pixels().raw() + c * plane,
                                         stylized.pixels().raw() + c * plane, mask.raw(),
                                         out.pixels().raw() + c * plane, plane);
  }
  return out;
}

ImageRGB styleaug(const ImageRGB& content, const ImageRGB& style, Rng& rng,
                  const WeightStore& weights, const StyleAugParams& params, AugTrace* trace) {
  check_image(content);
  check_image(style);
  require(params.alpha > 0.0 && params.beta > 0.0, "styleaug Beta parameters must be positive");
  return styleaug_encoded(content, encode(weights, content), style, rng, weights, params, trace);
}

ImageRGB apply_policy(const ImageRGB& img, const AugmentationPolicy& policy, Rng& rng,
                      const WeightStore* weights, const ImageRGB* style, AugTrace* trace) {
  if (policy.needs_weights() && (weights == nullptr || !weights->loaded())) {
    fail(ErrorCode::kWeightsMissing,
         "policy '" + std::string(policy_name(policy.kind)) + "' needs AdaIN weights");
  }
  if (policy.needs_style_sources() && style == nullptr) {
    fail(ErrorCode::kInvalidParameter, "style policies need a style image");
  }
  switch (policy.kind) {
    case PolicyKind::kCrop: return random_crop(img, rng, policy.crop, trace);
    case PolicyKind::kTranslate: return random_translate(img, rng, policy.translate, trace);
    case PolicyKind::kColor: return color_jitter(img, rng, policy.color, trace);
    case PolicyKind::kAugMixLite: return augmix_lite(img, rng, policy.augmix, trace);
    case PolicyKind::kRandAugmentLite: return randaugment_lite(img, rng, policy.randaugment, trace);
    case PolicyKind::kNeurofovea: return neurofovea(img, rng, *weights, policy.neurofovea, trace);
    case PolicyKind::kStyleAug: return styleaug(img, *style, rng, *weights, policy.styleaug, trace);
    case PolicyKind::kStyleAugCrop: {
      const ImageRGB stylized = styleaug(img, *style, rng, *weights, policy.styleaug, trace);
      return random_crop(stylized, rng, policy.crop, trace);
    }
  }
  return img;
}

std::array<std::size_t, 2> pick_style_sources(const Rng& triplet_rng, std::size_t batch_size,
                                              std::size_t index) {
  if (batch_size < 3) {
    fail(ErrorCode::kBatchTooSmall,
         "style policies need a batch of at least 3 images, got " + std::to_string(batch_size));
  }
  if (index >= batch_size) fail(ErrorCode::kInvalidParameter, "triplet index outside the batch");
  Rng pick = triplet_rng.fork(3);
  std::size_t s1 = pick.below(batch_size - 1);
  if (s1 >= index) ++s1;
  std::size_t s2 = pick.below(batch_size - 2);
  for (std::size_t skip : {std::min(index, s1), std::max(index, s1)}) {
    if (s2 >= skip) ++s2;
  }
  return {s1, s2};
}

AugTriplet make_triplet(std::span<const ImageRGB> batch, std::size_t index,
                        const AugmentationPolicy& policy, const Rng& rng,
                        const WeightStore* weights, TripletTrace* trace,
                        const TripletOptions& options) {
  if (index >= batch.size()) fail(ErrorCode::kInvalidParameter, "triplet index outside the batch");
  policy.validate();
  TripletTrace local;
  TripletTrace& tr = trace ? *trace : local;

  Rng orig_rng = rng.fork(0);
  Rng aug1_rng = rng.fork(1);
  Rng aug2_rng = options.shared_aug_stream ? rng.fork(1) : rng.fork(2);

  AugTriplet out;
  out.orig = inception_preprocess(batch[index], orig_rng, policy.inception, &tr.orig);

  if (!policy.needs_style_sources()) {
    out.aug1 = apply_policy(out.orig, policy, aug1_rng, weights, nullptr, &tr.aug1);
    out.aug2 = apply_policy(out.orig, policy, aug2_rng, weights, nullptr, &tr.aug2);
    return out;
  }

  auto [s1, s2] = pick_style_sources(rng, batch.size(), index);
  if (weights == nullptr || !weights->loaded()) {
    fail(ErrorCode::kWeightsMissing,
         "policy '" + std::string(policy_name(policy.kind)) + "' needs AdaIN weights");
  }
  if (options.shared_aug_stream) s2 = s1;
  tr.style_indices = std::array<std::size_t, 2>{s1, s2};

  Rng style1_rng = rng.fork(4);
  Rng style2_rng = options.shared_aug_stream ? rng.fork(4) : rng.fork(5);
  const ImageRGB style1 = inception_preprocess(batch[s1], style1_rng, policy.inception);
  const ImageRGB style2 = inception_preprocess(batch[s2], style2_rng, policy.inception);

  const Tensor content_features = encode(*weights, out.orig);
  out.aug1 = styleaug_encoded(out.orig, content_features, style1, aug1_rng, *weights,
                              policy.styleaug, &tr.aug1);
  out.aug2 = styleaug_encoded(out.orig, content_features, style2, aug2_rng, *weights,
                              policy.styleaug, &tr.aug2);
  if (policy.kind == PolicyKind::kStyleAugCrop) {
    out.aug1 = random_crop(out.aug1, aug1_rng, policy.crop, &tr.aug1);
    out.aug2 = random_crop(out.aug2, aug2_rng, policy.crop, &tr.aug2);
  }
  return out;
}

}  // namespace styleaug
