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

#include "styleaug/adain.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "styleaug/error.hpp"
#include "styleaug/kernels.hpp"
#include "styleaug/rng.hpp"

namespace styleaug {

AdainArchitecture adain_architecture(std::size_t base_width) {
  if (base_width == 0) fail(ErrorCode::kInvalidParameter, "base width must be positive");
  const std::size_t b1 = base_width, b2 = 2 * base_width, b4 = 4 * base_width, b8 = 8 * base_width;
  using A = ConvLayer::After;
  AdainArchitecture arch;
  arch.base_width = base_width;
  arch.encoder = {
      {"encoder.conv1_1", 3, b1, true, A::kNone},
      {"encoder.conv1_2", b1, b1, true, A::kMaxPool},
      {"encoder.conv2_1", b1, b2, true, A::kNone},
      {"encoder.conv2_2", b2, b2, true, A::kMaxPool},
      {"encoder.conv3_1", b2, b4, true, A::kNone},
      {"encoder.conv3_2", b4, b4, true, A::kNone},
      {"encoder.conv3_3", b4, b4, true, A::kNone},
      {"encoder.conv3_4", b4, b4, true, A::kMaxPool},
      {"encoder.conv4_1", b4, b8, true, A::kNone},
  };
  arch.decoder = {
      {"decoder.conv4_1", b8, b4, true, A::kUpsample},
      {"decoder.conv3_4", b4, b4, true, A::kNone},
      {"decoder.conv3_3", b4, b4, true, A::kNone},
      {"decoder.conv3_2", b4, b4, true, A::kNone},
      {"decoder.conv3_1", b4, b2, true, A::kUpsample},
      {"decoder.conv2_2", b2, b2, true, A::kNone},
      {"decoder.conv2_1", b2, b1, true, A::kUpsample},
      {"decoder.conv1_2", b1, b1, true, A::kNone},
      {"decoder.conv1_1", b1, 3, false, A::kNone},
  };
  return arch;
}

std::vector<std::pair<std::string, Shape>> AdainArchitecture::manifest() const {
  std::vector<std::pair<std::string, Shape>> out;
  for (const auto* layers : {&encoder, &decoder}) {
    for (const ConvLayer& l : *layers) {
      out.emplace_back(l.weight_name(), Shape{l.out_channels, l.in_channels, 3, 3});
      out.emplace_back(l.bias_name(), Shape{l.out_channels});
    }
  }
  return out;
}

WeightStore WeightStore::from_tensor_file(TensorFile file) {
  WeightStore store;
  std::map<std::string, const Tensor*> by_name;
  for (const auto& [name, tensor] : file.entries) {
    if (!by_name.emplace(name, &tensor).second) {
      fail(ErrorCode::kManifestMismatch, "duplicate tensor '" + name + "'");
    }
  }
  const std::string probe = "encoder.conv1_1.weight";
  const auto first = by_name.find(probe);
  if (first == by_name.end()) fail(ErrorCode::kManifestMismatch, "missing layer '" + probe + "'");
  if (first->second->rank() != 4) {
    fail(ErrorCode::kManifestMismatch, "layer '" + probe + "' has shape " +
                                           shape_to_string(first->second->shape()));
  }
  const AdainArchitecture arch = adain_architecture(first->second->dim(0));
  const auto manifest = arch.manifest();
  for (const auto& [name, shape] : manifest) {
    const auto it = by_name.find(name);
    if (it == by_name.end()) fail(ErrorCode::kManifestMismatch, "missing layer '" + name + "'");
    if (it->second->shape() != shape) {
      fail(ErrorCode::kManifestMismatch, "layer '" + name + "' has shape " +
                                             shape_to_string(it->second->shape()) + ", expected " +
                                             shape_to_string(shape));
    }
  }
  if (by_name.size() != manifest.size()) {
    std::set<std::string> expected;
    for (const auto& entry : manifest) expected.insert(entry.first);
    for (const auto& [name, _] : by_name) {
      if (!expected.count(name)) fail(ErrorCode::kManifestMismatch, "unexpected tensor '" + name + "'");
    }
  }
  for (int c = 0; c < 3; ++c) {
    if (!(file.input_std[c] > 0.0f) || !std::isfinite(file.input_mean[c])) {
      fail(ErrorCode::kManifestMismatch, "input normalization metadata is invalid");
    }
  }
  for (const auto& [name, tensor] : file.entries) {
    if (!tensor.all_finite()) fail(ErrorCode::kManifestMismatch, "layer '" + name + "' has non-finite values");
  }
  store.file_ = std::move(file);
  store.arch_ = arch;
  for (const auto& [name, tensor] : store.file_.entries) store.tensors_.emplace(name, &tensor);
  return store;
}

const Tensor& WeightStore::get(const std::string& name) const {
  const auto it = tensors_.find(name);
  if (it == tensors_.end()) fail(ErrorCode::kWeightsMissing, "weights not loaded or missing '" + name + "'");
  return *it->second;
}

WeightStore load_weights(const std::filesystem::path& path) {
  try {
    return WeightStore::from_tensor_file(read_tensor_file(path));
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

void save_weights(const WeightStore& weights, const std::filesystem::path& path) {
  if (!weights.loaded()) fail(ErrorCode::kWeightsMissing, "no weights to save");
  write_tensor_file(weights.tensor_file(), path);
}

WeightStore random_weights(std::size_t base_width, std::uint64_t seed,
                           std::array<float, 3> input_mean, std::array<float, 3> input_std) {
  const AdainArchitecture arch = adain_architecture(base_width);
  Rng rng(seed);
  TensorFile file;
  file.input_mean = input_mean;
  file.input_std = input_std;
  for (const auto& [name, shape] : arch.manifest()) {
    Tensor t(shape);
    if (shape.size() == 4) {
      const double fan_in = static_cast<double>(shape[1] * 9);
      const double sd = std::sqrt(2.0 / fan_in);
      for (float& v : t.data()) v = static_cast<float>(sd * rng.normal());
    } else {
      for (float& v : t.data()) v = static_cast<float>(0.01 * rng.normal());
    }
    file.entries.emplace_back(name, std::move(t));
  }
  return WeightStore::from_tensor_file(std::move(file));
}

namespace {

void require_loaded(const WeightStore& weights) {
  if (!weights.loaded()) fail(ErrorCode::kWeightsMissing, "AdaIN weights are not loaded");
}

// Per-thread scratch reused across calls, so steady-state forward passes do
// not allocate.
struct Workspace {
  std::vector<float> act;
  std::vector<float> padded;
  std::vector<float> next;
};

float* sized(std::vector<float>& buf, std::size_t n) {
  if (buf.size() < n) buf.resize(n);
  return buf.data();
}

void reflect_pad(const float* in, std::size_t c, std::size_t h, std::size_t w, float* out) {
  const std::size_t pw = w + 2;
  for (std::size_t ch = 0; ch < c; ++ch) {
    const float* src = in + ch * h * w;
    float* dst = out + ch * (h + 2) * pw;
    for (std::size_t y = 0; y < h + 2; ++y) {
      const std::size_t sy = y == 0 ? 1 : (y == h + 1 ? h - 2 : y - 1);
      const float* srow = src + sy * w;
      float* drow = dst + y * pw;
      std::copy(srow, srow + w, drow + 1);
      drow[0] = srow[1];
      drow[pw - 1] = srow[w - 2];
    }
  }
}

void upsample2x(const float* in, std::size_t c, std::size_t h, std::size_t w, float* out) {
  for (std::size_t ch = 0; ch < c; ++ch) {
    const float* src = in + ch * h * w;
    float* dst = out + ch * 4 * h * w;
    for (std::size_t y = 0; y < h; ++y) {
      float* r0 = dst + 2 * y * 2 * w;
      for (std::size_t x = 0; x < w; ++x) r0[2 * x] = r0[2 * x + 1] = src[y * w + x];
      std::copy(r0, r0 + 2 * w, r0 + 2 * w);
    }
  }
}

Tensor run_layers(const WeightStore& weights, const std::vector<ConvLayer>& layers, const Tensor& x) {
  thread_local Workspace ws;
  const auto& k = kernels::active();
  std::size_t c = x.dim(0), h = x.dim(1), w = x.dim(2);
  if (h < 2 || w < 2) fail(ErrorCode::kShapeError, "feature maps must be at least 2x2");
  std::copy(x.data().begin(), x.data().end(), sized(ws.act, x.size()));
  for (const ConvLayer& layer : layers) {
    const Tensor& kernel = weights.get(layer.weight_name());
    const std::size_t cout = kernel.dim(0);
    reflect_pad(ws.act.data(), c, h, w, sized(ws.padded, c * (h + 2) * (w + 2)));
    float* out = sized(ws.next, cout * h * w);
    k.conv3x3(ws.padded.data(), c, h, w, kernel.raw(), weights.get(layer.bias_name()).raw(), cout, out);
    c = cout;
    if (layer.relu) k.relu(out, c * h * w);
    if (layer.after == ConvLayer::After::kMaxPool) {
      float* pooled = sized(ws.act, c * (h / 2) * (w / 2));
      for (std::size_t ch = 0; ch < c; ++ch) k.maxpool2x2(out + ch * h * w, h, w, pooled + ch * (h / 2) * (w / 2));
      h /= 2;
      w /= 2;
    } else if (layer.after == ConvLayer::After::kUpsample) {
      upsample2x(out, c, h, w, sized(ws.act, c * 4 * h * w));
      h *= 2;
      w *= 2;
    } else {
      std::swap(ws.act, ws.next);
    }
  }
  Tensor y({c, h, w});
  std::copy(ws.act.begin(), ws.act.begin() + static_cast<std::ptrdiff_t>(c * h * w), y.raw());
  return y;
}

}  // namespace

Tensor encode(const WeightStore& weights, const ImageRGB& image) {
  require_loaded(weights);
  if (image.height() % 8 || image.width() % 8) {
    fail(ErrorCode::kShapeError, "encode needs H and W divisible by 8, got " +
                                     std::to_string(image.height()) + "x" + std::to_string(image.width()));
  }
  const auto& k = kernels::active();
  Tensor x(image.pixels().shape());
  const std::size_t plane = image.height() * image.width();
  for (std::size_t c = 0; c < 3; ++c) {
    const float inv = 1.0f / weights.input_std()[c];
    k.affine(image.pixels().channel(c).data(), inv, -weights.input_mean()[c] * inv,
             x.channel(c).data(), plane);
  }
  return run_layers(weights, weights.architecture().encoder, x);
}

Tensor adain(const Tensor& content, const Tensor& style, const AdainConfig& cfg) {
  if (content.rank() != 3 || style.rank() != 3 || content.dim(0) != style.dim(0)) {
    fail(ErrorCode::kShapeMismatch, "adain: content " + shape_to_string(content.shape()) +
                                        " vs style " + shape_to_string(style.shape()));
  }
  if (!(cfg.epsilon > 0.0f)) fail(ErrorCode::kInvalidParameter, "adain epsilon must be positive");
  const ops::ChannelStats cs = ops::channel_stats(content);
  const ops::ChannelStats ss = ops::channel_stats(style);
  const auto& k = kernels::active();
  Tensor out(content.shape());
  const std::size_t plane = content.dim(1) * content.dim(2);
  for (std::size_t c = 0; c < content.dim(0); ++c) {
    const float gain = ss.std[c] / (cs.std[c] + cfg.epsilon);
    float* dst = out.channel(c).data();
    // Centre first so a constant channel maps exactly onto the style mean.
    k.affine(content.channel(c).data(), 1.0f, -cs.mean[c], dst, plane);
    k.affine(dst, gain, ss.mean[c], dst, plane);
  }
  if (cfg.alpha_blend != 1.0f) {
    const float a = cfg.alpha_blend;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a * out[i] + (1.0f - a) * content[i];
  }
  return out;
}

ImageRGB decode(const WeightStore& weights, const Tensor& features) {
  require_loaded(weights);
  const AdainArchitecture& arch = weights.architecture();
  if (features.rank() != 3 || features.dim(0) != arch.feature_channels()) {
    fail(ErrorCode::kShapeMismatch, "decode expects [" + std::to_string(arch.feature_channels()) +
                                        ",h,w] features, got " + shape_to_string(features.shape()));
  }
  Tensor y = run_layers(weights, arch.decoder, features);
  const auto& k = kernels::active();
  const std::size_t plane = y.dim(1) * y.dim(2);
  for (std::size_t c = 0; c < 3; ++c) {
    float* ch = y.channel(c).data();
    k.affine(ch, weights.input_std()[c], weights.input_mean()[c], ch, plane);
  }
  clamp01_inplace(y);
  return ImageRGB(std::move(y));
}

ImageRGB stylize(const WeightStore& weights, const ImageRGB& content, const ImageRGB& style,
                 const AdainConfig& cfg) {
  const Tensor zc = encode(weights, content);
  const Tensor zs = encode(weights, style);
  ImageRGB out = decode(weights, adain(zc, zs, cfg));
  out.set_source_id(content.source_id());
  return out;
}

}  // namespace styleaug
