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

#ifndef STYLEAUG_IMAGE_HPP_
#define STYLEAUG_IMAGE_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "styleaug/tensor.hpp"

namespace styleaug {

// An RGB image stored as a [3,H,W] tensor with values in [0,1].
class ImageRGB {
 public:
  ImageRGB() = default;
  explicit ImageRGB(Tensor pixels, std::string source_id = {});
  ImageRGB(std::size_t height, std::size_t width, std::string source_id = {});

  const Tensor& pixels() const { return pixels_; }
  Tensor& pixels() { return pixels_; }
  const std::string& source_id() const { return source_id_; }
  void set_source_id(std::string id) { source_id_ = std::move(id); }

  std::size_t height() const { return pixels_.dim(1); }
  std::size_t width() const { return pixels_.dim(2); }

  float at(std::size_t c, std::size_t y, std::size_t x) const { return pixels_.at(c, y, x); }
  float& at(std::size_t c, std::size_t y, std::size_t x) { return pixels_.at(c, y, x); }

  friend bool operator==(const ImageRGB& a, const ImageRGB& b) {
    return a.pixels_ == b.pixels_;
  }

 private:
  Tensor pixels_;
  std::string source_id_;
};

// Codecs: PNG (8-bit gray/RGB/RGBA/palette, alpha dropped) and binary PPM.
ImageRGB load_image(const std::filesystem::path& path);
ImageRGB decode_image(std::span<const std::uint8_t> bytes, std::string source_id = {});
// Format chosen by extension: ".ppm" writes P6, anything else PNG.
void save_image(const ImageRGB& image, const std::filesystem::path& path);
std::vector<std::uint8_t> encode_png(const ImageRGB& image);
std::vector<std::uint8_t> encode_ppm(const ImageRGB& image);

std::uint8_t to_u8(float v);

// Hexcone HSV with hue in [0,1).
struct Hsv {
  float h, s, v;
};
Hsv rgb_to_hsv(float r, float g, float b);
void hsv_to_rgb(const Hsv& hsv, float& r, float& g, float& b);
Tensor rgb_to_hsv(const Tensor& rgb);
Tensor hsv_to_rgb(const Tensor& hsv);

struct CropBox {
  int x = 0;
  int y = 0;
  int width = 0;
  int height = 0;
  friend bool operator==(const CropBox&, const CropBox&) = default;
};

// Bilinear sampling with half-pixel centers and edge clamping inside the
// source region (no antialiasing).
ImageRGB resize_bilinear(const ImageRGB& image, std::size_t out_h, std::size_t out_w);
ImageRGB resized_crop(const ImageRGB& image, const CropBox& box, std::size_t out_h,
                      std::size_t out_w);
ImageRGB crop(const ImageRGB& image, const CropBox& box);
ImageRGB hflip(const ImageRGB& image);
ImageRGB center_crop(const ImageRGB& image, std::size_t out_h, std::size_t out_w);

// Evaluation preprocessing: shorter side resized to 256, then a 224x224
// center crop.
ImageRGB validation_preprocess(const ImageRGB& image);

// Mean over non-overlapping factor x factor blocks.
Tensor block_average(const Tensor& input, std::size_t factor);

void clamp01_inplace(Tensor& t);

}  // namespace styleaug

#endif  // STYLEAUG_IMAGE_HPP_
