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

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "styleaug/error.hpp"
#include "styleaug/image.hpp"
#include "test_util.hpp"

namespace styleaug {
namespace {

namespace fs = std::filesystem;

ErrorCode decode_error(std::vector<std::uint8_t> bytes) {
  try {
    decode_image(bytes);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "decode succeeded";
  return ErrorCode::kIoError;
}

ImageRGB quantized_image(std::size_t h, std::size_t w, std::uint64_t seed) {
  Rng rng(seed);
  ImageRGB img(h, w);
  for (float& v : img.pixels().data()) v = static_cast<float>(rng.below(256)) / 255.0f;
  return img;
}

fs::path temp_path(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "styleaug_image_test";
  fs::create_directories(dir);
  return dir / name;
}

TEST(Codec, WhitePpmPixel) {
  const std::string ppm = "P6\n1 1\n255\n\xff\xff\xff";
  const ImageRGB img = decode_image(std::vector<std::uint8_t>(ppm.begin(), ppm.end()));
  EXPECT_EQ(img.pixels(), Tensor({3, 1, 1}, 1.0f));
}

TEST(Codec, PpmHeaderComments) {
  const char raw[] = "P6 # comment\n2 # w\n1\n255\n\x00\x80\xff\x10\x20\x30";
  const std::string ppm(raw, sizeof(raw) - 1);
  const ImageRGB img = decode_image(std::vector<std::uint8_t>(ppm.begin(), ppm.end()));
  ASSERT_EQ(img.width(), 2u);
  EXPECT_FLOAT_EQ(img.at(1, 0, 0), 128.0f / 255.0f);
  EXPECT_FLOAT_EQ(img.at(2, 0, 1), 48.0f / 255.0f);
}

TEST(Codec, BlackPngPixel) {
  const ImageRGB black(1, 1);
  const ImageRGB img = decode_image(encode_png(black));
  EXPECT_EQ(img.pixels(), Tensor({3, 1, 1}, 0.0f));
}

TEST(Codec, PngAndPpmRoundTripAtEightBits) {
  const ImageRGB img = quantized_image(13, 17, 1);
  EXPECT_EQ(decode_image(encode_png(img)), img);
  EXPECT_EQ(decode_image(encode_ppm(img)), img);
  const fs::path png = temp_path("rt.png"), ppm = temp_path("rt.ppm");
  save_image(img, png);
  save_image(img, ppm);
  EXPECT_EQ(load_image(png), img);
  EXPECT_EQ(load_image(ppm), img);
  save_image(load_image(png), png);
  EXPECT_EQ(load_image(png), img);
}

TEST(Codec, SaveQuantizesByRounding) {
  ImageRGB img(1, 1);
  img.at(0, 0, 0) = 0.5f;
  img.at(1, 0, 0) = 1.7f;
  img.at(2, 0, 0) = -0.2f;
  const ImageRGB back = decode_image(encode_png(img));
  EXPECT_FLOAT_EQ(back.at(0, 0, 0), 128.0f / 255.0f);
  EXPECT_FLOAT_EQ(back.at(1, 0, 0), 1.0f);
  EXPECT_FLOAT_EQ(back.at(2, 0, 0), 0.0f);
}

TEST(Codec, EncodingIsDeterministic) {
  const ImageRGB img = quantized_image(20, 9, 2);
  EXPECT_EQ(encode_png(img), encode_png(img));
}

TEST(Codec, ErrorsAreClassified) {
  EXPECT_EQ(decode_error({'G', 'I', 'F', '8', '9', 'a'}), ErrorCode::kUnsupportedFormat);
  std::vector<std::uint8_t> png = encode_png(quantized_image(8, 8, 3));
  png.resize(png.size() / 2);
  EXPECT_EQ(decode_error(png), ErrorCode::kDecodeError);
  const std::string truncated = "P6\n4 4\n255\n\x01\x02";
  EXPECT_EQ(decode_error({truncated.begin(), truncated.end()}), ErrorCode::kDecodeError);
  const std::string wide = "P6\n1 1\n65535\n\x01\x02\x03\x04\x05\x06";
  EXPECT_EQ(decode_error({wide.begin(), wide.end()}), ErrorCode::kUnsupportedFormat);
  try {
    load_image(temp_path("does_not_exist.png"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIoError);
  }
}

TEST(Hsv, KnownColorsAndRoundTrip) {
  const Hsv red = rgb_to_hsv(1, 0, 0);
  EXPECT_FLOAT_EQ(red.h, 0.0f);
  EXPECT_FLOAT_EQ(red.s, 1.0f);
  const Hsv green = rgb_to_hsv(0, 1, 0);
  EXPECT_NEAR(green.h, 1.0f / 3.0f, 1e-6);
  const Hsv gray = rgb_to_hsv(0.4f, 0.4f, 0.4f);
  EXPECT_FLOAT_EQ(gray.s, 0.0f);
  EXPECT_FLOAT_EQ(gray.v, 0.4f);
  const ImageRGB img = testing::random_image(9, 11, 4);
  const Tensor back = hsv_to_rgb(rgb_to_hsv(img.pixels()));
  EXPECT_LT(testing::max_abs_diff(back, img.pixels()), 1e-5);
  const Tensor hsv = rgb_to_hsv(img.pixels());
  for (float h : hsv.channel(0)) {
    EXPECT_GE(h, 0.0f);
    EXPECT_LT(h, 1.0f);
  }
}

TEST(Geometry, FullBoxResizedCropIsResize) {
  const ImageRGB img = testing::smooth_image(40, 40, 5);
  EXPECT_EQ(resized_crop(img, {0, 0, 40, 40}, 40, 40), img);
  EXPECT_EQ(resized_crop(img, {0, 0, 40, 40}, 64, 64), resize_bilinear(img, 64, 64));
}

TEST(Geometry, BilinearHalfPixelOracle) {
  // 2x upsampling of a 1x2 row: half-pixel centres give weights 1/4, 3/4.
  ImageRGB img(1, 2);
  for (std::size_t c = 0; c < 3; ++c) {
    img.at(c, 0, 0) = 0.0f;
    img.at(c, 0, 1) = 1.0f;
  }
  const ImageRGB up = resize_bilinear(img, 1, 4);
  EXPECT_FLOAT_EQ(up.at(0, 0, 0), 0.0f);
  EXPECT_FLOAT_EQ(up.at(0, 0, 1), 0.25f);
  EXPECT_FLOAT_EQ(up.at(0, 0, 2), 0.75f);
  EXPECT_FLOAT_EQ(up.at(0, 0, 3), 1.0f);
}

TEST(Geometry, CropFlipCenter) {
  const ImageRGB img = testing::random_image(10, 12, 6);
  const ImageRGB c = crop(img, {3, 2, 4, 5});
  ASSERT_EQ(c.height(), 5u);
  EXPECT_EQ(c.at(1, 4, 3), img.at(1, 6, 6));
  const ImageRGB f = hflip(img);
  EXPECT_EQ(f.at(2, 3, 0), img.at(2, 3, 11));
  EXPECT_EQ(hflip(f), img);
  const ImageRGB cc = center_crop(img, 4, 4);
  EXPECT_EQ(cc.at(0, 0, 0), img.at(0, 3, 4));
  EXPECT_THROW(resized_crop(img, {10, 0, 4, 4}, 4, 4), Error);
}

TEST(Geometry, ValidationPreprocessShape) {
  for (auto [h, w] : {std::pair<std::size_t, std::size_t>{64, 64}, {300, 500}, {256, 256}}) {
    const ImageRGB out = validation_preprocess(testing::smooth_image(h, w, 7));
    EXPECT_EQ(out.height(), 224u);
    EXPECT_EQ(out.width(), 224u);
  }
}

TEST(Geometry, BlockAverage) {
  Tensor t({1, 2, 4}, std::vector<float>{1, 3, 5, 7, 1, 3, 5, 7});
  const Tensor avg = block_average(t, 2);
  EXPECT_EQ(avg.shape(), (Shape{1, 1, 2}));
  EXPECT_FLOAT_EQ(avg[0], 2.0f);
  EXPECT_FLOAT_EQ(avg[1], 6.0f);
  EXPECT_THROW(block_average(t, 3), Error);
}

TEST(Geometry, UpsampleThenBlockAverageIsIdentity) {
  const Tensor in = testing::random_tensor({3, 6, 5}, 8);
  EXPECT_EQ(block_average(ops::upsample_nearest2x(in), 2), in);
}

}  // namespace
}  // namespace styleaug
