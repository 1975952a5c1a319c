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

#include <png.h>

#include <cctype>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "styleaug/error.hpp"
#include "styleaug/image.hpp"

namespace styleaug {
namespace {

constexpr std::uint8_t kPngSignature[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1A, '\n'};

ImageRGB from_interleaved(const std::uint8_t* data, std::size_t h, std::size_t w,
                          std::size_t stride_px, std::string source_id) {
  ImageRGB img(h, w, std::move(source_id));
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      const std::uint8_t* px = data + (y * w + x) * stride_px;
      for (std::size_t c = 0; c < 3; ++c) img.at(c, y, x) = static_cast<float>(px[c]) / 255.0f;
    }
  }
  return img;
}

std::vector<std::uint8_t> to_interleaved(const ImageRGB& image) {
  const std::size_t h = image.height(), w = image.width();
  std::vector<std::uint8_t> out(h * w * 3);
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      for (std::size_t c = 0; c < 3; ++c) out[(y * w + x) * 3 + c] = to_u8(image.at(c, y, x));
    }
  }
  return out;
}

ImageRGB decode_png(std::span<const std::uint8_t> bytes, std::string source_id) {
  png_image png;
  std::memset(&png, 0, sizeof(png));
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&png, bytes.data(), bytes.size())) {
    fail(ErrorCode::kDecodeError, "PNG header: " + std::string(png.message));
  }
  if (png.format & PNG_FORMAT_FLAG_LINEAR) {
    png_image_free(&png);
    fail(ErrorCode::kUnsupportedFormat, "16-bit PNG is not supported");
  }
  // Decode with alpha kept so it can be discarded rather than composited.
  png.format = PNG_FORMAT_RGBA;
  std::vector<std::uint8_t> buffer(PNG_IMAGE_SIZE(png));
  if (!png_image_finish_read(&png, nullptr, buffer.data(), 0, nullptr)) {
    const std::string msg = png.message;
    png_image_free(&png);
    fail(ErrorCode::kDecodeError, "PNG data: " + msg);
  }
  return from_interleaved(buffer.data(), png.height, png.width, 4, std::move(source_id));
}

// Reads the next whitespace-delimited PPM header token, skipping comments.
std::size_t ppm_token(std::span<const std::uint8_t> bytes, std::size_t& pos) {
  for (;;) {
    while (pos < bytes.size() && std::isspace(bytes[pos])) ++pos;
    if (pos < bytes.size() && bytes[pos] == '#') {
      while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      continue;
    }
    break;
  }
  std::size_t value = 0;
  std::size_t digits = 0;
  while (pos < bytes.size() && std::isdigit(bytes[pos])) {
    value = value * 10 + (bytes[pos] - '0');
    if (value > (1u << 24)) fail(ErrorCode::kDecodeError, "PPM header value too large");
    ++pos;
    ++digits;
  }
  if (digits == 0) fail(ErrorCode::kDecodeError, "malformed PPM header");
  return value;
}

ImageRGB decode_ppm(std::span<const std::uint8_t> bytes, std::string source_id) {
  std::size_t pos = 2;
  const std::size_t w = ppm_token(bytes, pos);
  const std::size_t h = ppm_token(bytes, pos);
  const std::size_t maxval = ppm_token(bytes, pos);
  if (w == 0 || h == 0) fail(ErrorCode::kDecodeError, "PPM has zero dimension");
  if (maxval != 255) fail(ErrorCode::kUnsupportedFormat, "PPM maxval must be 255");
  if (pos >= bytes.size() || !std::isspace(bytes[pos])) {
    fail(ErrorCode::kDecodeError, "malformed PPM header");
  }
  ++pos;
  if (bytes.size() - pos < w * h * 3) fail(ErrorCode::kDecodeError, "PPM pixel data truncated");
  return from_interleaved(bytes.data() + pos, h, w, 3, std::move(source_id));
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIoError, "cannot open " + path.string());
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), {});
}

void write_file(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIoError, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorCode::kIoError, "write failed for " + path.string());
}

}  // namespace

ImageRGB decode_image(std::span<const std::uint8_t> bytes, std::string source_id) {
  if (bytes.size() >= 8 && std::memcmp(bytes.data(), kPngSignature, 8) == 0) {
    return decode_png(bytes, std::move(source_id));
  }
  if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '6') {
    return decode_ppm(bytes, std::move(source_id));
  }
  if (bytes.size() < 2) fail(ErrorCode::kDecodeError, "image data too short");
  fail(ErrorCode::kUnsupportedFormat, "not a PNG or binary PPM file");
}

ImageRGB load_image(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  try {
    return decode_image(bytes, path.filename().string());
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

std::vector<std::uint8_t> encode_png(const ImageRGB& image) {
  const auto pixels = to_interleaved(image);
  png_image png;
  std::memset(&png, 0, sizeof(png));
  png.version = PNG_IMAGE_VERSION;
  png.width = static_cast<png_uint_32>(image.width());
  png.height = static_cast<png_uint_32>(image.height());
  png.format = PNG_FORMAT_RGB;
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&png, nullptr, &size, 0, pixels.data(), 0, nullptr)) {
    fail(ErrorCode::kIoError, "PNG encode: " + std::string(png.message));
  }
  std::vector<std::uint8_t> out(size);
  if (!png_image_write_to_memory(&png, out.data(), &size, 0, pixels.data(), 0, nullptr)) {
    fail(ErrorCode::kIoError, "PNG encode: " + std::string(png.message));
  }
  out.resize(size);
  return out;
}

std::vector<std::uint8_t> encode_ppm(const ImageRGB& image) {
  const std::string header = "P6\n" + std::to_string(image.width()) + " " +
                             std::to_string(image.height()) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  const auto pixels = to_interleaved(image);
  out.insert(out.end(), pixels.begin(), pixels.end());
  return out;
}

void save_image(const ImageRGB& image, const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  for (char& ch : ext) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  write_file(path, ext == ".ppm" ? encode_ppm(image) : encode_png(image));
}

}  // namespace styleaug
