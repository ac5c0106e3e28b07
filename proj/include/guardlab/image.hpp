// Copyright 2026 The guardlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GUARDLAB_IMAGE_HPP_
#define GUARDLAB_IMAGE_HPP_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace guardlab {

// Grayscale raster image, row-major. The lab's on-disk format is binary PGM
// (P5, 8-bit), which keeps the codec self-contained.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  bool empty() const { return width == 0 || height == 0; }
  std::uint8_t at(int x, int y) const {
    return pixels[static_cast<std::size_t>(y) * width + x];
  }
  std::uint8_t& at(int x, int y) {
    return pixels[static_cast<std::size_t>(y) * width + x];
  }
  bool operator==(const Image&) const = default;
};

Image make_image(int width, int height, std::uint8_t fill = 0);

// PGM (P5) codec. decode throws BadImage on malformed input.
Image decode_pgm(std::string_view bytes);
std::string encode_pgm(const Image& image);

// Reads and decodes a PGM file; throws BadImage / Io.
Image load_image_file(const std::string& path);

std::string base64_encode(std::string_view bytes);
std::string base64_decode(std::string_view text);  // throws BadImage

enum class MergeMode { kHorizontal, kVertical };

// Pixel-level side-by-side (or stacked) merge; the shorter edge is padded
// with black.
Image merge_images(const Image& a, const Image& b, MergeMode mode);

// Fraction of pixels per intensity bin (64 bins of width 4).
std::array<double, 64> gray_histogram(const Image& image);

}  // namespace guardlab

#endif  // GUARDLAB_IMAGE_HPP_
