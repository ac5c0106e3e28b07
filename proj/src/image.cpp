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

#include "guardlab/image.hpp"

#include <algorithm>
#include <cstring>

#include "guardlab/error.hpp"
#include "guardlab/fsutil.hpp"

namespace guardlab {
namespace {

constexpr std::string_view kB64Alphabet =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

bool pgm_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r';
}

// Reads the next decimal header token, skipping whitespace and '#' comments.
int read_pgm_int(std::string_view bytes, std::size_t& pos) {
  while (pos < bytes.size()) {
    if (pgm_space(bytes[pos])) {
      ++pos;
    } else if (bytes[pos] == '#') {
      while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
    } else {
      break;
    }
  }
  if (pos >= bytes.size() || bytes[pos] < '0' || bytes[pos] > '9') {
    fail(ErrorKind::kBadImage, "malformed PGM header");
  }
  long value = 0;
  while (pos < bytes.size() && bytes[pos] >= '0' && bytes[pos] <= '9') {
    value = value * 10 + (bytes[pos] - '0');
    if (value > 1 << 20) fail(ErrorKind::kBadImage, "PGM header value too large");
    ++pos;
  }
  return static_cast<int>(value);
}

}  // namespace

Image make_image(int width, int height, std::uint8_t fill) {
  if (width < 1 || height < 1) {
    fail(ErrorKind::kBadImage, "image dimensions must be positive");
  }
  Image img;
  img.width = width;
  img.height = height;
  img.pixels.assign(static_cast<std::size_t>(width) * height, fill);
  return img;
}

Image decode_pgm(std::string_view bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') {
    fail(ErrorKind::kBadImage, "not a binary PGM (P5) stream");
  }
  std::size_t pos = 2;
  int width = read_pgm_int(bytes, pos);
  int height = read_pgm_int(bytes, pos);
  int maxval = read_pgm_int(bytes, pos);
  if (width < 1 || height < 1) fail(ErrorKind::kBadImage, "empty PGM raster");
  if (maxval < 1 || maxval > 255) {
    fail(ErrorKind::kBadImage, "unsupported PGM maxval");
  }
  if (pos >= bytes.size() || !pgm_space(bytes[pos])) {
    fail(ErrorKind::kBadImage, "malformed PGM header");
  }
  ++pos;  // single whitespace between header and raster
  std::size_t need = static_cast<std::size_t>(width) * height;
  if (bytes.size() - pos != need) {
    fail(ErrorKind::kBadImage, "PGM raster size mismatch");
  }
  Image img;
  img.width = width;
  img.height = height;
  img.pixels.resize(need);
  std::memcpy(img.pixels.data(), bytes.data() + pos, need);
  return img;
}

std::string encode_pgm(const Image& image) {
  if (image.empty()) fail(ErrorKind::kBadImage, "cannot encode empty image");
  std::string out = "P5\n" + std::to_string(image.width) + " " +
                    std::to_string(image.height) + "\n255\n";
  out.append(reinterpret_cast<const char*>(image.pixels.data()),
             image.pixels.size());
  return out;
}

Image load_image_file(const std::string& path) {
  return decode_pgm(read_file(path));
}

std::string base64_encode(std::string_view bytes) {
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  std::size_t i = 0;
  for (; i + 3 <= bytes.size(); i += 3) {
    std::uint32_t v = (static_cast<unsigned char>(bytes[i]) << 16) |
                      (static_cast<unsigned char>(bytes[i + 1]) << 8) |
                      static_cast<unsigned char>(bytes[i + 2]);
    out.push_back(kB64Alphabet[(v >> 18) & 63]);
    out.push_back(kB64Alphabet[(v >> 12) & 63]);
    out.push_back(kB64Alphabet[(v >> 6) & 63]);
    out.push_back(kB64Alphabet[v & 63]);
  }
  std::size_t rest = bytes.size() - i;
  if (rest == 1) {
    std::uint32_t v = static_cast<unsigned char>(bytes[i]) << 16;
    out.push_back(kB64Alphabet[(v >> 18) & 63]);
    out.push_back(kB64Alphabet[(v >> 12) & 63]);
    out.append("==");
  } else if (rest == 2) {
    std::uint32_t v = (static_cast<unsigned char>(bytes[i]) << 16) |
                      (static_cast<unsigned char>(bytes[i + 1]) << 8);
    out.push_back(kB64Alphabet[(v >> 18) & 63]);
    out.push_back(kB64Alphabet[(v >> 12) & 63]);
    out.push_back(kB64Alphabet[(v >> 6) & 63]);
    out.push_back('=');
  }
  return out;
}

std::string base64_decode(std::string_view text) {
  static constexpr int kInvalid = -1;
  int table[256];
  std::fill(table, table + 256, kInvalid);
  for (int i = 0; i < 64; ++i) {
    table[static_cast<unsigned char>(kB64Alphabet[i])] = i;
  }
  if (text.size() % 4 != 0) {
    fail(ErrorKind::kBadImage, "base64 length not a multiple of 4");
  }
  std::string out;
  out.reserve(text.size() / 4 * 3);
  for (std::size_t i = 0; i < text.size(); i += 4) {
    int pad = 0;
    std::uint32_t v = 0;
    for (int j = 0; j < 4; ++j) {
      char c = text[i + j];
      if (c == '=') {
        if (i + 4 != text.size() || j < 2) {
          fail(ErrorKind::kBadImage, "stray base64 padding");
        }
        ++pad;
        v <<= 6;
        continue;
      }
      if (pad > 0 || table[static_cast<unsigned char>(c)] == kInvalid) {
        fail(ErrorKind::kBadImage, "invalid base64 character");
      }
      v = (v << 6) | static_cast<std::uint32_t>(table[static_cast<unsigned char>(c)]);
    }
    out.push_back(static_cast<char>((v >> 16) & 0xff));
    if (pad < 2) out.push_back(static_cast<char>((v >> 8) & 0xff));
    if (pad < 1) out.push_back(static_cast<char>(v & 0xff));
  }
  return out;
}

Image merge_images(const Image& a, const Image& b, MergeMode mode) {
  if (a.empty() || b.empty()) {
    fail(ErrorKind::kBadImage, "cannot merge empty images");
  }
  if (mode == MergeMode::kHorizontal) {
    Image out = make_image(a.width + b.width, std::max(a.height, b.height), 0);
    for (int y = 0; y < a.height; ++y) {
      for (int x = 0; x < a.width; ++x) out.at(x, y) = a.at(x, y);
    }
    for (int y = 0; y < b.height; ++y) {
      for (int x = 0; x < b.width; ++x) out.at(a.width + x, y) = b.at(x, y);
    }
    return out;
  }
  Image out = make_image(std::max(a.width, b.width), a.height + b.height, 0);
  for (int y = 0; y < a.height; ++y) {
    for (int x = 0; x < a.width; ++x) out.at(x, y) = a.at(x, y);
  }
  for (int y = 0; y < b.height; ++y) {
    for (int x = 0; x < b.width; ++x) out.at(x, a.height + y) = b.at(x, y);
  }
  return out;
}

std::array<double, 64> gray_histogram(const Image& image) {
  std::array<double, 64> hist{};
  if (image.pixels.empty()) return hist;
  for (std::uint8_t p : image.pixels) hist[p >> 2] += 1.0;
  double inv = 1.0 / static_cast<double>(image.pixels.size());
  for (double& h : hist) h *= inv;
  return hist;
}

}  // namespace guardlab
