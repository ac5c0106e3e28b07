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

#include "guardlab/tokenize.hpp"

namespace guardlab {
namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

bool is_punct(char c) {
  unsigned char u = static_cast<unsigned char>(c);
  return (u >= 0x21 && u <= 0x2f) || (u >= 0x3a && u <= 0x40) ||
         (u >= 0x5b && u <= 0x60) || (u >= 0x7b && u <= 0x7e);
}

}  // namespace

std::vector<std::string_view> tokenize(std::string_view text) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    std::size_t start = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    if (i == start) break;
    std::string_view chunk = text.substr(start, i - start);
    // Peel leading punctuation; each character is a token of its own.
    while (!chunk.empty() && is_punct(chunk.front())) {
      tokens.push_back(chunk.substr(0, 1));
      chunk.remove_prefix(1);
    }
    // Peel trailing punctuation, preserving original order.
    std::size_t tail = 0;
    while (tail < chunk.size() && is_punct(chunk[chunk.size() - 1 - tail])) {
      ++tail;
    }
    if (chunk.size() > tail) tokens.push_back(chunk.substr(0, chunk.size() - tail));
    for (std::size_t t = chunk.size() - tail; t < chunk.size(); ++t) {
      tokens.push_back(chunk.substr(t, 1));
    }
  }
  return tokens;
}

std::size_t count_tokens(std::string_view text) { return tokenize(text).size(); }

std::size_t utf8_length(std::string_view text) {
  std::size_t n = 0;
  for (unsigned char c : text) {
    if ((c & 0xC0) != 0x80) ++n;
  }
  return n;
}

}  // namespace guardlab
