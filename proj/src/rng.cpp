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

#include "guardlab/rng.hpp"

#include "guardlab/error.hpp"

namespace guardlab {

std::uint64_t derive_seed(std::uint64_t base, std::string_view label) {
  char bytes[8];
  for (int i = 0; i < 8; ++i) {
    bytes[i] = static_cast<char>((base >> (8 * i)) & 0xff);
  }
  std::uint64_t h = fnv1a64(std::string_view(bytes, 8));
  return fnv1a64(label, h);
}

std::size_t Rng::next_index(std::size_t n) {
  if (n == 0) fail(ErrorKind::kStateError, "next_index of empty range");
  return static_cast<std::size_t>(next_double() * static_cast<double>(n));
}

std::size_t Rng::sample_categorical(std::span<const double> weights) {
  if (weights.empty()) {
    fail(ErrorKind::kStateError, "sample_categorical on empty weights");
  }
  double total = 0.0;
  for (double w : weights) total += w;
  if (total <= 0.0) {
    fail(ErrorKind::kStateError, "sample_categorical weights sum to zero");
  }
  double u = next_double() * total;
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] > 0.0) last_positive = i;
    acc += weights[i];
    if (u < acc && weights[i] > 0.0) return i;
  }
  return last_positive;  // guards against fp round-off at the top of the CDF
}

}  // namespace guardlab
