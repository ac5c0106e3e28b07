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

#ifndef GUARDLAB_TOKENIZE_HPP_
#define GUARDLAB_TOKENIZE_HPP_

#include <cstddef>
#include <string_view>
#include <vector>

namespace guardlab {

// The lab tokenizer used everywhere token counts matter: text is split on
// ASCII whitespace and each ASCII punctuation character at the edges of a
// chunk becomes its own token ("bomb." -> "bomb", "."). Interior punctuation
// stays inside the token. Deterministic and library-free by design.
std::vector<std::string_view> tokenize(std::string_view text);

std::size_t count_tokens(std::string_view text);

// Code points in a UTF-8 string (continuation bytes are not counted).
std::size_t utf8_length(std::string_view text);

}  // namespace guardlab

#endif  // GUARDLAB_TOKENIZE_HPP_
