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

#ifndef GUARDLAB_DATASET_IO_HPP_
#define GUARDLAB_DATASET_IO_HPP_

#include <string>
#include <string_view>

#include "guardlab/types.hpp"

namespace guardlab {

// Dataset files are JSONL: one object per line with keys, in canonical
// order: id, modality, text, image_path, image_b64, response, prompt_label,
// response_label, reasoning, source, parents. Absent optionals are omitted.
// Unknown keys are a ParseError.

// Parses JSONL content. Does not decode images or validate invariants;
// callers that need validated data go through pipeline ingest().
Dataset parse_jsonl(std::string_view content, const std::string& name);

std::string to_jsonl(const Dataset& dataset);

// parse_jsonl on a file; dataset name is the file stem.
Dataset read_jsonl_file(const std::string& path);

// Canonical serialization, written atomically.
void write_jsonl_file(const Dataset& dataset, const std::string& path);

}  // namespace guardlab

#endif  // GUARDLAB_DATASET_IO_HPP_
