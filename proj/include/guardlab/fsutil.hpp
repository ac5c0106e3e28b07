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

#ifndef GUARDLAB_FSUTIL_HPP_
#define GUARDLAB_FSUTIL_HPP_

#include <string>
#include <string_view>

namespace guardlab {

std::string read_file(const std::string& path);

// Writes to a temporary file in the same directory, then renames over the
// target, so an interrupted run never leaves a half-written artifact.
void atomic_write_file(const std::string& path, std::string_view content);

}  // namespace guardlab

#endif  // GUARDLAB_FSUTIL_HPP_
