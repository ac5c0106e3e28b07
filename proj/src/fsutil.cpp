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

#include "guardlab/fsutil.hpp"

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "guardlab/error.hpp"
#include "guardlab/rng.hpp"

namespace guardlab {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kIo, "cannot open " + path);
  std::ostringstream out;
  out << in.rdbuf();
  if (in.bad()) fail(ErrorKind::kIo, "read failed for " + path);
  return out.str();
}

void atomic_write_file(const std::string& path, std::string_view content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path dir = target.parent_path();
  if (dir.empty()) dir = ".";
  std::error_code ec;
  if (!fs::exists(dir, ec)) {
    fail(ErrorKind::kIo, "directory does not exist: " + dir.string());
  }
  // Unique temp name in the same directory (rename is atomic per filesystem).
  std::uint64_t tag = fnv1a64(path);
  fs::path tmp;
  for (int attempt = 0;; ++attempt) {
    tmp = dir / (target.filename().string() + ".tmp" +
                 std::to_string(tag + static_cast<std::uint64_t>(attempt)) +
                 "." + std::to_string(::getpid()));
    if (!fs::exists(tmp, ec)) break;
    if (attempt > 64) fail(ErrorKind::kIo, "cannot allocate temp file near " + path);
  }
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::kIo, "cannot create " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      fs::remove(tmp, ec);
      fail(ErrorKind::kIo, "write failed for " + tmp.string());
    }
  }
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    fail(ErrorKind::kIo, "rename to " + path + " failed");
  }
}

}  // namespace guardlab
