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

#ifndef GUARDLAB_PARALLEL_HPP_
#define GUARDLAB_PARALLEL_HPP_

#include <cstddef>
#include <functional>

namespace guardlab {

// Runs fn(i) for i in [0, n) on a bounded worker pool. Work items must be
// independent; callers make results scheduling-invariant by writing into
// per-index slots and seeding any randomness per index. The first exception
// is rethrown on the calling thread. threads <= 0 picks a default.
void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace guardlab

#endif  // GUARDLAB_PARALLEL_HPP_
