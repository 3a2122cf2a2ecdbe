// Copyright 2026 The voxeval Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef VOXEVAL_PARALLEL_HPP_
#define VOXEVAL_PARALLEL_HPP_

#include <cstddef>
#include <functional>

namespace voxeval {

inline constexpr const char* kThreadsEnvVar = "VOXEVAL_THREADS";

// 0 means auto: the VOXEVAL_THREADS environment variable if set to a
// positive integer, otherwise std::thread::hardware_concurrency().
std::size_t resolve_threads(std::size_t requested);

// Calls fn(i) for every i in [0, n) on up to `threads` workers (after
// resolve_threads). Work items are claimed dynamically, so fn must only
// write to per-index state. If any call throws, the exception from the
// lowest failing index is rethrown after all workers stop.
void parallel_for(std::size_t n, std::size_t threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace voxeval

#endif  // VOXEVAL_PARALLEL_HPP_
