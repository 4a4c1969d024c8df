// Copyright 2026 The weakval authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <functional>

namespace weakval {

/// Worker budget: WEAKVAL_THREADS when set (0 means auto), otherwise the
/// hardware concurrency. Always at least 1.
unsigned thread_budget();

/// Runs fn(i) for i in [0, n). Work items must be independent; results keyed
/// by index stay deterministic regardless of the number of workers.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace weakval
