// Copyright 2026 The trine-estimators Authors
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

namespace trine {

/// Worker count from the TRINE_WORKERS environment variable, else the
/// hardware concurrency (at least 1).
int default_workers();

/// `workers` <= 0 selects default_workers().
int resolve_workers(int workers);

/// Runs body(i) for i in [0, count) on up to `workers` threads, each taking
/// one contiguous block. Callers write results into per-index slots, so the
/// outcome never depends on the worker count. The exception raised at the
/// lowest index, if any, is rethrown after all threads finish.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)> &body);

} // namespace trine
