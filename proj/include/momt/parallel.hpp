// Copyright 2026 The momt Authors
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

#pragma once

#include <functional>

namespace momt {

/// Worker cap: MOMT_THREADS if set to a positive integer, else the hardware
/// concurrency (at least 1).
int configured_threads();

/// Runs fn(0..count-1) on up to `threads` workers. Each index runs exactly
/// once; the first exception thrown by any index is rethrown.
void parallel_for(int count, int threads, const std::function<void(int)>& fn);

}  // namespace momt
