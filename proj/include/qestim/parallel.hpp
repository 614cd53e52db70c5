// Copyright 2026 The QEstim Authors.
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

#include <cstddef>
#include <functional>

namespace qestim {

/// Serial runs the plain loop; Parallel hands it to OpenMP. Both produce the
/// same results because every index writes only its own output slot.
enum class Execution { Serial, Parallel };

/// Thread count used for Parallel execution (QESTIM_THREADS caps it).
int max_threads();

/// Calls body(i) for i in [0, n). The first exception thrown by any index is
/// rethrown after the loop finishes.
void for_each_index(std::size_t n, Execution exec, const std::function<void(std::size_t)>& body);

}  // namespace qestim
