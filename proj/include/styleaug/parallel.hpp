/* Copyright 2026 The StyleAug Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef STYLEAUG_PARALLEL_HPP_
#define STYLEAUG_PARALLEL_HPP_

#include <cstddef>
#include <functional>

namespace styleaug {

std::size_t default_workers();

// Runs fn(i) for i in [0, n) on up to `workers` threads. Work is claimed by
// index, so results written to slot i do not depend on scheduling. If calls
// throw, the exception from the lowest index is rethrown after all finish.
void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& fn);

}  // namespace styleaug

#endif  // STYLEAUG_PARALLEL_HPP_
