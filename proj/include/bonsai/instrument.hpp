// Copyright 2026 The Bonsai Authors
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

#pragma once

#include <cstdint>

// Elementary-operation counter used to check the asymptotic cost of the
// client and cloud pipelines. Counting is per thread and always on; the hot
// loops add in bulk so the overhead is one add per loop, not per element.
namespace bonsai::instrument {

inline thread_local std::uint64_t op_count = 0;

inline void tick(std::uint64_t n = 1) { op_count += n; }

// Measures the operations performed while the scope is alive.
class OpScope {
 public:
  OpScope() : start_(op_count) {}
  std::uint64_t elapsed() const { return op_count - start_; }

 private:
  std::uint64_t start_;
};

}  // namespace bonsai::instrument
