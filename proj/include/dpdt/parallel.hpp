// Copyright 2026 The dpdt Authors
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

#include <algorithm>
#include <cstdlib>
#include <optional>
#include <thread>
#include <vector>

namespace dpdt {

// Worker count for the data-parallel scans, from DPDT_THREADS (default 1).
inline unsigned scan_threads() {
  const char* env = std::getenv("DPDT_THREADS");
  if (env == nullptr) return 1;
  long v = std::strtol(env, nullptr, 10);
  if (v < 1) return 1;
  unsigned hw = std::thread::hardware_concurrency();
  return static_cast<unsigned>(v > (hw == 0 ? 64 : hw) ? (hw == 0 ? 64 : hw) : v);
}

// Applies `evaluate(i)` over [0, count) and keeps the single best result as
// judged by `better(candidate, incumbent)`. Workers scan disjoint
// contiguous chunks; partial winners are merged in chunk order, and ties
// keep the earlier index, so the result is identical to a serial
// left-to-right scan.
template <typename Result, typename Evaluate, typename Better>
std::optional<Result> scan_reduce(std::size_t count, Evaluate evaluate,
                                  Better better) {
  if (count == 0) return std::nullopt;
  unsigned workers = scan_threads();
  if (workers <= 1 || count < 2 * workers) {
    std::optional<Result> best;
    for (std::size_t i = 0; i < count; ++i) {
      Result r = evaluate(i);
      if (!best || better(r, *best)) best = std::move(r);
    }
    return best;
  }
  std::vector<std::optional<Result>> partial(workers);
  std::vector<std::thread> pool;
  std::size_t chunk = (count + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      std::size_t lo = w * chunk, hi = std::min(count, lo + chunk);
      for (std::size_t i = lo; i < hi; ++i) {
        Result r = evaluate(i);
        if (!partial[w] || better(r, *partial[w])) partial[w] = std::move(r);
      }
    });
  }
  for (auto& t : pool) t.join();
  std::optional<Result> best;
  for (auto& p : partial)
    if (p && (!best || better(*p, *best))) best = std::move(*p);
  return best;
}

}  // namespace dpdt
