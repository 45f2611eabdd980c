#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <random>

namespace lde {

using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x) noexcept;

// Independent generator keyed by a master seed and a tuple of indices (test
// index, sweep coordinates, ...). Streams depend only on the key, never on
// the order in which work items are scheduled.
Rng stream_rng(std::uint64_t seed, std::initializer_list<std::uint64_t> keys);

// Runs body(i) for i in [0, count) on up to `jobs` threads. Each index is
// handled exactly once; body must only write to index-owned state.
void parallel_for(std::size_t count, unsigned jobs,
                  const std::function<void(std::size_t)>& body);

}  // namespace lde
