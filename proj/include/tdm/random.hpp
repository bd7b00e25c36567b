#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <utility>

namespace tdm {

// std::uniform_int_distribution and std::shuffle are free to differ between
// standard libraries. Everything that must be byte-reproducible goes through
// these helpers, which only rely on the fully specified mt19937_64 engine.

using Rng = std::mt19937_64;

/// Generator seeded from a global seed alone.
Rng make_rng(std::uint64_t seed);

/// Generator seeded from (global seed, key); independent of iteration order.
Rng make_rng(std::uint64_t seed, std::string_view key);

/// Uniform integer in [0, bound) by rejection sampling. bound must be > 0.
std::uint64_t uniform_below(Rng& rng, std::uint64_t bound);

/// Fisher-Yates shuffle.
template <typename T>
void shuffle(std::span<T> items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform_below(rng, i));
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace tdm
