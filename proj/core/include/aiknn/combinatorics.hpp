#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

namespace aiknn {

/// C(n, k). Throws InvalidInput if the result does not fit in 63 bits.
std::uint64_t binomial(std::size_t n, std::size_t k);

/// Writes the `rank`-th k-subset of {0..n-1} in lexicographic order into
/// `out` (size k, strictly increasing).
void unrank_combination(std::uint64_t rank, std::size_t n, std::span<std::size_t> out);

/// Advances `combo` to its lexicographic successor. Returns false (leaving
/// `combo` unspecified) after the last subset.
bool next_combination(std::span<std::size_t> combo, std::size_t n);

}  // namespace aiknn
