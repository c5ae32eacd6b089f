#include "aiknn/combinatorics.hpp"

#include <limits>
#include <string>

#include "aiknn/error.hpp"

namespace aiknn {
namespace {
__extension__ using u128 = unsigned __int128;
}  // namespace

std::uint64_t binomial(std::size_t n, std::size_t k) {
  if (k > n) {
    return 0;
  }
  if (k > n - k) {
    k = n - k;
  }
  // Multiplicative formula; every intermediate value is itself a binomial.
  u128 result = 1;
  constexpr auto kLimit = static_cast<u128>(std::numeric_limits<std::int64_t>::max());
  for (std::size_t i = 1; i <= k; ++i) {
    result = result * (n - k + i) / i;
    if (result > kLimit) {
      throw InvalidInput("C(" + std::to_string(n) + ", " + std::to_string(k) +
                         ") exceeds the supported subset count");
    }
  }
  return static_cast<std::uint64_t>(result);
}

void unrank_combination(std::uint64_t rank, std::size_t n, std::span<std::size_t> out) {
  const std::size_t k = out.size();
  if (rank >= binomial(n, k)) {
    throw InvalidInput("combination rank out of range");
  }
  std::size_t next = 0;
  for (std::size_t pos = 0; pos < k; ++pos) {
    // Skip candidate values whose block of completions lies before `rank`.
    while (true) {
      const std::uint64_t block = binomial(n - next - 1, k - pos - 1);
      if (rank < block) {
        break;
      }
      rank -= block;
      ++next;
    }
    out[pos] = next++;
  }
}

bool next_combination(std::span<std::size_t> combo, std::size_t n) {
  const std::size_t k = combo.size();
  if (k == 0) {
    return false;
  }
  std::size_t i = k;
  while (i > 0) {
    --i;
    if (combo[i] < n - k + i) {
      ++combo[i];
      for (std::size_t j = i + 1; j < k; ++j) {
        combo[j] = combo[j - 1] + 1;
      }
      return true;
    }
  }
  return false;
}

}  // namespace aiknn
