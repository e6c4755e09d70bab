#include "riplab/combinatorics.hpp"

#include <limits>

#include "riplab/errors.hpp"

namespace riplab {

std::uint64_t binomial(int n, int k) {
  if (n < 0 || k < 0) throw argument_error("binomial: negative argument");
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t result = 1;
  for (int i = 1; i <= k; ++i) {
    const std::uint64_t factor = static_cast<std::uint64_t>(n - k + i);
    // result * factor / i is exact (it is C(n-k+i, i)); check the multiply.
    if (result > kMax / factor) return kMax;
    result = result * factor / static_cast<std::uint64_t>(i);
  }
  return result;
}

std::vector<int> first_combination(int k) {
  std::vector<int> c(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) c[static_cast<std::size_t>(i)] = i;
  return c;
}

bool next_combination(std::vector<int>& c, int n) {
  const int k = static_cast<int>(c.size());
  int i = k - 1;
  while (i >= 0 && c[static_cast<std::size_t>(i)] == n - k + i) --i;
  if (i < 0) return false;
  ++c[static_cast<std::size_t>(i)];
  for (int j = i + 1; j < k; ++j)
    c[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j - 1)] + 1;
  return true;
}

std::vector<int> unrank_combination(std::uint64_t rank, int n, int k) {
  if (rank >= binomial(n, k)) throw argument_error("unrank_combination: rank out of range");
  std::vector<int> c;
  c.reserve(static_cast<std::size_t>(k));
  int value = 0;
  for (int slot = 0; slot < k; ++slot) {
    // Count combinations starting at each candidate value.
    for (;; ++value) {
      const std::uint64_t tail = binomial(n - value - 1, k - slot - 1);
      if (rank < tail) break;
      rank -= tail;
    }
    c.push_back(value);
    ++value;
  }
  return c;
}

}  // namespace riplab
