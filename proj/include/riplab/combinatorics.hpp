#pragma once

#include <cstdint>
#include <vector>

namespace riplab {

/// Binomial coefficient, saturating at UINT64_MAX on overflow.
std::uint64_t binomial(int n, int k);

/// First k-combination of {0..n-1} in lexicographic order.
std::vector<int> first_combination(int k);

/// Advances c to the next k-combination of {0..n-1} in lexicographic order.
/// Returns false (leaving c unspecified) after the last one.
bool next_combination(std::vector<int>& c, int n);

/// Combination with the given lexicographic rank (0-based).
std::vector<int> unrank_combination(std::uint64_t rank, int n, int k);

}  // namespace riplab
