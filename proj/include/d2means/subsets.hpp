#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace d2means {

// Exact binomial coefficient, saturating at UINT64_MAX. Every intermediate
// product/quotient is an exact binomial prefix, so no rounding occurs before
// saturation.
inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  if (n - k < k) k = n - k;
  unsigned __int128 acc = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    acc = acc * (n - k + i) / i;
    if (acc > std::numeric_limits<std::uint64_t>::max())
      return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(acc);
}

// log2(C(n, k)) via lgamma, for sizes far past the exact range.
inline double log2_binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return -std::numeric_limits<double>::infinity();
  const double ln = std::lgamma(static_cast<double>(n) + 1.0) -
                    std::lgamma(static_cast<double>(k) + 1.0) -
                    std::lgamma(static_cast<double>(n - k) + 1.0);
  return ln / 0.69314718055994530941723212145818;
}

// The rank-th size-m subset of {0,...,n-1} in lexicographic order
// (combinatorial unranking; bijective over 0 <= rank < C(n, m)).
inline std::vector<std::size_t> subset_by_rank(std::size_t n, std::size_t m, std::uint64_t rank) {
  if (m > n) throw std::invalid_argument("subset_by_rank: subset size exceeds ground set");
  if (rank >= binomial(n, m)) throw std::invalid_argument("subset_by_rank: rank out of range");
  std::vector<std::size_t> subset;
  subset.reserve(m);
  std::size_t element = 0;
  for (std::size_t slot = 0; slot < m; ++slot) {
    for (;; ++element) {
      const std::uint64_t tails = binomial(n - element - 1, m - slot - 1);
      if (rank < tails) break;
      rank -= tails;
    }
    subset.push_back(element);
    ++element;
  }
  return subset;
}

// Inverse of subset_by_rank. `subset` must be strictly increasing, < n.
inline std::uint64_t rank_of_subset(std::size_t n, std::span<const std::size_t> subset) {
  const std::size_t m = subset.size();
  if (m > n) throw std::invalid_argument("rank_of_subset: subset size exceeds ground set");
  std::uint64_t rank = 0;
  std::size_t element = 0;
  for (std::size_t slot = 0; slot < m; ++slot) {
    if (subset[slot] >= n || (slot > 0 && subset[slot] <= subset[slot - 1]))
      throw std::invalid_argument("rank_of_subset: not a strictly increasing subset");
    for (; element < subset[slot]; ++element)
      rank += binomial(n - element - 1, m - slot - 1);
    ++element;
  }
  return rank;
}

}  // namespace d2means
