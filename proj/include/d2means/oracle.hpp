#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "d2means/errors.hpp"
#include "d2means/measure.hpp"

namespace d2means {

// Bell(15) ~ 1.38e9 partitions is the edge of desk scale; past it the
// refusal is explicit rather than a silent multi-hour run.
inline constexpr std::size_t oracle_max_points = 15;

struct Partition {
  std::vector<std::uint32_t> labels;  // restricted growth string
  std::uint32_t block_count = 0;
};

// Every partition of {0,...,n-1} into at most max_blocks nonempty blocks,
// exactly once, as restricted growth strings in lexicographic order (the
// first occurrence of label j precedes the first occurrence of j+1).
class PartitionEnumerator {
 public:
  PartitionEnumerator(std::size_t point_count, std::size_t max_blocks)
      : n_(point_count), cap_(max_blocks) {
    if (n_ < 1) throw std::invalid_argument("PartitionEnumerator: need at least one point");
    if (cap_ < 1 || cap_ > n_)
      throw std::invalid_argument("PartitionEnumerator: need 1 <= max_blocks <= n");
    if (n_ > oracle_max_points) {
      std::ostringstream msg;
      msg << "PartitionEnumerator: n = " << n_ << " exceeds the hard cap of "
          << oracle_max_points << " points";
      throw budget_error(msg.str());
    }
    labels_.assign(n_, 0);
    prefix_max_.assign(n_, 0);
  }

  bool next(Partition& out) {
    if (exhausted_) return false;
    if (!started_) {
      started_ = true;
    } else if (!advance()) {
      exhausted_ = true;
      return false;
    }
    out.labels = labels_;
    out.block_count = prefix_max_[n_ - 1] + 1;
    return true;
  }

 private:
  // Lexicographic successor: bump the rightmost label that can grow (at most
  // one past the running prefix max, and under the block cap), zero the tail.
  bool advance() {
    for (std::size_t i = n_ - 1; i >= 1; --i) {
      const std::uint32_t limit =
          std::min<std::uint32_t>(prefix_max_[i - 1] + 1, static_cast<std::uint32_t>(cap_ - 1));
      if (labels_[i] < limit) {
        ++labels_[i];
        prefix_max_[i] = std::max(prefix_max_[i - 1], labels_[i]);
        for (std::size_t j = i + 1; j < n_; ++j) {
          labels_[j] = 0;
          prefix_max_[j] = prefix_max_[i];
        }
        return true;
      }
    }
    return false;
  }

  std::size_t n_;
  std::size_t cap_;
  std::vector<std::uint32_t> labels_;
  std::vector<std::uint32_t> prefix_max_;
  bool started_ = false;
  bool exhausted_ = false;
};

struct OracleResult {
  Partition partition;
  CenterSet centers;  // one centroid per block
  double cost = 0.0;
  std::uint64_t partitions_enumerated = 0;
};

// Exact optimal k-means by exhaustive partition search, squared Euclidean
// only: the centroid decomposition makes each block's mean its best single
// center, so scoring block centroids over all partitions is exact. First
// minimum in enumeration order wins.
inline OracleResult optimal_kmeans(const Dataset& data, std::size_t k) {
  const std::size_t n = data.n();
  const std::size_t d = data.dim();
  if (k < 1 || k > n) throw std::invalid_argument("optimal_kmeans: need 1 <= k <= n");
  PartitionEnumerator partitions(n, k);

  OracleResult best;
  best.cost = std::numeric_limits<double>::infinity();
  Partition current;
  std::vector<double> block_sums(k * d);
  std::vector<std::size_t> block_counts(k);
  std::vector<Point> block_means;

  while (partitions.next(current)) {
    ++best.partitions_enumerated;
    const std::uint32_t blocks = current.block_count;
    std::fill(block_sums.begin(), block_sums.begin() + blocks * d, 0.0);
    std::fill(block_counts.begin(), block_counts.begin() + blocks, std::size_t{0});
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint32_t label = current.labels[i];
      ++block_counts[label];
      const Point& p = data.points[i];
      for (std::size_t c = 0; c < d; ++c) block_sums[label * d + c] += p[c];
    }
    block_means.assign(blocks, Point(d));
    for (std::uint32_t b = 0; b < blocks; ++b) {
      for (std::size_t c = 0; c < d; ++c)
        block_means[b][c] = block_sums[b * d + c] / static_cast<double>(block_counts[b]);
    }
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      total += sq_euclidean(data.points[i], block_means[current.labels[i]]);
    if (total < best.cost) {
      best.cost = total;
      best.partition = current;
      best.centers = block_means;
    }
  }
  return best;
}

}  // namespace d2means
