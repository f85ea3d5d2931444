#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "d2means/measure.hpp"
#include "d2means/rng.hpp"

namespace d2means {

// Per-point minimum dissimilarity to the current center set, one array per
// added center. Keeping every level makes removing the most recent center an
// exact O(1) restore, which is what the backtracking search needs. Storage is
// O(|centers| * n) doubles; level buffers are pooled so a push after a pop
// reuses storage instead of reallocating.
class DistanceCache {
 public:
  explicit DistanceCache(std::size_t point_count) : point_count_(point_count) {}

  std::size_t depth() const { return depth_; }
  bool empty() const { return depth_ == 0; }
  std::size_t point_count() const { return point_count_; }

  // Top-level array: min_dists()[i] = D(p_i, current centers).
  const std::vector<double>& min_dists() const {
    if (depth_ == 0) throw std::invalid_argument("DistanceCache: no centers pushed");
    return levels_[depth_ - 1];
  }

  // Sum of the top-level array.
  double total() const {
    if (depth_ == 0) throw std::invalid_argument("DistanceCache: no centers pushed");
    return totals_[depth_ - 1];
  }

  template <DissimilarityMeasure M>
  void push_center(const Dataset& data, const Point& center, const M& measure) {
    if (data.n() != point_count_)
      throw std::invalid_argument("DistanceCache: dataset size mismatch");
    if (depth_ == levels_.size()) {
      levels_.emplace_back(point_count_);
      totals_.push_back(0.0);
    }
    std::vector<double>& level = levels_[depth_];
    double sum = 0.0;
    if (depth_ == 0) {
      for (std::size_t i = 0; i < point_count_; ++i) {
        level[i] = measure(data.points[i], center);
        sum += level[i];
      }
    } else {
      const std::vector<double>& prev = levels_[depth_ - 1];
      for (std::size_t i = 0; i < point_count_; ++i) {
        level[i] = std::min(prev[i], measure(data.points[i], center));
        sum += level[i];
      }
    }
    totals_[depth_] = sum;
    ++depth_;
  }

  // Discards the top level; the cache is bit-identical to its state before
  // the matching push.
  void pop_center() {
    if (depth_ == 0) throw std::invalid_argument("DistanceCache: pop on empty stack");
    --depth_;
  }

 private:
  std::size_t point_count_;
  std::size_t depth_ = 0;
  std::vector<std::vector<double>> levels_;
  std::vector<double> totals_;
};

inline std::size_t uniform_draw(const Dataset& data, Rng& rng) {
  return static_cast<std::size_t>(rng.next_below(data.n()));
}

namespace detail {

// Inverts a cumulative-sum table against one uniform variate. Zero-weight
// entries are never selected: upper_bound skips runs of equal prefix values.
inline std::size_t pick_by_prefix(const std::vector<double>& prefix, Rng& rng) {
  const double u = rng.next_double() * prefix.back();
  const auto it = std::upper_bound(prefix.begin(), prefix.end(), u);
  const auto idx = static_cast<std::size_t>(it - prefix.begin());
  return std::min(idx, prefix.size() - 1);
}

inline std::vector<double> prefix_sums(const std::vector<double>& weights) {
  std::vector<double> prefix(weights.size());
  double running = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    running += weights[i];
    prefix[i] = running;
  }
  return prefix;
}

}  // namespace detail

// One draw with probability proportional to the cached distance to the
// nearest center. When every point sits on a center (total mass zero) the
// draw falls back to uniform: any sample is harmless then.
inline std::size_t d2_draw(const DistanceCache& cache, const Dataset& data, Rng& rng) {
  const std::vector<double> prefix = detail::prefix_sums(cache.min_dists());
  if (!(prefix.back() > 0.0)) return uniform_draw(data, rng);
  return detail::pick_by_prefix(prefix, rng);
}

// `count` independent draws; duplicates are kept in draw order. Uniform when
// no center has been pushed yet (the convention for the first round).
inline std::vector<std::size_t> draw_multiset(const DistanceCache& cache, const Dataset& data,
                                              std::size_t count, Rng& rng) {
  std::vector<std::size_t> sample;
  sample.reserve(count);
  if (cache.empty()) {
    for (std::size_t i = 0; i < count; ++i) sample.push_back(uniform_draw(data, rng));
    return sample;
  }
  const std::vector<double> prefix = detail::prefix_sums(cache.min_dists());
  if (!(prefix.back() > 0.0)) {
    for (std::size_t i = 0; i < count; ++i) sample.push_back(uniform_draw(data, rng));
    return sample;
  }
  for (std::size_t i = 0; i < count; ++i) sample.push_back(detail::pick_by_prefix(prefix, rng));
  return sample;
}

}  // namespace d2means
