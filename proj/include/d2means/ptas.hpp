#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <vector>

#include "d2means/errors.hpp"
#include "d2means/measure.hpp"
#include "d2means/rng.hpp"
#include "d2means/sampler.hpp"
#include "d2means/subsets.hpp"

namespace d2means {

enum class SearchMode { practical, theoretical };

inline constexpr std::uint64_t default_leaf_budget = 100'000'000;

struct PtasParams {
  std::size_t sample_width = 0;  // points drawn per recursion node
  std::size_t subset_size = 0;   // points averaged into one candidate center
  std::size_t repetitions = 1;   // independent restarts, best-of
  SearchMode mode = SearchMode::practical;
  std::uint64_t master_seed = 0;
  double epsilon = 1.0;
  std::uint64_t leaf_budget = default_leaf_budget;  // per-restart leaf cap
};

// Parameter set the approximation guarantee is proved at. Existence-proof
// scale: the subset count overflows anything executable, so it is reported
// as a log2 and the solver refuses to launch a search past the leaf budget.
struct TheoreticalParams {
  double slack = 0.0;  // constant folding the measure's alpha/beta slack
  std::uint64_t sample_width = 0;
  std::uint64_t subset_size = 0;
  double log2_subset_count = 0.0;  // log2 of C(sample_width, subset_size)
  double log2_leaf_estimate = 0.0;  // k * log2_subset_count, leaves per restart
};

// Guarantee-scale sample width and subset size for a k-center search at the
// given epsilon. Report-only: feed the result into a search only when the
// leaf estimate fits the budget (it will not, at any realistic scale).
template <DissimilarityMeasure M>
TheoreticalParams theoretical_params(std::size_t k, double epsilon, const M& measure) {
  if (k < 1) throw std::invalid_argument("theoretical_params: k must be >= 1");
  if (!(epsilon > 0.0 && epsilon <= 1.0))
    throw std::invalid_argument("theoretical_params: epsilon must be in (0, 1]");
  const double alpha = measure.alpha;
  const double beta = measure.beta;
  TheoreticalParams out;
  out.slack = 2.0 * alpha * alpha / (beta * beta) * (1.0 + 1.0 / beta);
  const double gamma = epsilon / (2.0 * out.slack);
  out.subset_size = measure.sample_size(gamma, 0.2);
  const double width = 64.0 * alpha * out.slack * static_cast<double>(k) /
                       (beta * epsilon * epsilon) *
                       static_cast<double>(out.subset_size);
  out.sample_width = static_cast<std::uint64_t>(std::ceil(width));
  out.log2_subset_count = log2_binomial(out.sample_width, out.subset_size);
  out.log2_leaf_estimate = static_cast<double>(k) * out.log2_subset_count;
  return out;
}

// Executable defaults preserving the search structure (oversample by a
// k/epsilon factor, average pairs of sampled points): width max(4,
// ceil(8k/eps)), subsets of 2, 2^k restarts.
inline PtasParams make_practical_params(std::size_t k, double epsilon, std::uint64_t seed) {
  if (k < 1) throw std::invalid_argument("make_practical_params: k must be >= 1");
  if (!(epsilon > 0.0 && epsilon <= 1.0))
    throw std::invalid_argument("make_practical_params: epsilon must be in (0, 1]");
  PtasParams params;
  params.sample_width = static_cast<std::size_t>(
      std::max(4.0, std::ceil(8.0 * static_cast<double>(k) / epsilon)));
  params.subset_size = 2;
  params.repetitions = k < 63 ? (std::uint64_t{1} << k) : std::numeric_limits<std::uint64_t>::max();
  params.mode = SearchMode::practical;
  params.master_seed = seed;
  params.epsilon = epsilon;
  return params;
}

template <DissimilarityMeasure M>
PtasParams make_theoretical_ptas_params(std::size_t k, double epsilon, std::uint64_t seed,
                                        const M& measure) {
  const TheoreticalParams t = theoretical_params(k, epsilon, measure);
  PtasParams params;
  params.sample_width = static_cast<std::size_t>(t.sample_width);
  params.subset_size = static_cast<std::size_t>(t.subset_size);
  params.repetitions = k < 63 ? (std::uint64_t{1} << k) : std::numeric_limits<std::uint64_t>::max();
  params.mode = SearchMode::theoretical;
  params.master_seed = seed;
  params.epsilon = epsilon;
  return params;
}

struct SolveResult {
  CenterSet centers;
  double cost = std::numeric_limits<double>::infinity();
  std::uint64_t leaves_evaluated = 0;
  double elapsed_seconds = 0.0;
  std::uint64_t seed = 0;
  PtasParams params;
};

// Streaming minimum over every candidate solution a search visits. The full
// candidate set is never materialized; only the argmin matters. Ties keep
// the first candidate in traversal order.
struct BestSolution {
  double cost = std::numeric_limits<double>::infinity();
  CenterSet centers;
  std::uint64_t leaves = 0;
  std::function<void(double)> on_leaf;  // test hook, called per candidate when set

  void offer(double candidate_cost, const CenterSet& candidate) {
    ++leaves;
    if (on_leaf) on_leaf(candidate_cost);
    if (candidate_cost < cost) {
      cost = candidate_cost;
      centers = candidate;
    }
  }
};

// Number of leaves a depth-k search with C(width, size) children per node
// evaluates, saturating at UINT64_MAX.
inline std::uint64_t leaf_estimate(std::size_t sample_width, std::size_t subset_size,
                                   std::size_t k) {
  const std::uint64_t per_node = binomial(sample_width, subset_size);
  std::uint64_t leaves = 1;
  for (std::size_t i = 0; i < k; ++i) {
    if (per_node != 0 && leaves > std::numeric_limits<std::uint64_t>::max() / per_node)
      return std::numeric_limits<std::uint64_t>::max();
    leaves *= per_node;
  }
  return leaves;
}

// One recursion node of the search. At depth k the cached total is offered
// to the running minimum (it equals a fresh cost(P, C) bit for bit, since
// both take the same per-point min and sum in index order). Below depth k a
// multiset of sample_width points is drawn once, and every subset_size-sized
// subset of it in lexicographic rank order contributes its centroid as the
// next center: push, recurse, pop. Duplicate sampled points occupy distinct
// subset slots.
template <DissimilarityMeasure M>
void sample_centers(const Dataset& data, std::size_t k, std::size_t depth, CenterSet& centers,
                    DistanceCache& cache, const PtasParams& params, const M& measure, Rng& rng,
                    BestSolution& best) {
  if (depth == k) {
    best.offer(cache.total(), centers);
    return;
  }
  const std::vector<std::size_t> sample =
      draw_multiset(cache, data, params.sample_width, rng);
  const std::uint64_t subset_count = binomial(params.sample_width, params.subset_size);
  std::vector<std::size_t> member_indices(params.subset_size);
  for (std::uint64_t rank = 0; rank < subset_count; ++rank) {
    const std::vector<std::size_t> slots =
        subset_by_rank(params.sample_width, params.subset_size, rank);
    for (std::size_t j = 0; j < slots.size(); ++j) member_indices[j] = sample[slots[j]];
    centers.push_back(centroid_at(data, member_indices));
    cache.push_center(data, centers.back(), measure);
    sample_centers(data, k, depth + 1, centers, cache, params, measure, rng, best);
    cache.pop_center();
    centers.pop_back();
  }
}

namespace detail {

inline CenterSet distinct_points(const Dataset& data) {
  CenterSet distinct;
  for (const Point& p : data.points) {
    bool seen = false;
    for (const Point& q : distinct) {
      if (q == p) {
        seen = true;
        break;
      }
    }
    if (!seen) distinct.push_back(p);
  }
  return distinct;
}

}  // namespace detail

// Best-of over `repetitions` independent restarts of the sampling search,
// each on its own seed substream and its own cache. Deterministic for fixed
// (data, params) regardless of thread count: restart results are merged in
// restart order with a strict-less comparison, so the first-found minimum
// wins ties exactly as in a sequential run.
template <DissimilarityMeasure M>
SolveResult find_k_means(const Dataset& data, std::size_t k, const PtasParams& params,
                         const M& measure, unsigned threads = 1) {
  if (k < 1) throw std::invalid_argument("find_k_means: k must be >= 1");
  if (params.repetitions < 1)
    throw std::invalid_argument("find_k_means: repetitions must be >= 1");
  const auto start = std::chrono::steady_clock::now();

  SolveResult result;
  result.seed = params.master_seed;
  result.params = params;

  // Degenerate instance: every distinct point can be its own center.
  if (data.n() <= k) {
    result.centers = detail::distinct_points(data);
    result.cost = cost(data, result.centers, measure);
    result.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
  }

  if (params.subset_size < 1)
    throw std::invalid_argument("find_k_means: subset size must be >= 1");
  if (params.subset_size > params.sample_width)
    throw std::invalid_argument("find_k_means: subset size exceeds sample width");

  const std::uint64_t leaves = leaf_estimate(params.sample_width, params.subset_size, k);
  if (leaves > params.leaf_budget) {
    std::ostringstream msg;
    msg << "find_k_means: search would evaluate C(" << params.sample_width << ", "
        << params.subset_size << ")^" << k << " ~= 2^"
        << static_cast<double>(k) * log2_binomial(params.sample_width, params.subset_size)
        << " candidate solutions per restart, over the leaf budget " << params.leaf_budget;
    throw budget_error(msg.str());
  }

  // Restarts are processed in blocks: bounded memory for huge repetition
  // counts, and a merge that walks restart indices in order either way.
  const std::uint64_t restarts = params.repetitions;
  const std::uint64_t block_size =
      std::min<std::uint64_t>(restarts, std::max<std::uint64_t>(1024, threads * 64ull));
  std::vector<BestSolution> block;
  std::uint64_t done = 0;
  while (done < restarts) {
    const std::size_t count = static_cast<std::size_t>(std::min(block_size, restarts - done));
    block.assign(count, BestSolution{});
    std::atomic<std::size_t> next_slot{0};
    auto worker = [&]() {
      for (;;) {
        const std::size_t slot = next_slot.fetch_add(1);
        if (slot >= count) return;
        Rng rng(derive_seed(params.master_seed, done + slot));
        DistanceCache cache(data.n());
        CenterSet working;
        working.reserve(k);
        sample_centers(data, k, 0, working, cache, params, measure, rng, block[slot]);
      }
    };
    if (threads <= 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      const unsigned pool_size = static_cast<unsigned>(
          std::min<std::uint64_t>(threads, static_cast<std::uint64_t>(count)));
      pool.reserve(pool_size);
      for (unsigned t = 0; t < pool_size; ++t) pool.emplace_back(worker);
      for (std::thread& t : pool) t.join();
    }
    for (const BestSolution& local : block) {
      result.leaves_evaluated += local.leaves;
      if (local.cost < result.cost) {
        result.cost = local.cost;
        result.centers = local.centers;
      }
    }
    done += count;
  }
  result.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace d2means
