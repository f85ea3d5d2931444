#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "d2means/errors.hpp"
#include "d2means/measure.hpp"
#include "d2means/oracle.hpp"
#include "d2means/ptas.hpp"
#include "d2means/rng.hpp"
#include "d2means/sampler.hpp"

namespace d2means {

namespace detail {

// Runs `worker` on min(threads, jobs) threads; workers claim job indices
// from a shared counter. Callers make results order-independent.
template <class Worker>
void run_on_threads(Worker&& worker, unsigned threads, std::size_t jobs) {
  if (threads <= 1 || jobs <= 1) {
    worker();
    return;
  }
  std::vector<std::thread> pool;
  const unsigned pool_size = static_cast<unsigned>(
      std::min<std::size_t>(threads, jobs));
  pool.reserve(pool_size);
  for (unsigned t = 0; t < pool_size; ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
}

}  // namespace detail

enum class GeneratorKind { uniform_box, gaussian_mixture, collinear };

inline std::string_view generator_name(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::uniform_box: return "uniform_box";
    case GeneratorKind::gaussian_mixture: return "gaussian_mixture";
    case GeneratorKind::collinear: return "collinear";
  }
  throw std::invalid_argument("generator_name: unknown generator");
}

inline GeneratorKind generator_from_name(std::string_view name) {
  if (name == "uniform_box") return GeneratorKind::uniform_box;
  if (name == "gaussian_mixture") return GeneratorKind::gaussian_mixture;
  if (name == "collinear") return GeneratorKind::collinear;
  throw std::invalid_argument("unknown generator: " + std::string(name));
}

// Seeded instance generators. uniform_box: coordinates uniform in [0,1).
// gaussian_mixture: k means on a scaled coordinate simplex (separation 10,
// wrapping to further shells when k > d), unit component variance, points
// assigned round-robin. collinear: points spread along one random segment.
inline Dataset generate_instance(GeneratorKind kind, std::size_t n, std::size_t d,
                                 std::size_t k, Rng& rng) {
  if (n < 1 || d < 1) throw std::invalid_argument("generate_instance: need n >= 1, d >= 1");
  std::vector<Point> points(n, Point(d));
  switch (kind) {
    case GeneratorKind::uniform_box: {
      for (Point& p : points)
        for (double& coord : p) coord = rng.next_double();
      break;
    }
    case GeneratorKind::gaussian_mixture: {
      if (k < 1) throw std::invalid_argument("generate_instance: gaussian_mixture needs k >= 1");
      constexpr double separation = 10.0;
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t component = i % k;
        const std::size_t axis = component % d;
        const double shell = static_cast<double>(1 + component / d);
        for (std::size_t c = 0; c < d; ++c) {
          const double mean = (c == axis) ? separation * shell : 0.0;
          points[i][c] = mean + rng.next_gaussian();
        }
      }
      break;
    }
    case GeneratorKind::collinear: {
      Point origin(d), direction(d);
      for (std::size_t c = 0; c < d; ++c) {
        origin[c] = rng.next_double();
        direction[c] = rng.next_double() - 0.5;
      }
      for (Point& p : points) {
        const double t = rng.next_double() * 10.0;
        for (std::size_t c = 0; c < d; ++c) p[c] = origin[c] + t * direction[c];
      }
      break;
    }
  }
  return make_dataset(std::move(points));
}

// Classic seeding: first center uniform, each next center drawn with
// probability proportional to the current squared distance to the chosen
// set. Returns k data points.
inline CenterSet kmeanspp_seed(const Dataset& data, std::size_t k, Rng& rng) {
  if (k < 1 || k > data.n()) throw std::invalid_argument("kmeanspp_seed: need 1 <= k <= n");
  const SquaredEuclidean measure;
  CenterSet centers;
  centers.reserve(k);
  DistanceCache cache(data.n());
  centers.push_back(data.points[uniform_draw(data, rng)]);
  cache.push_center(data, centers.back(), measure);
  while (centers.size() < k) {
    centers.push_back(data.points[d2_draw(cache, data, rng)]);
    cache.push_center(data, centers.back(), measure);
  }
  return centers;
}

// Alternates nearest-center assignment (ties to the lowest center index)
// and centroid recomputation until the assignment is stable or max_iters.
// A cluster that loses all points keeps its previous center.
template <DissimilarityMeasure M = SquaredEuclidean>
CenterSet lloyd_refine(const Dataset& data, CenterSet centers, std::size_t max_iters,
                       const M& measure = {}) {
  if (centers.empty()) throw std::invalid_argument("lloyd_refine: empty center set");
  const std::size_t n = data.n();
  const std::size_t d = data.dim();
  const std::size_t k = centers.size();
  std::vector<std::size_t> assignment(n, 0);
  std::vector<std::size_t> previous;
  std::vector<double> sums(k * d);
  std::vector<std::size_t> counts(k);
  for (std::size_t iter = 0; iter < max_iters; ++iter) {
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t best = 0;
      double best_dist = measure(data.points[i], centers[0]);
      for (std::size_t j = 1; j < k; ++j) {
        const double dist = measure(data.points[i], centers[j]);
        if (dist < best_dist) {
          best_dist = dist;
          best = j;
        }
      }
      assignment[i] = best;
    }
    if (assignment == previous) break;
    previous = assignment;
    std::fill(sums.begin(), sums.end(), 0.0);
    std::fill(counts.begin(), counts.end(), std::size_t{0});
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t label = assignment[i];
      ++counts[label];
      for (std::size_t c = 0; c < d; ++c) sums[label * d + c] += data.points[i][c];
    }
    for (std::size_t j = 0; j < k; ++j) {
      if (counts[j] == 0) continue;
      for (std::size_t c = 0; c < d; ++c)
        centers[j][c] = sums[j * d + c] / static_cast<double>(counts[j]);
    }
  }
  return centers;
}

struct ExperimentConfig {
  GeneratorKind generator = GeneratorKind::uniform_box;
  std::size_t n = 10;
  std::size_t d = 2;
  std::size_t k = 2;
  double epsilon = 0.5;
  std::size_t trials = 1;
  std::optional<std::size_t> sample_width;  // solver overrides; defaults otherwise
  std::optional<std::size_t> subset_size;
  std::optional<std::size_t> repetitions;
  std::uint64_t master_seed = 0;
  std::uint64_t leaf_budget = default_leaf_budget;
  unsigned threads = 1;
};

struct TrialResult {
  double solver_cost = 0.0;
  double oracle_cost = 0.0;
  double ratio = 1.0;
};

struct RatioReport {
  std::vector<TrialResult> trials;
  double target = 1.0;  // 1 + epsilon
  double mean_ratio = 0.0;
  double max_ratio = 0.0;
  double fraction_within_target = 0.0;
  // Aggregate wall time; in-memory only, never serialized (reports must be
  // reproducible byte for byte apart from the one duration field).
  double solver_seconds = 0.0;
  double oracle_seconds = 0.0;
};

// Per trial: generate an instance, solve at practical parameters, solve
// exactly, record the cost ratio. Trials run on derived seed substreams and
// may execute concurrently; the report is assembled in trial order.
inline RatioReport ratio_experiment(const ExperimentConfig& config) {
  if (config.trials < 1) throw std::invalid_argument("ratio_experiment: trials must be >= 1");
  if (config.n > oracle_max_points) {
    std::ostringstream msg;
    msg << "ratio_experiment: n = " << config.n << " exceeds the exact-solver cap of "
        << oracle_max_points << " points";
    throw budget_error(msg.str());
  }
  const SquaredEuclidean measure;
  RatioReport report;
  report.trials.resize(config.trials);
  report.target = 1.0 + config.epsilon;

  std::vector<double> solver_seconds(config.trials, 0.0);
  std::vector<double> oracle_seconds(config.trials, 0.0);
  std::atomic<std::size_t> next_trial{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t t = next_trial.fetch_add(1);
      if (t >= config.trials) return;
      const std::uint64_t trial_seed = derive_seed(config.master_seed, t);
      Rng instance_rng(derive_seed(trial_seed, 0));
      const Dataset data =
          generate_instance(config.generator, config.n, config.d, config.k, instance_rng);

      PtasParams params =
          make_practical_params(config.k, config.epsilon, derive_seed(trial_seed, 1));
      if (config.sample_width) params.sample_width = *config.sample_width;
      if (config.subset_size) params.subset_size = *config.subset_size;
      if (config.repetitions) params.repetitions = *config.repetitions;
      params.leaf_budget = config.leaf_budget;

      const SolveResult solved = find_k_means(data, config.k, params, measure);
      const auto oracle_start = std::chrono::steady_clock::now();
      const OracleResult exact = optimal_kmeans(data, config.k);
      oracle_seconds[t] =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - oracle_start).count();
      solver_seconds[t] = solved.elapsed_seconds;

      TrialResult& trial = report.trials[t];
      trial.solver_cost = solved.cost;
      trial.oracle_cost = exact.cost;
      if (exact.cost == 0.0) {
        trial.ratio = solved.cost == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
      } else {
        trial.ratio = solved.cost / exact.cost;
      }
    }
  };
  detail::run_on_threads(worker, config.threads, config.trials);

  double ratio_sum = 0.0;
  std::size_t within = 0;
  for (const TrialResult& trial : report.trials) {
    ratio_sum += trial.ratio;
    report.max_ratio = std::max(report.max_ratio, trial.ratio);
    if (trial.ratio <= report.target) ++within;
  }
  report.mean_ratio = ratio_sum / static_cast<double>(config.trials);
  report.fraction_within_target =
      static_cast<double>(within) / static_cast<double>(config.trials);
  for (double s : solver_seconds) report.solver_seconds += s;
  for (double s : oracle_seconds) report.oracle_seconds += s;
  return report;
}

// One trial of the uniform-sampling mean test: does the mean of the sampled
// points cost at most (1+gamma) times the optimal single-center cost?
inline bool sampling_trial_success(const Dataset& data, std::span<const std::size_t> sample,
                                   double gamma) {
  const SquaredEuclidean measure;
  const CenterSet sample_mean{centroid_at(data, sample)};
  const CenterSet data_mean{centroid(std::span<const Point>(data.points))};
  return cost(data, sample_mean, measure) <= (1.0 + gamma) * cost(data, data_mean, measure);
}

// Success rate over seeded trials: fresh uniform-box instance per trial,
// `sample_size` points drawn uniformly with replacement. Per-trial seeds
// come off `rng` up front so trials may run concurrently; the success count
// is a commutative sum, so the rate is independent of thread count.
inline double sampling_success_rate(double gamma, std::size_t sample_size, std::size_t n,
                                    std::size_t d, std::size_t trials, Rng& rng,
                                    unsigned threads = 1) {
  if (trials < 1) throw std::invalid_argument("sampling_success_rate: trials must be >= 1");
  if (sample_size < 1)
    throw std::invalid_argument("sampling_success_rate: sample size must be >= 1");
  std::vector<std::uint64_t> seeds(trials);
  for (std::uint64_t& s : seeds) s = rng.next();
  std::atomic<std::size_t> successes{0};
  std::atomic<std::size_t> next_trial{0};
  auto worker = [&]() {
    std::vector<std::size_t> sample(sample_size);
    for (;;) {
      const std::size_t t = next_trial.fetch_add(1);
      if (t >= trials) return;
      Rng trial_rng(seeds[t]);
      const Dataset data = generate_instance(GeneratorKind::uniform_box, n, d, 1, trial_rng);
      for (std::size_t& idx : sample) idx = uniform_draw(data, trial_rng);
      if (sampling_trial_success(data, sample, gamma)) successes.fetch_add(1);
    }
  };
  detail::run_on_threads(worker, threads, trials);
  return static_cast<double>(successes.load()) / static_cast<double>(trials);
}

struct SamplingPropertyResult {
  std::size_t sample_size = 0;
  std::size_t trials = 0;
  double success_rate = 0.0;
  double pass_threshold = 0.0;  // (1 - delta) minus a 3-sigma binomial margin
  bool pass = false;
};

// Statistical check that a uniform sample of ceil(1/(gamma*delta)) points
// has a (1+gamma)-good mean in at least a (1-delta) fraction of trials. The
// 3-sigma margin keeps a true property from failing more than ~1e-3 of runs.
inline SamplingPropertyResult sampling_property_test(double gamma, double delta, std::size_t n,
                                                     std::size_t d, std::size_t trials, Rng& rng,
                                                     unsigned threads = 1) {
  if (trials < 100)
    throw std::invalid_argument("sampling_property_test: need at least 100 trials");
  SamplingPropertyResult result;
  result.sample_size = SquaredEuclidean::sample_size(gamma, delta);
  result.trials = trials;
  result.success_rate =
      sampling_success_rate(gamma, result.sample_size, n, d, trials, rng, threads);
  result.pass_threshold =
      (1.0 - delta) - 3.0 * std::sqrt(delta * (1.0 - delta) / static_cast<double>(trials));
  result.pass = result.success_rate >= result.pass_threshold;
  return result;
}

}  // namespace d2means
