#include "d2means/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "d2means/measure.hpp"
#include "d2means/rng.hpp"
#include "testutil.hpp"

namespace {

using namespace d2means;
using testutil::point_dataset;
using testutil::scalar_dataset;

TEST(Generators, NamesRoundTrip) {
  for (const GeneratorKind kind : {GeneratorKind::uniform_box, GeneratorKind::gaussian_mixture,
                                   GeneratorKind::collinear})
    EXPECT_EQ(generator_from_name(generator_name(kind)), kind);
  EXPECT_THROW(generator_from_name("fancy"), std::invalid_argument);
}

TEST(Generators, ShapeAndDeterminism) {
  for (const GeneratorKind kind : {GeneratorKind::uniform_box, GeneratorKind::gaussian_mixture,
                                   GeneratorKind::collinear}) {
    Rng a(7), b(7);
    const Dataset first = generate_instance(kind, 20, 3, 4, a);
    const Dataset second = generate_instance(kind, 20, 3, 4, b);
    EXPECT_EQ(first.n(), 20u);
    EXPECT_EQ(first.dim(), 3u);
    EXPECT_EQ(first.points, second.points);
  }
  Rng rng(1);
  EXPECT_THROW(generate_instance(GeneratorKind::uniform_box, 0, 2, 1, rng),
               std::invalid_argument);
}

TEST(Generators, UniformBoxStaysInUnitBox) {
  Rng rng(15);
  const Dataset data = generate_instance(GeneratorKind::uniform_box, 200, 4, 1, rng);
  for (const Point& p : data.points)
    for (double x : p) {
      EXPECT_GE(x, 0.0);
      EXPECT_LT(x, 1.0);
    }
}

TEST(Generators, CollinearPointsLieOnOneLine) {
  Rng rng(25);
  const Dataset data = generate_instance(GeneratorKind::collinear, 30, 3, 1, rng);
  // Every displacement from point 0 must be parallel to the first nonzero
  // displacement: check all 2x2 cross terms vanish.
  const Point& base = data.points.front();
  Point dir(3);
  for (std::size_t c = 0; c < 3; ++c) dir[c] = data.points[1][c] - base[c];
  for (const Point& p : data.points) {
    Point disp(3);
    for (std::size_t c = 0; c < 3; ++c) disp[c] = p[c] - base[c];
    for (std::size_t a = 0; a < 3; ++a)
      for (std::size_t b = a + 1; b < 3; ++b)
        EXPECT_NEAR(disp[a] * dir[b] - disp[b] * dir[a], 0.0, 1e-9);
  }
}

TEST(Generators, GaussianMixtureSeparatesComponents) {
  Rng rng(35);
  const Dataset data = generate_instance(GeneratorKind::gaussian_mixture, 40, 2, 2, rng);
  // Components alternate by index and sit 10 apart on the first axis; with
  // unit variance the two index-classes must differ strongly in mean.
  double even_mean = 0.0, odd_mean = 0.0;
  for (std::size_t i = 0; i < data.n(); ++i)
    (i % 2 == 0 ? even_mean : odd_mean) += data.points[i][0];
  even_mean /= 20.0;
  odd_mean /= 20.0;
  EXPECT_GT(std::abs(even_mean - odd_mean), 5.0);
}

TEST(KmeansppSeed, ForcedAndExhaustive) {
  Rng rng(45);
  const Dataset single = scalar_dataset({3.0});
  EXPECT_EQ(kmeanspp_seed(single, 1, rng), (CenterSet{{3.0}}));

  // k = n on distinct points: zero-distance points are never redrawn while
  // positive mass remains, so all points get chosen.
  const Dataset data = scalar_dataset({0, 1, 4, 9});
  CenterSet all = kmeanspp_seed(data, 4, rng);
  std::sort(all.begin(), all.end());
  EXPECT_EQ(all, (CenterSet{{0}, {1}, {4}, {9}}));

  EXPECT_THROW(kmeanspp_seed(data, 0, rng), std::invalid_argument);
  EXPECT_THROW(kmeanspp_seed(data, 5, rng), std::invalid_argument);
}

TEST(KmeansppSeed, SecondCenterPrefersFarCluster) {
  // Two tight clusters 100 apart. Exact probability that the second center
  // lands in the cluster not holding the first, computed from the sampling
  // weights: for any first center, the within-cluster mass is ~0.01 against
  // ~2e4 across, so the probability exceeds 0.99 by a wide margin.
  const Dataset data = point_dataset(
      {{0, 0}, {0.1, 0}, {100, 0}, {100.1, 0}});
  double exact_probability = 0.0;
  for (std::size_t first = 0; first < data.n(); ++first) {
    double total = 0.0, far_mass = 0.0;
    for (std::size_t i = 0; i < data.n(); ++i) {
      const double w = sq_euclidean(data.points[i], data.points[first]);
      total += w;
      const bool same_cluster = (i < 2) == (first < 2);
      if (!same_cluster) far_mass += w;
    }
    exact_probability += far_mass / total / static_cast<double>(data.n());
  }
  EXPECT_GE(exact_probability, 0.99);

  int crossings = 0;
  const int trials = 3000;
  for (int t = 0; t < trials; ++t) {
    Rng rng(9000 + t);
    const CenterSet centers = kmeanspp_seed(data, 2, rng);
    const bool first_left = centers[0][0] < 50.0;
    const bool second_left = centers[1][0] < 50.0;
    if (first_left != second_left) ++crossings;
  }
  EXPECT_GE(crossings, static_cast<int>(trials * 0.99));
}

TEST(KmeansppSeed, FixedSeedDeterministic) {
  Rng a(77), b(77);
  const Dataset data = scalar_dataset({0, 2, 5, 11, 17});
  EXPECT_EQ(kmeanspp_seed(data, 3, a), kmeanspp_seed(data, 3, b));
}

TEST(LloydRefine, FixedPointAtStablePartitionMeans) {
  const Dataset data = point_dataset({{0, 0}, {2, 0}, {10, 0}, {12, 0}});
  const CenterSet optimal{{1, 0}, {11, 0}};
  EXPECT_EQ(lloyd_refine(data, optimal, 1), optimal);
}

TEST(LloydRefine, ZeroIterationsIsNoOp) {
  const Dataset data = scalar_dataset({0, 5, 9});
  const CenterSet arbitrary{{2.0}, {8.5}};
  EXPECT_EQ(lloyd_refine(data, arbitrary, 0), arbitrary);
}

TEST(LloydRefine, CostNonIncreasingInIterations) {
  const SquaredEuclidean measure;
  Rng rng(55);
  for (int round = 0; round < 5; ++round) {
    const Dataset data = testutil::random_dataset(50, 2, rng);
    Rng seeding(rng.next());
    const CenterSet start = kmeanspp_seed(data, 4, seeding);
    double previous = cost(data, start, measure);
    for (std::size_t iters = 1; iters <= 6; ++iters) {
      const double current = cost(data, lloyd_refine(data, start, iters), measure);
      EXPECT_LE(current, previous + 1e-12 * std::max(1.0, previous));
      previous = current;
    }
  }
}

TEST(LloydRefine, EmptyClusterKeepsItsCenter) {
  const Dataset data = scalar_dataset({0, 10});
  const CenterSet start{{0.0}, {10.0}, {100.0}};
  const CenterSet refined = lloyd_refine(data, start, 5);
  ASSERT_EQ(refined.size(), 3u);
  EXPECT_DOUBLE_EQ(refined[2][0], 100.0);  // never assigned, never moved
}

TEST(LloydRefine, EmptyCentersThrow) {
  EXPECT_THROW(lloyd_refine(scalar_dataset({0}), {}, 3), std::invalid_argument);
}

ExperimentConfig small_config(std::uint64_t seed) {
  ExperimentConfig config;
  config.generator = GeneratorKind::uniform_box;
  config.n = 10;
  config.d = 2;
  config.k = 2;
  config.epsilon = 0.5;
  config.trials = 12;
  config.sample_width = 12;
  config.subset_size = 2;
  config.repetitions = 4;
  config.master_seed = seed;
  return config;
}

TEST(RatioExperiment, ReportShapeAndDominance) {
  const RatioReport report = ratio_experiment(small_config(31));
  ASSERT_EQ(report.trials.size(), 12u);
  EXPECT_DOUBLE_EQ(report.target, 1.5);
  double max_seen = 0.0, sum = 0.0;
  std::size_t within = 0;
  for (const TrialResult& trial : report.trials) {
    EXPECT_GE(trial.ratio, 1.0 - 1e-9);  // the solver can never beat the oracle
    EXPECT_GE(trial.solver_cost, trial.oracle_cost * (1.0 - 1e-9));
    max_seen = std::max(max_seen, trial.ratio);
    sum += trial.ratio;
    if (trial.ratio <= report.target) ++within;
  }
  EXPECT_DOUBLE_EQ(report.max_ratio, max_seen);
  EXPECT_DOUBLE_EQ(report.mean_ratio, sum / 12.0);
  EXPECT_DOUBLE_EQ(report.fraction_within_target, within / 12.0);
}

TEST(RatioExperiment, DegenerateRatiosAreExactlyOne) {
  // Single-point instances: solver and oracle both at cost 0, ratio 1.
  ExperimentConfig config = small_config(41);
  config.n = 1;
  config.k = 1;
  config.trials = 4;
  for (const TrialResult& trial : ratio_experiment(config).trials)
    EXPECT_DOUBLE_EQ(trial.ratio, 1.0);

  // k = n: every point its own center on both sides.
  ExperimentConfig exhaustive = small_config(43);
  exhaustive.n = 4;
  exhaustive.k = 4;
  exhaustive.trials = 4;
  for (const TrialResult& trial : ratio_experiment(exhaustive).trials) {
    EXPECT_DOUBLE_EQ(trial.solver_cost, 0.0);
    EXPECT_DOUBLE_EQ(trial.oracle_cost, 0.0);
    EXPECT_DOUBLE_EQ(trial.ratio, 1.0);
  }
}

TEST(RatioExperiment, DeterministicAcrossThreadCounts) {
  ExperimentConfig serial = small_config(51);
  ExperimentConfig parallel = small_config(51);
  parallel.threads = 4;
  const RatioReport a = ratio_experiment(serial);
  const RatioReport b = ratio_experiment(parallel);
  ASSERT_EQ(a.trials.size(), b.trials.size());
  for (std::size_t i = 0; i < a.trials.size(); ++i) {
    EXPECT_EQ(a.trials[i].solver_cost, b.trials[i].solver_cost);
    EXPECT_EQ(a.trials[i].oracle_cost, b.trials[i].oracle_cost);
    EXPECT_EQ(a.trials[i].ratio, b.trials[i].ratio);
  }
  EXPECT_EQ(a.mean_ratio, b.mean_ratio);
}

TEST(RatioExperiment, RefusesPastOracleCap) {
  ExperimentConfig config = small_config(61);
  config.n = 16;
  EXPECT_THROW(ratio_experiment(config), budget_error);
  config.n = 10;
  config.trials = 0;
  EXPECT_THROW(ratio_experiment(config), std::invalid_argument);
}

TEST(SamplingProperty, WholeSampleAlwaysSucceeds) {
  Rng rng(71);
  const Dataset data = testutil::random_dataset(8, 2, rng);
  std::vector<std::size_t> everyone(data.n());
  std::iota(everyone.begin(), everyone.end(), std::size_t{0});
  EXPECT_TRUE(sampling_trial_success(data, everyone, 0.5));
  EXPECT_TRUE(sampling_trial_success(data, everyone, 0.01));
}

TEST(SamplingProperty, PassesAtContractNumbers) {
  Rng rng(81);
  const SamplingPropertyResult r = sampling_property_test(0.5, 0.2, 100, 2, 300, rng);
  EXPECT_EQ(r.sample_size, 10u);
  EXPECT_EQ(r.trials, 300u);
  EXPECT_NEAR(r.pass_threshold, 0.8 - 3.0 * std::sqrt(0.16 / 300.0), 1e-12);
  EXPECT_TRUE(r.pass);
  EXPECT_GE(r.success_rate, r.pass_threshold);
}

TEST(SamplingProperty, SuccessRateMonotoneInSampleSize) {
  Rng small_rng(91), large_rng(91);
  const std::size_t trials = 2000;
  const double at_f = sampling_success_rate(0.5, 10, 100, 2, trials, small_rng);
  const double at_2f = sampling_success_rate(0.5, 20, 100, 2, trials, large_rng);
  const double margin = 3.0 * std::sqrt(0.2 * 0.8 / static_cast<double>(trials));
  EXPECT_GE(at_2f, at_f - margin);
}

TEST(SamplingProperty, DeterministicAcrossThreadCounts) {
  Rng serial(101), parallel(101);
  const double a = sampling_success_rate(0.5, 10, 60, 2, 500, serial, 1);
  const double b = sampling_success_rate(0.5, 10, 60, 2, 500, parallel, 4);
  EXPECT_EQ(a, b);
}

TEST(SamplingProperty, RejectsTooFewTrials) {
  Rng rng(111);
  EXPECT_THROW(sampling_property_test(0.5, 0.2, 100, 2, 99, rng), std::invalid_argument);
}

}  // namespace
