// End-to-end tour: generate a small instance, solve it with the sampling
// solver at practical parameters, compare against the exact oracle, and run
// one ratio experiment.

#include <cstdio>

#include "d2means/harness.hpp"

int main() {
  using namespace d2means;

  Rng rng(42);
  const Dataset data = generate_instance(GeneratorKind::gaussian_mixture, 12, 2, 3, rng);
  std::printf("instance: %zu points in %zu dimensions\n", data.n(), data.dim());

  PtasParams params = make_practical_params(3, 0.5, 7);
  params.sample_width = 12;  // defaults at k=3, eps=0.5 exceed the leaf budget
  params.repetitions = 8;
  const SolveResult solved = find_k_means(data, 3, params, SquaredEuclidean{});
  std::printf("solver cost: %.6f  (%llu leaves, %.3fs)\n", solved.cost,
              static_cast<unsigned long long>(solved.leaves_evaluated),
              solved.elapsed_seconds);

  const OracleResult exact = optimal_kmeans(data, 3);
  std::printf("oracle cost: %.6f  (%llu partitions)\n", exact.cost,
              static_cast<unsigned long long>(exact.partitions_enumerated));
  std::printf("ratio: %.4f\n", solved.cost / exact.cost);

  ExperimentConfig config;
  config.generator = GeneratorKind::uniform_box;
  config.n = 10;
  config.d = 2;
  config.k = 2;
  config.epsilon = 0.5;
  config.trials = 5;
  config.master_seed = 99;
  const RatioReport report = ratio_experiment(config);
  std::printf("experiment: mean ratio %.4f, max %.4f, %.0f%% within %.2f\n",
              report.mean_ratio, report.max_ratio, 100.0 * report.fraction_within_target,
              report.target);
  return 0;
}
