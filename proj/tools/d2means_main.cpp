// Command-line front end. Every command emits one JSON report on stdout;
// apart from the trailing duration_ms field the report depends only on the
// inputs and the seed, never on thread count or timing.
//
// Exit codes: 0 success, 1 failed check verdict, 2 search refused (budget),
// 64 usage error, 65 unreadable input, 70 internal error.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "d2means/csv.hpp"
#include "d2means/harness.hpp"
#include "d2means/oracle.hpp"
#include "d2means/ptas.hpp"
#include "d2means/report.hpp"

namespace {

using namespace d2means;

struct CommandOutcome {
  Json report;
  int exit_code = 0;
};

struct SolveOptions {
  std::string input_path;
  std::size_t k = 1;
  double epsilon = 0.5;
  std::string mode = "practical";
  std::optional<std::size_t> sample_width;
  std::optional<std::size_t> subset_size;
  std::optional<std::uint64_t> repetitions;
  std::uint64_t seed = 0;
  std::uint64_t leaf_budget = default_leaf_budget;
  unsigned threads = 1;
};

struct OracleOptions {
  std::string input_path;
  std::size_t k = 1;
};

struct BenchOptions {
  std::string generator = "uniform_box";
  std::size_t n = 10;
  std::size_t d = 2;
  std::size_t k = 2;
  double epsilon = 0.5;
  std::size_t trials = 20;
  std::optional<std::size_t> sample_width;
  std::optional<std::size_t> subset_size;
  std::optional<std::uint64_t> repetitions;
  std::uint64_t seed = 0;
  std::uint64_t leaf_budget = default_leaf_budget;
  unsigned threads = 1;
};

struct CheckOptions {
  std::string property = "all";
  std::string input_path;  // empty: a seeded uniform_box instance stands in
  double gamma = 0.5;
  double delta = 0.2;
  std::size_t n = 100;
  std::size_t d = 2;
  std::size_t trials = 1000;
  double tolerance = 1e-9;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

Json input_block(const std::string& path, const Dataset& data) {
  Json block;
  block["path"] = path;
  block["digest"] = dataset_digest(data);
  block["points"] = data.n();
  block["dim"] = data.dim();
  return block;
}

CommandOutcome run_solve(const SolveOptions& opt) {
  const Dataset data = load_dataset(opt.input_path);
  const SquaredEuclidean measure;

  CommandOutcome out;
  out.report["schema_version"] = report_schema_version;
  out.report["command"] = "solve";
  out.report["input"] = input_block(opt.input_path, data);

  PtasParams params;
  if (opt.mode == "practical") {
    params = make_practical_params(opt.k, opt.epsilon, opt.seed);
  } else if (opt.mode == "theoretical") {
    params = make_theoretical_ptas_params(opt.k, opt.epsilon, opt.seed, measure);
  } else {
    throw std::invalid_argument("solve: mode must be practical or theoretical");
  }
  if (opt.sample_width) params.sample_width = *opt.sample_width;
  if (opt.subset_size) params.subset_size = *opt.subset_size;
  if (opt.repetitions) params.repetitions = *opt.repetitions;
  params.leaf_budget = opt.leaf_budget;

  Json params_json;
  params_json["k"] = opt.k;
  params_json["epsilon"] = params.epsilon;
  params_json["mode"] = opt.mode;
  params_json["N"] = params.sample_width;
  params_json["M"] = params.subset_size;
  params_json["repetitions"] = params.repetitions;
  params_json["leaf_budget"] = params.leaf_budget;
  params_json["seed"] = params.master_seed;
  out.report["params"] = params_json;

  if (opt.mode == "theoretical") {
    // Report the guarantee-scale numbers; launch the search only when the
    // leaf estimate fits the budget (at real scale it never does).
    const TheoreticalParams t = theoretical_params(opt.k, opt.epsilon, measure);
    Json scale;
    scale["slack"] = t.slack;
    scale["N"] = t.sample_width;
    scale["M"] = t.subset_size;
    scale["log2_subset_count"] = t.log2_subset_count;
    scale["log2_leaf_estimate"] = t.log2_leaf_estimate;
    scale["log2_leaf_budget"] = std::log2(static_cast<double>(opt.leaf_budget));
    out.report["theoretical"] = scale;
    if (t.log2_leaf_estimate > std::log2(static_cast<double>(opt.leaf_budget))) {
      out.report["result"] = Json{{"refused", true}};
      std::cerr << "refusing search: leaf estimate 2^" << t.log2_leaf_estimate
                << " exceeds the budget of " << opt.leaf_budget << " leaves\n";
      out.exit_code = 2;
      return out;
    }
  }

  const SolveResult solved = find_k_means(data, opt.k, params, measure, opt.threads);
  Json result;
  result["cost"] = solved.cost;
  result["centers"] = centers_to_json(solved.centers);
  result["leaves_evaluated"] = solved.leaves_evaluated;
  out.report["result"] = result;
  return out;
}

CommandOutcome run_oracle(const OracleOptions& opt) {
  const Dataset data = load_dataset(opt.input_path);
  const OracleResult exact = optimal_kmeans(data, opt.k);

  CommandOutcome out;
  out.report["schema_version"] = report_schema_version;
  out.report["command"] = "oracle";
  out.report["input"] = input_block(opt.input_path, data);
  out.report["params"] = Json{{"k", opt.k}};
  Json result;
  result["cost"] = exact.cost;
  result["centers"] = centers_to_json(exact.centers);
  result["labels"] = exact.partition.labels;
  result["partitions_enumerated"] = exact.partitions_enumerated;
  out.report["result"] = result;
  return out;
}

CommandOutcome run_bench(const BenchOptions& opt) {
  ExperimentConfig config;
  config.generator = generator_from_name(opt.generator);
  config.n = opt.n;
  config.d = opt.d;
  config.k = opt.k;
  config.epsilon = opt.epsilon;
  config.trials = opt.trials;
  config.sample_width = opt.sample_width;
  config.subset_size = opt.subset_size;
  if (opt.repetitions) config.repetitions = static_cast<std::size_t>(*opt.repetitions);
  config.master_seed = opt.seed;
  config.leaf_budget = opt.leaf_budget;
  config.threads = opt.threads;
  const RatioReport result = ratio_experiment(config);

  CommandOutcome out;
  out.report["schema_version"] = report_schema_version;
  out.report["command"] = "bench";
  Json params_json;
  params_json["generator"] = opt.generator;
  params_json["n"] = opt.n;
  params_json["d"] = opt.d;
  params_json["k"] = opt.k;
  params_json["epsilon"] = opt.epsilon;
  params_json["trials"] = opt.trials;
  if (opt.sample_width) params_json["N"] = *opt.sample_width;
  if (opt.subset_size) params_json["M"] = *opt.subset_size;
  if (opt.repetitions) params_json["repetitions"] = *opt.repetitions;
  params_json["leaf_budget"] = opt.leaf_budget;
  params_json["seed"] = opt.seed;
  out.report["params"] = params_json;
  Json result_json;
  result_json["target"] = result.target;
  result_json["mean_ratio"] = result.mean_ratio;
  result_json["max_ratio"] = result.max_ratio;
  result_json["fraction_within_target"] = result.fraction_within_target;
  Json trials_json = Json::array();
  for (const TrialResult& trial : result.trials) {
    Json t;
    t["solver_cost"] = trial.solver_cost;
    t["oracle_cost"] = trial.oracle_cost;
    t["ratio"] = trial.ratio;
    trials_json.push_back(t);
  }
  result_json["trials"] = trials_json;
  out.report["result"] = result_json;
  return out;
}

// Random point inside the data's axis-aligned bounding box.
Point random_box_point(const Dataset& data, Rng& rng) {
  const std::size_t d = data.dim();
  Point lo = data.points.front();
  Point hi = data.points.front();
  for (const Point& p : data.points)
    for (std::size_t c = 0; c < d; ++c) {
      lo[c] = std::min(lo[c], p[c]);
      hi[c] = std::max(hi[c], p[c]);
    }
  Point out(d);
  for (std::size_t c = 0; c < d; ++c)
    out[c] = lo[c] + rng.next_double() * (hi[c] - lo[c]);
  return out;
}

CommandOutcome run_check(const CheckOptions& opt) {
  const SquaredEuclidean measure;
  Rng rng(opt.seed);
  const bool want_sampling = opt.property == "sampling" || opt.property == "all";
  const bool want_centroid = opt.property == "centroid" || opt.property == "all";
  const bool want_axioms = opt.property == "axioms" || opt.property == "all";
  if (!want_sampling && !want_centroid && !want_axioms)
    throw std::invalid_argument("check: property must be sampling, centroid, axioms, or all");

  CommandOutcome out;
  out.report["schema_version"] = report_schema_version;
  out.report["command"] = "check";
  Json params_json;
  params_json["property"] = opt.property;
  params_json["gamma"] = opt.gamma;
  params_json["delta"] = opt.delta;
  params_json["n"] = opt.n;
  params_json["d"] = opt.d;
  params_json["trials"] = opt.trials;
  params_json["tolerance"] = opt.tolerance;
  params_json["seed"] = opt.seed;
  out.report["params"] = params_json;

  std::optional<Dataset> data;
  if (want_centroid || want_axioms) {
    if (opt.input_path.empty()) {
      data = generate_instance(GeneratorKind::uniform_box, opt.n, opt.d, 1, rng);
    } else {
      data = load_dataset(opt.input_path);
      out.report["input"] = input_block(opt.input_path, *data);
    }
  }

  Json verdicts = Json::array();
  bool all_pass = true;
  if (want_sampling) {
    const SamplingPropertyResult r =
        sampling_property_test(opt.gamma, opt.delta, opt.n, opt.d, opt.trials, rng, opt.threads);
    Json v;
    v["property"] = "sampling";
    v["sample_size"] = r.sample_size;
    v["success_rate"] = r.success_rate;
    v["pass_threshold"] = r.pass_threshold;
    v["pass"] = r.pass;
    verdicts.push_back(v);
    all_pass = all_pass && r.pass;
  }
  if (want_centroid) {
    std::size_t failures = 0;
    const std::size_t rounds = std::max<std::size_t>(1, opt.trials / 10);
    for (std::size_t i = 0; i < rounds; ++i)
      if (!check_centroid_property(*data, random_box_point(*data, rng), measure, opt.tolerance))
        ++failures;
    Json v;
    v["property"] = "centroid";
    v["rounds"] = rounds;
    v["failures"] = failures;
    v["pass"] = failures == 0;
    verdicts.push_back(v);
    all_pass = all_pass && failures == 0;
  }
  if (want_axioms) {
    const std::size_t rounds = std::max<std::size_t>(1, opt.trials / 10);
    std::vector<std::pair<Point, Point>> pairs;
    std::vector<std::array<Point, 3>> triples;
    pairs.reserve(rounds);
    triples.reserve(rounds);
    const auto& points = data->points;
    for (std::size_t i = 0; i < rounds; ++i) {
      pairs.emplace_back(points[uniform_draw(*data, rng)], points[uniform_draw(*data, rng)]);
      triples.push_back({points[uniform_draw(*data, rng)], points[uniform_draw(*data, rng)],
                         points[uniform_draw(*data, rng)]});
    }
    const bool pass = check_symmetry_and_triangle(
        std::span<const std::pair<Point, Point>>(pairs),
        std::span<const std::array<Point, 3>>(triples), measure);
    Json v;
    v["property"] = "axioms";
    v["rounds"] = rounds;
    v["pass"] = pass;
    verdicts.push_back(v);
    all_pass = all_pass && pass;
  }

  Json result;
  result["verdicts"] = verdicts;
  result["pass"] = all_pass;
  out.report["result"] = result;
  out.exit_code = all_pass ? 0 : 1;
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"D2-sampling k-means toolkit"};
  app.require_subcommand(1);

  SolveOptions solve_opt;
  CLI::App* solve = app.add_subcommand("solve", "approximate k-means on a CSV dataset");
  solve->add_option("--input", solve_opt.input_path, "CSV file, one point per row")
      ->required();
  solve->add_option("--k", solve_opt.k, "number of centers")->required();
  solve->add_option("--epsilon", solve_opt.epsilon, "target accuracy in (0, 1]");
  solve->add_option("--mode", solve_opt.mode, "practical or theoretical parameters");
  solve->add_option("--N", solve_opt.sample_width, "points drawn per search node");
  solve->add_option("--M", solve_opt.subset_size, "points averaged per candidate center");
  solve->add_option("--reps", solve_opt.repetitions, "independent restarts");
  solve->add_option("--seed", solve_opt.seed, "master seed");
  solve->add_option("--leaf-budget", solve_opt.leaf_budget, "per-restart leaf cap");
  solve->add_option("--threads", solve_opt.threads, "worker threads (output-invariant)");

  OracleOptions oracle_opt;
  CLI::App* oracle = app.add_subcommand("oracle", "exact k-means by partition enumeration");
  oracle->add_option("--input", oracle_opt.input_path, "CSV file, one point per row")
      ->required();
  oracle->add_option("--k", oracle_opt.k, "number of centers")->required();
  unsigned oracle_threads = 1;  // accepted for interface uniformity; enumeration is sequential
  oracle->add_option("--threads", oracle_threads, "accepted, unused");

  BenchOptions bench_opt;
  CLI::App* bench = app.add_subcommand("bench", "solver-vs-oracle ratio experiment");
  bench->add_option("--generator", bench_opt.generator,
                    "uniform_box, gaussian_mixture, or collinear");
  bench->add_option("--n", bench_opt.n, "points per instance");
  bench->add_option("--d", bench_opt.d, "dimensions");
  bench->add_option("--k", bench_opt.k, "number of centers");
  bench->add_option("--epsilon", bench_opt.epsilon, "target accuracy in (0, 1]");
  bench->add_option("--trials", bench_opt.trials, "instances to run");
  bench->add_option("--N", bench_opt.sample_width, "points drawn per search node");
  bench->add_option("--M", bench_opt.subset_size, "points averaged per candidate center");
  bench->add_option("--reps", bench_opt.repetitions, "independent restarts");
  bench->add_option("--seed", bench_opt.seed, "master seed");
  bench->add_option("--leaf-budget", bench_opt.leaf_budget, "per-restart leaf cap");
  bench->add_option("--threads", bench_opt.threads, "worker threads (output-invariant)");

  CheckOptions check_opt;
  CLI::App* check = app.add_subcommand("check", "property checks (exit 0 iff all pass)");
  check->add_option("--property", check_opt.property, "sampling, centroid, axioms, or all");
  check->add_option("--input", check_opt.input_path,
                    "CSV file for centroid/axioms (seeded instance if omitted)");
  check->add_option("--gamma", check_opt.gamma, "sampling cost slack");
  check->add_option("--delta", check_opt.delta, "sampling failure probability");
  check->add_option("--n", check_opt.n, "points per generated instance");
  check->add_option("--d", check_opt.d, "dimensions of generated instances");
  check->add_option("--trials", check_opt.trials, "sampling trials (>= 100)");
  check->add_option("--tolerance", check_opt.tolerance, "relative tolerance for identities");
  check->add_option("--seed", check_opt.seed, "master seed");
  check->add_option("--threads", check_opt.threads, "worker threads (output-invariant)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 64;
  }

  const auto start = std::chrono::steady_clock::now();
  try {
    CommandOutcome outcome;
    if (solve->parsed()) {
      outcome = run_solve(solve_opt);
    } else if (oracle->parsed()) {
      outcome = run_oracle(oracle_opt);
    } else if (bench->parsed()) {
      outcome = run_bench(bench_opt);
    } else {
      outcome = run_check(check_opt);
    }
    const auto elapsed = std::chrono::steady_clock::now() - start;
    outcome.report["duration_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count();
    std::cout << outcome.report.dump(2) << "\n";
    return outcome.exit_code;
  } catch (const budget_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const parse_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 65;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 64;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 70;
  }
}
