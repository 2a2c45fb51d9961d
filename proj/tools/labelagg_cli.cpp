// labelagg: simulate crowds, aggregate their labels, run experiment grids.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "labelagg/labelagg.hpp"

namespace {

using namespace labelagg;

struct ExperimentArgs {
  std::string config_path;
  std::optional<std::string> band;
  std::vector<int> labels, samples, workers;
  std::optional<int> reps;
  std::optional<std::uint64_t> seed;
  std::string methods;
  std::string tie_policy;
  std::optional<double> em_tol, ct_tol, ct_threshold;
  std::optional<int> em_max_iters, ct_max_iters, threads;
  std::vector<std::string> distributions;
  bool timing = false;
  std::string out = "results.csv";
  std::string significance_out;
};

struct AggregateArgs {
  std::string method = "mv";
  std::string in;
  int labels = 0;
  std::string out = "-";
  std::string tie_policy = "weighted-random";
  std::uint64_t seed = 0;
  double em_tol = 1e-6, ct_tol = 1e-6;
  int em_max_iters = 100, ct_max_iters = 50;
  std::optional<double> ct_threshold;
};

struct SimulateArgs {
  int labels = 2, sample = 100, workers = 5;
  std::string band = "low";
  std::uint64_t seed = 42;
  std::string out = "annotations.csv";
  std::string truth_out;
  std::string distribution;
};

struct SignificanceArgs {
  std::string in = "results.csv";
  std::string out = "significance.csv";
};

int run_experiment(const ExperimentArgs& a) {
  ExperimentConfig c;
  if (a.config_path.empty()) {
    c = ExperimentConfig::defaults(parse_band_kind(a.band.value_or("low")));
  } else {
    c = load_experiment_config(a.config_path);
    if (a.band) c.expertise_band_kind = parse_band_kind(*a.band);
  }
  if (!a.labels.empty()) c.label_sets = a.labels;
  if (!a.samples.empty()) {
    c.sample_sizes = a.samples;
    c.binary_sample_size.reset();
  }
  if (!a.workers.empty()) c.worker_sets = a.workers;
  if (a.reps) c.repetitions = *a.reps;
  if (a.seed) c.master_seed = *a.seed;
  if (!a.methods.empty()) c.methods = parse_method_list(a.methods);
  if (!a.tie_policy.empty()) c.tie_policy = parse_tie_policy(a.tie_policy);
  if (a.em_tol) c.em.tolerance = *a.em_tol;
  if (a.em_max_iters) c.em.max_iterations = *a.em_max_iters;
  if (a.ct_tol) c.ct.tolerance = *a.ct_tol;
  if (a.ct_max_iters) c.ct.max_iterations = *a.ct_max_iters;
  if (a.ct_threshold) c.ct.threshold = *a.ct_threshold;
  if (a.threads) c.threads = *a.threads;
  if (a.timing) c.record_runtime = true;
  for (const auto& path : a.distributions) {
    auto dist = load_distribution(path);
    c.distributions.insert_or_assign(dist.num_labels(), std::move(dist));
  }

  const auto results = run_grid(c);
  write_results_csv(results, a.out);
  std::cerr << "wrote " << results.size() << " records to " << a.out << '\n';
  if (!a.significance_out.empty()) {
    const auto sig = significance_table(results);
    for (const auto& w : sig.warnings) std::cerr << "warning: " << w << '\n';
    write_significance_csv(sig.records, a.significance_out);
    std::cerr << "wrote " << sig.records.size() << " comparisons to " << a.significance_out
              << '\n';
  }
  return 0;
}

int run_significance(const SignificanceArgs& a) {
  const auto sig = significance_table(read_results_csv(a.in));
  for (const auto& w : sig.warnings) std::cerr << "warning: " << w << '\n';
  write_significance_csv(sig.records, a.out);
  return 0;
}

int run_aggregate(const AggregateArgs& a) {
  const auto matrix = read_annotations_csv(a.in, Taxonomy(a.labels));
  TruthEstimate estimate;
  switch (parse_method(a.method)) {
    case Method::mv:
      estimate = majority_vote(matrix, parse_tie_policy(a.tie_policy), a.seed);
      break;
    case Method::em: {
      auto state = run_em(matrix, {.tolerance = a.em_tol, .max_iterations = a.em_max_iters});
      if (!state.converged) {
        std::cerr << "warning: EM stopped after " << state.iterations << " iterations\n";
      }
      estimate = std::move(state.estimate);
      break;
    }
    case Method::ct:
      estimate = run_crowdtruth(matrix, {.tolerance = a.ct_tol,
                                         .max_iterations = a.ct_max_iters,
                                         .threshold = a.ct_threshold});
      break;
  }
  if (a.out == "-") {
    write_estimate_csv(estimate, std::cout);
  } else {
    write_estimate_csv(estimate, a.out);
  }
  return 0;
}

int run_simulate(const SimulateArgs& a) {
  const LabelDistribution dist =
      a.distribution.empty() ? builtin_distribution(a.labels) : load_distribution(a.distribution);
  if (dist.num_labels() != a.labels) {
    throw ConfigError("distribution has " + std::to_string(dist.num_labels()) +
                      " labels but --labels is " + std::to_string(a.labels));
  }
  const auto truth = sample_ground_truth(dist, a.sample, derive_seed({a.seed, 0}));
  const auto band = ExpertiseBand::for_kind(parse_band_kind(a.band), a.labels);
  const auto workers = sample_expertise(band, a.workers, derive_seed({a.seed, 1}));
  const auto matrix = simulate_annotations(truth, workers, derive_seed({a.seed, 2}));
  write_annotations_csv(matrix, a.out);
  if (!a.truth_out.empty()) write_truth_csv(truth, a.truth_out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Crowd label aggregation: majority vote, Dawid-Skene EM and CrowdTruth"};
  app.require_subcommand(1);

  ExperimentArgs ex;
  auto* exp = app.add_subcommand("experiment", "run a simulated experiment grid");
  exp->add_option("--config", ex.config_path, "JSON experiment config")->check(CLI::ExistingFile);
  exp->add_option("--band", ex.band, "expertise band: high or low (default low)");
  exp->add_option("--labels", ex.labels, "label set sizes G")->delimiter(',');
  exp->add_option("--samples", ex.samples, "sample sizes S")->delimiter(',');
  exp->add_option("--workers", ex.workers, "worker counts W")->delimiter(',');
  exp->add_option("--reps", ex.reps, "repetitions per cell");
  exp->add_option("--seed", ex.seed, "master seed");
  exp->add_option("--methods", ex.methods, "comma-separated subset of mv,em,ct");
  exp->add_option("--tie-policy", ex.tie_policy, "weighted-random, lowest-index or drop");
  exp->add_option("--em-tol", ex.em_tol);
  exp->add_option("--em-max-iters", ex.em_max_iters);
  exp->add_option("--ct-tol", ex.ct_tol);
  exp->add_option("--ct-max-iters", ex.ct_max_iters);
  exp->add_option("--ct-threshold", ex.ct_threshold);
  exp->add_option("--distribution", ex.distributions, "label distribution JSON (repeatable)")
      ->check(CLI::ExistingFile);
  exp->add_option("--threads", ex.threads, "0 = all cores");
  exp->add_flag("--timing", ex.timing, "record per-method runtime (output no longer reproducible)");
  exp->add_option("--out", ex.out)->capture_default_str();
  exp->add_option("--significance-out", ex.significance_out, "also write pairwise ANOVA table");

  SignificanceArgs sg;
  auto* sig = app.add_subcommand("significance", "pairwise ANOVA from a results file");
  sig->add_option("--in", sg.in)->capture_default_str()->check(CLI::ExistingFile);
  sig->add_option("--out", sg.out)->capture_default_str();

  AggregateArgs ag;
  auto* agg = app.add_subcommand("aggregate", "aggregate an annotations CSV");
  agg->add_option("--method", ag.method, "mv, em or ct")->capture_default_str();
  agg->add_option("--in", ag.in)->required()->check(CLI::ExistingFile);
  agg->add_option("--labels", ag.labels, "number of labels G")->required()->check(CLI::Range(2, 1 << 20));
  agg->add_option("--out", ag.out, "'-' for stdout")->capture_default_str();
  agg->add_option("--tie-policy", ag.tie_policy)->capture_default_str();
  agg->add_option("--seed", ag.seed, "seed for weighted-random ties");
  agg->add_option("--em-tol", ag.em_tol)->capture_default_str();
  agg->add_option("--em-max-iters", ag.em_max_iters)->capture_default_str();
  agg->add_option("--ct-tol", ag.ct_tol)->capture_default_str();
  agg->add_option("--ct-max-iters", ag.ct_max_iters)->capture_default_str();
  agg->add_option("--ct-threshold", ag.ct_threshold);

  SimulateArgs sm;
  auto* sim = app.add_subcommand("simulate", "write a synthetic annotations CSV");
  sim->add_option("--labels", sm.labels)->capture_default_str();
  sim->add_option("--sample", sm.sample)->capture_default_str();
  sim->add_option("--workers", sm.workers)->capture_default_str();
  sim->add_option("--band", sm.band)->capture_default_str();
  sim->add_option("--seed", sm.seed)->capture_default_str();
  sim->add_option("--out", sm.out)->capture_default_str();
  sim->add_option("--truth-out", sm.truth_out);
  sim->add_option("--distribution", sm.distribution)->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*exp) return run_experiment(ex);
    if (*sig) return run_significance(sg);
    if (*agg) return run_aggregate(ag);
    if (*sim) return run_simulate(sm);
  } catch (const labelagg::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const labelagg::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
