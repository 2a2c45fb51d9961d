#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "labelagg/crowdtruth.hpp"
#include "labelagg/dawid_skene.hpp"
#include "labelagg/majority_vote.hpp"
#include "labelagg/simulate.hpp"

namespace labelagg {

enum class Method { mv, em, ct };

std::string_view to_string(Method method) noexcept;
Method parse_method(std::string_view text);
/// Comma-separated list, e.g. "mv,em,ct".
std::vector<Method> parse_method_list(std::string_view text);

/// One synthetic-crowd study: every (G, S, W) combination, each repeated
/// `repetitions` times with freshly drawn workers.
struct ExperimentConfig {
  BandKind expertise_band_kind = BandKind::low;
  std::vector<int> label_sets;
  std::vector<int> sample_sizes;
  std::vector<int> worker_sets;
  int repetitions = 10;
  std::uint64_t master_seed = 42;
  std::vector<Method> methods = {Method::mv, Method::em, Method::ct};
  TiePolicy tie_policy = TiePolicy::weighted_random;
  EmConfig em;
  CtConfig ct;
  /// When set, G = 2 cells use this single sample size instead of
  /// sample_sizes (the full 569-item binary data set in the high band).
  std::optional<int> binary_sample_size;
  /// Custom label distributions keyed by G; they take precedence over the
  /// built-in tables and are required for untabulated G such as 13.
  std::map<int, LabelDistribution> distributions;
  /// Worker threads for run_grid; 0 means hardware concurrency. Output does
  /// not depend on this.
  int threads = 0;
  /// Record wall-clock runtime per method. Off by default because timings
  /// would make result files differ between identical runs.
  bool record_runtime = false;

  /// The full parameter grid for a band: all tabulated G, the S and W sets,
  /// 10 repetitions. The high band runs S = 500 only, with G = 2 at 569.
  static ExperimentConfig defaults(BandKind band);

  /// Throws ConfigError describing the first problem found.
  void validate() const;

  /// Sample sizes actually run for a label set.
  std::vector<int> sample_sizes_for(int num_labels) const;

  LabelDistribution distribution_for(int num_labels) const;
};

/// Parses a JSON document whose keys mirror the ExperimentConfig fields.
/// Missing keys keep the defaults of the band named by
/// "expertise_band_kind".
ExperimentConfig parse_experiment_config(std::string_view json_text);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);
std::string experiment_config_to_json(const ExperimentConfig& config);

struct RepetitionRecord {
  BandKind expertise_band = BandKind::low;
  int num_labels = 0;  // G
  int sample_target = 0;
  int sample_actual = 0;
  int num_workers = 0;
  int rep = 0;
  Method method = Method::mv;
  double weighted_f1 = 0.0;
  int tie_count = 0;
  int iterations = 0;
  bool converged = true;
  double runtime_ms = 0.0;
  std::uint64_t cell_seed = 0;
  std::uint64_t matrix_hash = 0;

  friend bool operator==(const RepetitionRecord&, const RepetitionRecord&) = default;
};

using ResultTable = std::vector<RepetitionRecord>;

/// Orders by (band, G, S, W, rep, method).
void sort_results(ResultTable& table);

/// Seed used for the ground truth shared by every W of a (G, S) pair.
std::uint64_t truth_seed(std::uint64_t master_seed, int num_labels, int sample_target);
/// Seed of one repetition of one cell.
std::uint64_t cell_seed(std::uint64_t master_seed, int num_labels, int sample_target,
                        int num_workers, int rep);

/// The annotation matrix a repetition feeds to every method.
struct RepetitionInput {
  TruthAssignment truth;
  std::vector<WorkerProfile> workers;
  AnnotationMatrix matrix;
  std::uint64_t seed;
};
RepetitionInput make_repetition_input(int num_labels, int sample_target, int num_workers,
                                      int rep, const ExperimentConfig& config);

/// All repetitions x methods of one cell, in (rep, method) order.
ResultTable run_cell(int num_labels, int sample_target, int num_workers, BandKind band,
                     const ExperimentConfig& config);

/// Every cell of the configured grid, sorted with sort_results().
ResultTable run_grid(const ExperimentConfig& config);

struct SignificanceRecord {
  int num_labels = 0;
  int sample_size = 0;
  int num_workers = 0;
  Method method_a = Method::em;
  Method method_b = Method::mv;
  double mean_f1_a = 0.0;
  double mean_f1_b = 0.0;
  double f_statistic = 0.0;
  double p_value = 1.0;
  bool significant_05 = false;
  bool significant_005 = false;

  /// p < 0.05 and method_a scored higher on average.
  bool favours_a() const noexcept { return significant_05 && mean_f1_a > mean_f1_b; }

  friend bool operator==(const SignificanceRecord&, const SignificanceRecord&) = default;
};

struct SignificanceTable {
  std::vector<SignificanceRecord> records;
  std::vector<std::string> warnings;  // skipped pairs
};

/// Pairwise one-way ANOVA of (em, mv), (ct, mv) and (ct, em) per cell, over
/// the per-repetition weighted F1 scores.
SignificanceTable significance_table(const ResultTable& results);

// results.csv / significance.csv. Headers are fixed; floats use 17
// significant digits so a write/read round trip is lossless.
inline constexpr std::string_view kResultsHeader =
    "expertise_band,G,S_target,S_actual,W,rep,method,weighted_f1,tie_count,iterations,"
    "converged,runtime_ms,cell_seed,matrix_hash";
inline constexpr std::string_view kSignificanceHeader =
    "G,S,W,method_a,method_b,mean_f1_a,mean_f1_b,f_statistic,p_value,significant_05,"
    "significant_005";

void write_results_csv(const ResultTable& table, std::ostream& out);
void write_results_csv(const ResultTable& table, const std::filesystem::path& path);
ResultTable read_results_csv(std::istream& in);
ResultTable read_results_csv(const std::filesystem::path& path);

void write_significance_csv(const std::vector<SignificanceRecord>& table, std::ostream& out);
void write_significance_csv(const std::vector<SignificanceRecord>& table,
                            const std::filesystem::path& path);
std::vector<SignificanceRecord> read_significance_csv(std::istream& in);
std::vector<SignificanceRecord> read_significance_csv(const std::filesystem::path& path);

}  // namespace labelagg
