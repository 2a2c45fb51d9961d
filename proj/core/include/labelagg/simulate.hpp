#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "labelagg/types.hpp"

namespace labelagg {

/// Class proportions used to lay out a synthetic ground truth.
class LabelDistribution {
 public:
  /// Throws ValidationError unless there are >= 2 non-negative proportions
  /// summing to 1 within 1e-9.
  explicit LabelDistribution(std::vector<double> proportions);

  int num_labels() const noexcept { return static_cast<int>(proportions_.size()); }
  Taxonomy taxonomy() const { return Taxonomy(num_labels()); }
  std::span<const double> proportions() const noexcept { return proportions_; }

 private:
  std::vector<double> proportions_;
};

/// Tabulated label distributions for G in {2, 3, 5, 7, 10, 15, 20}. G=2 is
/// the malignant/benign split of the Wisconsin breast cancer data; the rest
/// are leading subsets of 20 Newsgroups. Columns are renormalised to sum to 1.
LabelDistribution builtin_distribution(int num_labels);

/// True when builtin_distribution(num_labels) succeeds.
bool has_builtin_distribution(int num_labels) noexcept;

/// Parses {"num_labels": int, "proportions": [real, ...]}.
LabelDistribution parse_distribution_json(std::string_view json_text);
LabelDistribution load_distribution(const std::filesystem::path& path);

/// Largest-remainder apportionment of target_size over the proportions.
/// Remainders within 1e-9 of each other are tied and go to the lowest index.
std::vector<int> apportion_counts(const LabelDistribution& dist, int target_size);

/// Ground truth whose per-label counts are apportion_counts(), laid out in
/// label order and then shuffled with `seed`.
TruthAssignment sample_ground_truth(const LabelDistribution& dist, int target_size,
                                    std::uint64_t seed);

enum class BandKind { high, low };

std::string_view to_string(BandKind kind) noexcept;
BandKind parse_band_kind(std::string_view text);

/// Interval that worker expertise is drawn from (exclusive bounds).
struct ExpertiseBand {
  double lower;
  double upper;
  BandKind kind;

  /// Throws ValidationError unless 0 <= lower < upper <= 1.
  ExpertiseBand(double lower, double upper, BandKind kind);

  /// (0.51, 0.99).
  static ExpertiseBand high();
  /// (lower_bound_for(G), 0.8).
  static ExpertiseBand low(int num_labels);
  static ExpertiseBand for_kind(BandKind kind, int num_labels);
};

struct WorkerProfile {
  double expertise;  // fraction of answers left equal to the truth
};

/// num_workers expertise values, continuous-uniform on (band.lower, band.upper).
std::vector<WorkerProfile> sample_expertise(const ExpertiseBand& band, int num_workers,
                                            std::uint64_t seed);

/// round((1 - expertise) * n) with ties to even.
std::size_t corruption_count(double expertise, std::size_t n);

/// Copies the truth and changes exactly corruption_count() positions, chosen
/// uniformly without replacement. A changed position gets a label drawn
/// uniformly from the taxonomy, redrawn until it differs from the truth.
std::vector<Label> corrupt_answers(const TruthAssignment& truth, const WorkerProfile& profile,
                                   const Taxonomy& taxonomy, std::uint64_t seed);

/// Lower expertise bound for the low band. Tabulated for
/// G in {2, 3, 5, 7, 10, 15, 20}; otherwise linear in 1/G between the two
/// nearest tabulated points, clamped at the table ends.
double lower_bound_for(int num_labels);

/// One corrupt_answers() column per profile; worker w uses
/// derive_seed({seed, w}).
AnnotationMatrix simulate_annotations(const TruthAssignment& truth,
                                      std::span<const WorkerProfile> profiles,
                                      std::uint64_t seed);

}  // namespace labelagg
