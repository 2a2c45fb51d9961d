#include "labelagg/simulate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>

#include "json.hpp"
#include "labelagg/random.hpp"

namespace labelagg {
namespace {

struct TabulatedDistribution {
  int num_labels;
  std::vector<double> proportions;
};

const std::vector<TabulatedDistribution>& label_tables() {
  static const std::vector<TabulatedDistribution> tables = {
      {2, {0.373, 0.627}},
      {3, {0.289, 0.353, 0.358}},
      {5, {0.17, 0.207, 0.21, 0.209, 0.204}},
      {7, {0.12, 0.146, 0.148, 0.147, 0.145, 0.148, 0.146}},
      {10, {0.083, 0.101, 0.102, 0.102, 0.1, 0.102, 0.101, 0.103, 0.103, 0.103}},
      {15, {0.055, 0.067, 0.068, 0.067, 0.066, 0.068, 0.067, 0.068, 0.068, 0.068, 0.068, 0.068,
            0.067, 0.068, 0.067}},
      {20, {0.042, 0.052, 0.052, 0.052, 0.051, 0.052, 0.051, 0.053, 0.053, 0.053,
            0.053, 0.053, 0.052, 0.053, 0.052, 0.053, 0.048, 0.05, 0.041, 0.033}},
  };
  return tables;
}

// Mean weighted F1 of a classifier trained on random labels, per G.
constexpr std::array<std::pair<int, double>, 7> kLowerBounds = {{
    {2, 0.483},
    {3, 0.327},
    {5, 0.189},
    {7, 0.139},
    {10, 0.094},
    {15, 0.063},
    {20, 0.049},
}};

constexpr double kSumTolerance = 1e-9;

}  // namespace

LabelDistribution::LabelDistribution(std::vector<double> proportions)
    : proportions_(std::move(proportions)) {
  if (proportions_.size() < 2) {
    throw ValidationError("label distribution needs at least 2 proportions");
  }
  double total = 0.0;
  for (double p : proportions_) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw ValidationError("label proportions must be finite and non-negative");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > kSumTolerance) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "label proportions sum to " << total << ", expected 1";
    throw ValidationError(msg.str());
  }
}

bool has_builtin_distribution(int num_labels) noexcept {
  const auto& tables = label_tables();
  return std::any_of(tables.begin(), tables.end(),
                     [&](const auto& t) { return t.num_labels == num_labels; });
}

LabelDistribution builtin_distribution(int num_labels) {
  for (const auto& t : label_tables()) {
    if (t.num_labels != num_labels) continue;
    // The published G=20 column sums to 0.999.
    const double total = std::accumulate(t.proportions.begin(), t.proportions.end(), 0.0);
    std::vector<double> p = t.proportions;
    for (double& v : p) v /= total;
    return LabelDistribution(std::move(p));
  }
  throw ValidationError("no built-in label distribution for G=" + std::to_string(num_labels) +
                        "; supply a custom distribution (tabulated: 2, 3, 5, 7, 10, 15, 20)");
}

LabelDistribution parse_distribution_json(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("distribution JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("num_labels") || !doc.contains("proportions")) {
    throw ParseError("distribution JSON needs \"num_labels\" and \"proportions\"");
  }
  int num_labels = 0;
  std::vector<double> proportions;
  try {
    num_labels = doc.at("num_labels").get<int>();
    proportions = doc.at("proportions").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("distribution JSON: ") + e.what());
  }
  if (static_cast<std::size_t>(num_labels) != proportions.size()) {
    throw ValidationError("distribution declares " + std::to_string(num_labels) +
                          " labels but lists " + std::to_string(proportions.size()) +
                          " proportions");
  }
  return LabelDistribution(std::move(proportions));
}

LabelDistribution load_distribution(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open distribution file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_distribution_json(buf.str());
}

std::vector<int> apportion_counts(const LabelDistribution& dist, int target_size) {
  if (target_size < 1) throw ValidationError("target sample size must be >= 1");
  const auto p = dist.proportions();
  const std::size_t g = p.size();
  std::vector<int> counts(g);
  std::vector<double> remainder(g);
  int assigned = 0;
  for (std::size_t j = 0; j < g; ++j) {
    const double quota = static_cast<double>(target_size) * p[j];
    counts[j] = static_cast<int>(std::floor(quota));
    remainder[j] = quota - counts[j];
    assigned += counts[j];
  }
  // Floors sum to at most target_size because the proportions sum to 1
  // within 1e-9 and target sizes are far below 1e9.
  std::vector<bool> bumped(g, false);
  for (int leftover = target_size - assigned; leftover > 0; --leftover) {
    std::size_t best = g;
    for (std::size_t j = 0; j < g; ++j) {
      if (bumped[j]) continue;
      if (best == g || remainder[j] > remainder[best] + kSumTolerance) best = j;
    }
    if (best == g) {
      bumped.assign(g, false);
      best = 0;
    }
    bumped[best] = true;
    ++counts[best];
  }
  return counts;
}

TruthAssignment sample_ground_truth(const LabelDistribution& dist, int target_size,
                                    std::uint64_t seed) {
  const auto counts = apportion_counts(dist, target_size);
  std::vector<Label> labels;
  labels.reserve(static_cast<std::size_t>(target_size));
  for (std::size_t j = 0; j < counts.size(); ++j) {
    labels.insert(labels.end(), static_cast<std::size_t>(counts[j]), static_cast<Label>(j));
  }
  Rng rng(seed);
  for (std::size_t i = labels.size(); i > 1; --i) {
    std::swap(labels[i - 1], labels[rng.below(i)]);
  }
  return TruthAssignment(dist.taxonomy(), std::move(labels));
}

std::string_view to_string(BandKind kind) noexcept {
  return kind == BandKind::high ? "high" : "low";
}

BandKind parse_band_kind(std::string_view text) {
  if (text == "high") return BandKind::high;
  if (text == "low") return BandKind::low;
  throw ParseError("unknown expertise band '" + std::string(text) + "' (expected high|low)");
}

ExpertiseBand::ExpertiseBand(double lower_bound, double upper_bound, BandKind band_kind)
    : lower(lower_bound), upper(upper_bound), kind(band_kind) {
  if (!(lower >= 0.0 && lower < upper && upper <= 1.0)) {
    throw ValidationError("expertise band needs 0 <= lower < upper <= 1");
  }
}

ExpertiseBand ExpertiseBand::high() { return {0.51, 0.99, BandKind::high}; }

ExpertiseBand ExpertiseBand::low(int num_labels) {
  return {lower_bound_for(num_labels), 0.8, BandKind::low};
}

ExpertiseBand ExpertiseBand::for_kind(BandKind kind, int num_labels) {
  return kind == BandKind::high ? high() : low(num_labels);
}

std::vector<WorkerProfile> sample_expertise(const ExpertiseBand& band, int num_workers,
                                            std::uint64_t seed) {
  if (num_workers < 1) throw ValidationError("need at least one worker");
  Rng rng(seed);
  std::vector<WorkerProfile> out;
  out.reserve(static_cast<std::size_t>(num_workers));
  const double width = band.upper - band.lower;
  while (out.size() < static_cast<std::size_t>(num_workers)) {
    const double lambda = band.lower + width * rng.uniform_open01();
    if (lambda <= band.lower || lambda >= band.upper) continue;
    out.push_back({lambda});
  }
  return out;
}

std::size_t corruption_count(double expertise, std::size_t n) {
  // nearbyint honours the default round-to-nearest-even mode.
  const double k = std::nearbyint((1.0 - expertise) * static_cast<double>(n));
  return static_cast<std::size_t>(std::clamp(k, 0.0, static_cast<double>(n)));
}

std::vector<Label> corrupt_answers(const TruthAssignment& truth, const WorkerProfile& profile,
                                   const Taxonomy& taxonomy, std::uint64_t seed) {
  if (truth.size() == 0) throw ValidationError("cannot corrupt an empty truth");
  const std::size_t n = truth.size();
  std::vector<Label> answers(truth.labels().begin(), truth.labels().end());
  const std::size_t k = corruption_count(profile.expertise, n);

  Rng rng(seed);
  std::vector<std::size_t> positions(n);
  std::iota(positions.begin(), positions.end(), 0);
  const auto g = static_cast<std::uint64_t>(taxonomy.num_labels());
  for (std::size_t i = 0; i < k; ++i) {
    std::swap(positions[i], positions[i + rng.below(n - i)]);
    const std::size_t s = positions[i];
    Label replacement = truth[s];
    while (replacement == truth[s]) replacement = static_cast<Label>(rng.below(g));
    answers[s] = replacement;
  }
  return answers;
}

double lower_bound_for(int num_labels) {
  if (num_labels < 2) throw ValidationError("lower bound needs G >= 2");
  for (const auto& [g, lb] : kLowerBounds) {
    if (g == num_labels) return lb;
  }
  if (num_labels > kLowerBounds.back().first) return kLowerBounds.back().second;
  // Between two tabulated G values; interpolate in x = 1/G.
  for (std::size_t i = 0; i + 1 < kLowerBounds.size(); ++i) {
    const auto [g_lo, lb_lo] = kLowerBounds[i];
    const auto [g_hi, lb_hi] = kLowerBounds[i + 1];
    if (num_labels > g_lo && num_labels < g_hi) {
      const double x = 1.0 / num_labels;
      const double x_lo = 1.0 / g_lo;
      const double x_hi = 1.0 / g_hi;
      const double t = (x - x_hi) / (x_lo - x_hi);
      return lb_hi + t * (lb_lo - lb_hi);
    }
  }
  return kLowerBounds.front().second;
}

AnnotationMatrix simulate_annotations(const TruthAssignment& truth,
                                      std::span<const WorkerProfile> profiles,
                                      std::uint64_t seed) {
  std::vector<std::vector<Label>> columns;
  columns.reserve(profiles.size());
  for (std::size_t w = 0; w < profiles.size(); ++w) {
    columns.push_back(corrupt_answers(truth, profiles[w], truth.taxonomy(),
                                      derive_seed({seed, static_cast<std::uint64_t>(w)})));
  }
  return AnnotationMatrix::from_columns(truth.taxonomy(), columns);
}

}  // namespace labelagg
