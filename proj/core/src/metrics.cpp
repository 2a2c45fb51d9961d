#include "labelagg/metrics.hpp"

#include <limits>
#include <string>

#include "labelagg/special_functions.hpp"

namespace labelagg {

ScoreReport weighted_f1(std::span<const Label> predicted, std::span<const Label> truth,
                        int num_labels, const std::vector<bool>& dropped) {
  if (predicted.size() != truth.size()) {
    throw ShapeError("predicted and true label sequences differ in length (" +
                     std::to_string(predicted.size()) + " vs " + std::to_string(truth.size()) +
                     ")");
  }
  if (!dropped.empty() && dropped.size() != truth.size()) {
    throw ShapeError("dropped mask length does not match the labels");
  }
  const auto g = static_cast<std::size_t>(num_labels);
  std::vector<int> true_pos(g, 0), pred_count(g, 0), support(g, 0);
  std::size_t retained = 0;
  for (std::size_t s = 0; s < truth.size(); ++s) {
    if (!dropped.empty() && dropped[s]) continue;
    const auto t = static_cast<std::size_t>(truth[s]);
    const auto p = static_cast<std::size_t>(predicted[s]);
    if (t >= g || p >= g) throw ValidationError("label out of range in F1 scoring");
    ++retained;
    ++support[t];
    ++pred_count[p];
    if (t == p) ++true_pos[t];
  }
  if (retained == 0) throw ValidationError("every item was dropped; nothing to score");

  ScoreReport report;
  report.per_class_f1.assign(g, 0.0);
  report.support = support;
  report.retained_fraction = static_cast<double>(retained) / static_cast<double>(truth.size());
  double weighted = 0.0;
  for (std::size_t j = 0; j < g; ++j) {
    const double precision = pred_count[j] > 0 ? double(true_pos[j]) / pred_count[j] : 0.0;
    const double recall = support[j] > 0 ? double(true_pos[j]) / support[j] : 0.0;
    const double f1 =
        precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
    report.per_class_f1[j] = f1;
    weighted += support[j] * f1;
  }
  report.weighted_f1 = weighted / static_cast<double>(retained);
  return report;
}

ScoreReport weighted_f1(const TruthEstimate& predicted, const TruthAssignment& truth) {
  return weighted_f1(predicted.hard_labels, truth.labels(), truth.taxonomy().num_labels(),
                     predicted.dropped);
}

AnovaResult one_way_anova(std::span<const std::vector<double>> groups) {
  if (groups.size() < 2) throw ValidationError("ANOVA needs at least two groups");
  std::size_t n = 0;
  double grand_sum = 0.0;
  for (const auto& grp : groups) {
    if (grp.size() < 2) throw ValidationError("ANOVA needs at least two values per group");
    n += grp.size();
    for (double v : grp) grand_sum += v;
  }
  const double grand_mean = grand_sum / static_cast<double>(n);

  double ss_between = 0.0;
  double ss_within = 0.0;
  for (const auto& grp : groups) {
    double sum = 0.0;
    for (double v : grp) sum += v;
    const double mean = sum / static_cast<double>(grp.size());
    ss_between += static_cast<double>(grp.size()) * (mean - grand_mean) * (mean - grand_mean);
    for (double v : grp) ss_within += (v - mean) * (v - mean);
  }

  AnovaResult r;
  r.df_between = static_cast<int>(groups.size()) - 1;
  r.df_within = static_cast<int>(n - groups.size());
  if (ss_within == 0.0) {
    r.f_statistic = ss_between == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    r.p_value = ss_between == 0.0 ? 1.0 : 0.0;
    return r;
  }
  r.f_statistic = (ss_between / r.df_between) / (ss_within / r.df_within);
  r.p_value = f_distribution_sf(r.f_statistic, r.df_between, r.df_within);
  return r;
}

}  // namespace labelagg
