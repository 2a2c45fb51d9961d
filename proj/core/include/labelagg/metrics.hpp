#pragma once

#include <span>
#include <vector>

#include "labelagg/types.hpp"

namespace labelagg {

struct ScoreReport {
  double weighted_f1 = 0.0;
  std::vector<double> per_class_f1;  // one per label
  std::vector<int> support;          // true count per label over retained items
  double retained_fraction = 1.0;
};

/// Support-weighted F1 over the items not marked dropped. Precision or recall
/// with a zero denominator counts as 0. Throws ShapeError on length mismatch
/// and ValidationError when every item is dropped.
ScoreReport weighted_f1(const TruthEstimate& predicted, const TruthAssignment& truth);

/// Same on raw label sequences; `dropped` may be empty (keep everything).
ScoreReport weighted_f1(std::span<const Label> predicted, std::span<const Label> truth,
                        int num_labels, const std::vector<bool>& dropped = {});

struct AnovaResult {
  double f_statistic = 0.0;
  int df_between = 0;
  int df_within = 0;
  double p_value = 1.0;
};

/// One-way ANOVA over >= 2 groups of >= 2 observations each. When both sums
/// of squares vanish F is 0 and p is 1; a positive between-group sum with no
/// within-group spread gives F = inf and p = 0.
AnovaResult one_way_anova(std::span<const std::vector<double>> groups);

}  // namespace labelagg
