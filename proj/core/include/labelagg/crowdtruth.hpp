#pragma once

#include <optional>
#include <span>
#include <vector>

#include "labelagg/types.hpp"

namespace labelagg {

/// Floor applied to every denominator of the quality fixed point.
inline constexpr double kCtEpsilon = 1e-9;

struct CtConfig {
  double tolerance = 1e-6;
  int max_iterations = 50;
  /// When set, items whose best unit-annotation score is below the threshold
  /// are marked dropped by run_crowdtruth. Off by default.
  std::optional<double> threshold;
};

/// Worker and unit quality metrics for closed single-choice tasks.
struct CtMetrics {
  std::vector<double> worker_quality;           // Q(w) = wua(w) * wwa(w)
  std::vector<double> worker_unit_agreement;    // wua(w)
  std::vector<double> worker_worker_agreement;  // wwa(w)
  std::vector<double> unit_quality;             // per item
  RealTable unit_annotation;                    // U(s, g), rows sum to 1
  int iterations = 0;
  bool converged = false;
  /// Every worker ended with Q = 0 (total disagreement); U then falls back to
  /// equal worker weights.
  bool degenerate_weights = false;
};

/// Quality-weighted vote share:
///   U(s, g) = sum_w [answer(s, w) == g] Q(w) / sum_w Q(w).
/// Throws ValidationError for negative or mismatched qualities and
/// NumericError when all qualities are zero.
RealTable unit_annotation_scores(const AnnotationMatrix& matrix,
                                 std::span<const double> worker_quality);

/// Iterates unit quality, worker-unit agreement, worker-worker agreement and
/// worker quality (in that order) from Q = 1 until the largest change of any
/// metric is below the tolerance, then scores U with the final Q.
/// Needs at least two workers (ValidationError otherwise).
CtMetrics ct_fixed_point(const AnnotationMatrix& matrix, const CtConfig& config = {});

/// Posterior = U rows; hard label = row argmax, lowest index on ties.
TruthEstimate run_crowdtruth(const AnnotationMatrix& matrix, const CtConfig& config = {});

/// Same, reusing an already computed fixed point.
TruthEstimate crowdtruth_estimate(const CtMetrics& metrics, const CtConfig& config = {});

}  // namespace labelagg
