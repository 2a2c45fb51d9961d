#pragma once

#include <vector>

#include "labelagg/types.hpp"

namespace labelagg {

/// Pseudo-count added to every error-rate cell before row normalisation, and
/// the floor applied to label marginals.
inline constexpr double kEmSmoothing = 1e-9;

struct EmConfig {
  double tolerance = 1e-6;  // stop when max |delta posterior| drops below this
  int max_iterations = 100;
};

/// Dawid-Skene model parameters.
struct EmParameters {
  /// One G x G row-stochastic matrix per worker; row = true label,
  /// column = label the worker gave.
  std::vector<RealTable> error_rates;
  /// Label prevalence, sums to 1.
  std::vector<double> marginals;
};

struct EStepResult {
  RealTable posterior;
  /// Observed-data log-likelihood of the parameters the E-step was run with.
  double log_likelihood = 0.0;
};

struct EmState {
  TruthEstimate estimate;
  EmParameters parameters;  // parameters behind the final posterior
  int iterations = 0;
  bool converged = false;
  std::vector<double> log_likelihood_trace;  // one entry per iteration
};

/// Soft majority vote: T(s, j) is the fraction of workers answering j on s.
RealTable em_initialize(const AnnotationMatrix& matrix);

/// Error rates pi(w)[j][g] = sum_s T(s,j) n(s,g,w) / sum_g sum_s T(s,j) n(s,g,w),
/// with `smoothing` added to each numerator cell, and marginals
/// P(j) = sum_s T(s,j) / S floored at `smoothing` then renormalised.
/// A row with no mass at all (only possible with smoothing == 0) becomes uniform.
EmParameters em_m_step(const RealTable& posterior, const AnnotationMatrix& matrix,
                       double smoothing = kEmSmoothing);

/// Posterior T(s,j) proportional to P(j) prod_w pi(w)[j][answer(s,w)],
/// evaluated in log space with per-row max subtraction. Throws NumericError
/// when every label of an item has zero likelihood.
EStepResult em_e_step(const EmParameters& params, const AnnotationMatrix& matrix);

/// Alternates M-step and E-step from the soft-MV initialisation. Hard labels
/// are the row argmax with lowest-index tie-breaking.
EmState run_em(const AnnotationMatrix& matrix, const EmConfig& config = {});

}  // namespace labelagg
