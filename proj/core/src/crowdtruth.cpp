#include "labelagg/crowdtruth.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace labelagg {
namespace {

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

double max_abs_change(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace

RealTable unit_annotation_scores(const AnnotationMatrix& matrix,
                                 std::span<const double> worker_quality) {
  if (worker_quality.size() != matrix.num_workers()) {
    throw ValidationError("expected " + std::to_string(matrix.num_workers()) +
                          " worker qualities, got " + std::to_string(worker_quality.size()));
  }
  double total = 0.0;
  for (double q : worker_quality) {
    if (!(q >= 0.0) || !std::isfinite(q)) {
      throw ValidationError("worker qualities must be finite and non-negative");
    }
    total += q;
  }
  // Every worker answers every item, so one total serves all items.
  if (total <= 0.0) throw NumericError("unit annotation scores: all worker qualities are zero");

  const std::size_t g = static_cast<std::size_t>(matrix.num_labels());
  RealTable u(matrix.num_items(), g);
  for (std::size_t s = 0; s < matrix.num_items(); ++s) {
    const auto answers = matrix.item(s);
    for (std::size_t w = 0; w < answers.size(); ++w) {
      u(s, static_cast<std::size_t>(answers[w])) += worker_quality[w];
    }
    for (double& v : u.row(s)) v /= total;
  }
  return u;
}

CtMetrics ct_fixed_point(const AnnotationMatrix& matrix, const CtConfig& config) {
  const std::size_t num_items = matrix.num_items();
  const std::size_t num_workers = matrix.num_workers();
  const std::size_t g = static_cast<std::size_t>(matrix.num_labels());
  if (num_workers < 2) {
    throw ValidationError("CrowdTruth metrics need at least two workers");
  }
  if (config.max_iterations < 1) throw ConfigError("CrowdTruth needs max_iterations >= 1");

  CtMetrics m;
  m.worker_quality.assign(num_workers, 1.0);
  m.worker_unit_agreement.assign(num_workers, 1.0);
  m.worker_worker_agreement.assign(num_workers, 1.0);
  m.unit_quality.assign(num_items, 1.0);

  // Per item and label: summed quality (weight) and summed squared quality.
  RealTable weight(num_items, g);
  RealTable weight_sq(num_items, g);
  std::vector<double> norm_sq(num_items);
  std::vector<double> wua(num_workers), wwa(num_workers), quality(num_workers);
  std::vector<double> unit_quality(num_items);

  for (int it = 1; it <= config.max_iterations; ++it) {
    const auto& q = m.worker_quality;
    double q_sum = 0.0;
    double q_sq_sum = 0.0;
    for (double v : q) {
      q_sum += v;
      q_sq_sum += v * v;
    }

    // (a) unit quality: quality-weighted pairwise agreement on each item,
    // sum_{i<j} Q_i Q_j [a_i == a_j] / sum_{i<j} Q_i Q_j, in closed form.
    const double pair_total = std::max(0.5 * (q_sum * q_sum - q_sq_sum), kCtEpsilon);
    double unit_quality_sum = 0.0;
    for (std::size_t s = 0; s < num_items; ++s) {
      auto wrow = weight.row(s);
      auto sqrow = weight_sq.row(s);
      std::fill(wrow.begin(), wrow.end(), 0.0);
      std::fill(sqrow.begin(), sqrow.end(), 0.0);
      const auto answers = matrix.item(s);
      for (std::size_t w = 0; w < num_workers; ++w) {
        const auto a = static_cast<std::size_t>(answers[w]);
        wrow[a] += q[w];
        sqrow[a] += q[w] * q[w];
      }
      double agreeing = 0.0;
      double nsq = 0.0;
      for (std::size_t k = 0; k < g; ++k) {
        agreeing += 0.5 * (wrow[k] * wrow[k] - sqrow[k]);
        nsq += wrow[k] * wrow[k];
      }
      norm_sq[s] = nsq;
      unit_quality[s] = clamp01(agreeing / pair_total);
      unit_quality_sum += unit_quality[s];
    }
    const double uq_total = std::max(unit_quality_sum, kCtEpsilon);

    // (b) worker-unit agreement: cosine between the worker's one-hot vector
    // and the quality-weighted vote vector of everyone else on the item.
    // (c) worker-worker agreement: quality-weighted share of other workers
    // agreeing with this worker, averaged over items by unit quality.
    for (std::size_t w = 0; w < num_workers; ++w) {
      double cos_acc = 0.0;
      double agree_acc = 0.0;
      for (std::size_t s = 0; s < num_items; ++s) {
        const auto a = static_cast<std::size_t>(matrix(s, w));
        const double same = std::max(weight(s, a) - q[w], 0.0);
        const double others_sq =
            std::max(norm_sq[s] - weight(s, a) * weight(s, a), 0.0) + same * same;
        const double cosine = same / std::max(std::sqrt(others_sq), kCtEpsilon);
        cos_acc += clamp01(cosine) * unit_quality[s];
        agree_acc += same * unit_quality[s];
      }
      wua[w] = clamp01(cos_acc / uq_total);
      const double others_total = std::max(q_sum - q[w], kCtEpsilon);
      wwa[w] = clamp01(agree_acc / (uq_total * others_total));
      quality[w] = wua[w] * wwa[w];
    }

    const double change = std::max({max_abs_change(quality, m.worker_quality),
                                    max_abs_change(wua, m.worker_unit_agreement),
                                    max_abs_change(wwa, m.worker_worker_agreement),
                                    max_abs_change(unit_quality, m.unit_quality)});
    m.worker_quality = quality;
    m.worker_unit_agreement = wua;
    m.worker_worker_agreement = wwa;
    m.unit_quality = unit_quality;
    m.iterations = it;
    if (change < config.tolerance) {
      m.converged = true;
      break;
    }
  }

  const bool all_zero = std::all_of(m.worker_quality.begin(), m.worker_quality.end(),
                                    [](double v) { return v <= 0.0; });
  if (all_zero) {
    m.degenerate_weights = true;
    const std::vector<double> equal(num_workers, 1.0);
    m.unit_annotation = unit_annotation_scores(matrix, equal);
  } else {
    m.unit_annotation = unit_annotation_scores(matrix, m.worker_quality);
  }
  return m;
}

TruthEstimate crowdtruth_estimate(const CtMetrics& metrics, const CtConfig& config) {
  TruthEstimate out = estimate_from_posterior(metrics.unit_annotation);
  if (config.threshold) {
    for (std::size_t s = 0; s < out.num_items(); ++s) {
      const auto row = out.posterior.row(s);
      out.dropped[s] = row[static_cast<std::size_t>(out.hard_labels[s])] < *config.threshold;
    }
  }
  return out;
}

TruthEstimate run_crowdtruth(const AnnotationMatrix& matrix, const CtConfig& config) {
  return crowdtruth_estimate(ct_fixed_point(matrix, config), config);
}

}  // namespace labelagg
