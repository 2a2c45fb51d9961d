#include "labelagg/dawid_skene.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace labelagg {

RealTable em_initialize(const AnnotationMatrix& matrix) {
  const std::size_t g = static_cast<std::size_t>(matrix.num_labels());
  RealTable t(matrix.num_items(), g);
  const double share = 1.0 / static_cast<double>(matrix.num_workers());
  for (std::size_t s = 0; s < matrix.num_items(); ++s) {
    for (Label a : matrix.item(s)) t(s, static_cast<std::size_t>(a)) += share;
  }
  return t;
}

EmParameters em_m_step(const RealTable& posterior, const AnnotationMatrix& matrix,
                       double smoothing) {
  const std::size_t num_items = matrix.num_items();
  const std::size_t num_workers = matrix.num_workers();
  const std::size_t g = static_cast<std::size_t>(matrix.num_labels());
  if (posterior.rows() != num_items || posterior.cols() != g) {
    throw ShapeError("posterior shape does not match the annotation matrix");
  }

  // counts[w] is stored answer-major (given label x true label) so the inner
  // loop runs over a contiguous posterior row.
  std::vector<RealTable> counts(num_workers, RealTable(g, g));
  for (std::size_t s = 0; s < num_items; ++s) {
    const auto t_row = posterior.row(s);
    const auto answers = matrix.item(s);
    for (std::size_t w = 0; w < num_workers; ++w) {
      auto dst = counts[w].row(static_cast<std::size_t>(answers[w]));
      for (std::size_t j = 0; j < g; ++j) dst[j] += t_row[j];
    }
  }

  EmParameters params;
  params.error_rates.reserve(num_workers);
  for (std::size_t w = 0; w < num_workers; ++w) {
    RealTable pi(g, g);
    for (std::size_t j = 0; j < g; ++j) {
      double total = 0.0;
      for (std::size_t a = 0; a < g; ++a) {
        pi(j, a) = counts[w](a, j) + smoothing;
        total += pi(j, a);
      }
      if (total > 0.0) {
        for (std::size_t a = 0; a < g; ++a) pi(j, a) /= total;
      } else {
        for (std::size_t a = 0; a < g; ++a) pi(j, a) = 1.0 / static_cast<double>(g);
      }
    }
    params.error_rates.push_back(std::move(pi));
  }

  params.marginals.assign(g, 0.0);
  for (std::size_t s = 0; s < num_items; ++s) {
    const auto t_row = posterior.row(s);
    for (std::size_t j = 0; j < g; ++j) params.marginals[j] += t_row[j];
  }
  double total = 0.0;
  for (double& p : params.marginals) {
    p = std::max(p / static_cast<double>(num_items), smoothing);
    total += p;
  }
  for (double& p : params.marginals) p /= total;
  return params;
}

EStepResult em_e_step(const EmParameters& params, const AnnotationMatrix& matrix) {
  const std::size_t num_items = matrix.num_items();
  const std::size_t num_workers = matrix.num_workers();
  const std::size_t g = static_cast<std::size_t>(matrix.num_labels());
  if (params.error_rates.size() != num_workers || params.marginals.size() != g) {
    throw ShapeError("EM parameters do not match the annotation matrix");
  }

  // log_pi[w] is answer-major: log_pi[w](a, j) = log pi(w)[j][a].
  std::vector<RealTable> log_pi(num_workers, RealTable(g, g));
  for (std::size_t w = 0; w < num_workers; ++w) {
    for (std::size_t j = 0; j < g; ++j) {
      for (std::size_t a = 0; a < g; ++a) log_pi[w](a, j) = std::log(params.error_rates[w](j, a));
    }
  }
  std::vector<double> log_prior(g);
  for (std::size_t j = 0; j < g; ++j) log_prior[j] = std::log(params.marginals[j]);

  EStepResult result{RealTable(num_items, g), 0.0};
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < num_items; ++s) {
    auto row = result.posterior.row(s);
    std::copy(log_prior.begin(), log_prior.end(), row.begin());
    const auto answers = matrix.item(s);
    for (std::size_t w = 0; w < num_workers; ++w) {
      const auto src = log_pi[w].row(static_cast<std::size_t>(answers[w]));
      for (std::size_t j = 0; j < g; ++j) row[j] += src[j];
    }
    const double top = *std::max_element(row.begin(), row.end());
    if (top == kNegInf || std::isnan(top)) {
      throw NumericError("E-step: every label has zero likelihood for item " +
                         std::to_string(s));
    }
    double total = 0.0;
    for (double& v : row) {
      v = std::exp(v - top);
      total += v;
    }
    for (double& v : row) v /= total;
    result.log_likelihood += top + std::log(total);
  }
  return result;
}

EmState run_em(const AnnotationMatrix& matrix, const EmConfig& config) {
  if (config.max_iterations < 1) throw ConfigError("EM needs max_iterations >= 1");
  RealTable posterior = em_initialize(matrix);
  EmState state;
  for (int it = 1; it <= config.max_iterations; ++it) {
    EmParameters params = em_m_step(posterior, matrix);
    EStepResult step = em_e_step(params, matrix);

    double delta = 0.0;
    const auto before = posterior.values();
    const auto after = step.posterior.values();
    for (std::size_t i = 0; i < before.size(); ++i) {
      delta = std::max(delta, std::abs(after[i] - before[i]));
    }

    posterior = std::move(step.posterior);
    state.parameters = std::move(params);
    state.log_likelihood_trace.push_back(step.log_likelihood);
    state.iterations = it;
    if (delta < config.tolerance) {
      state.converged = true;
      break;
    }
  }
  state.estimate = estimate_from_posterior(std::move(posterior));
  return state;
}

}  // namespace labelagg
