#pragma once

// Reference Dawid-Skene EM written as literal nested loops over the one-hot
// indicator n[s][g][w], linear-space products, no shared code with the
// library implementation.

#include <cmath>
#include <vector>

namespace oracle {

using Table = std::vector<std::vector<double>>;

struct EmOracleResult {
  Table posterior;
  int iterations = 0;
  bool converged = false;
};

inline EmOracleResult naive_dawid_skene(const std::vector<std::vector<int>>& answers,
                                        int num_labels, double smoothing, double tolerance,
                                        int max_iterations) {
  const int S = static_cast<int>(answers.size());
  const int W = static_cast<int>(answers[0].size());
  const int G = num_labels;
  auto n = [&](int s, int g, int w) { return answers[s][w] == g ? 1.0 : 0.0; };

  Table T(S, std::vector<double>(G, 0.0));
  for (int s = 0; s < S; ++s) {
    for (int j = 0; j < G; ++j) {
      double votes = 0.0;
      for (int w = 0; w < W; ++w) votes += n(s, j, w);
      T[s][j] = votes / W;
    }
  }

  EmOracleResult result;
  for (int it = 1; it <= max_iterations; ++it) {
    // Error rates.
    std::vector<Table> pi(W, Table(G, std::vector<double>(G, 0.0)));
    for (int w = 0; w < W; ++w) {
      for (int j = 0; j < G; ++j) {
        double denom = 0.0;
        for (int g = 0; g < G; ++g) {
          double num = 0.0;
          for (int s = 0; s < S; ++s) num += T[s][j] * n(s, g, w);
          pi[w][j][g] = num + smoothing;
          denom += pi[w][j][g];
        }
        for (int g = 0; g < G; ++g) pi[w][j][g] /= denom;
      }
    }
    // Marginals.
    std::vector<double> P(G, 0.0);
    double ptotal = 0.0;
    for (int j = 0; j < G; ++j) {
      for (int s = 0; s < S; ++s) P[j] += T[s][j];
      P[j] /= S;
      if (P[j] < smoothing) P[j] = smoothing;
      ptotal += P[j];
    }
    for (int j = 0; j < G; ++j) P[j] /= ptotal;
    // Posterior.
    Table next(S, std::vector<double>(G, 0.0));
    for (int s = 0; s < S; ++s) {
      double denom = 0.0;
      for (int q = 0; q < G; ++q) {
        double prod = P[q];
        for (int w = 0; w < W; ++w) {
          for (int g = 0; g < G; ++g) prod *= std::pow(pi[w][q][g], n(s, g, w));
        }
        next[s][q] = prod;
        denom += prod;
      }
      for (int j = 0; j < G; ++j) next[s][j] /= denom;
    }
    double delta = 0.0;
    for (int s = 0; s < S; ++s) {
      for (int j = 0; j < G; ++j) delta = std::max(delta, std::abs(next[s][j] - T[s][j]));
    }
    T = next;
    result.iterations = it;
    if (delta < tolerance) {
      result.converged = true;
      break;
    }
  }
  result.posterior = T;
  return result;
}

}  // namespace oracle
