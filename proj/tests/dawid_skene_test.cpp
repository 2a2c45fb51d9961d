#include <gtest/gtest.h>

#include <numeric>

#include "labelagg/dawid_skene.hpp"
#include "labelagg/majority_vote.hpp"
#include "labelagg/metrics.hpp"
#include "labelagg/random.hpp"
#include "labelagg/simulate.hpp"
#include "oracles/em_oracle.hpp"
#include "test_util.hpp"

namespace labelagg {
namespace {

EmParameters symmetric_params(int workers, int g, double diag) {
  EmParameters p;
  for (int w = 0; w < workers; ++w) {
    RealTable pi(g, g, (1.0 - diag) / (g - 1));
    for (int j = 0; j < g; ++j) pi(j, j) = diag;
    p.error_rates.push_back(pi);
  }
  p.marginals.assign(g, 1.0 / g);
  return p;
}

void expect_rows_sum_to_one(const RealTable& t, double tol = 1e-9) {
  for (std::size_t r = 0; r < t.rows(); ++r) {
    const auto row = t.row(r);
    EXPECT_NEAR(std::accumulate(row.begin(), row.end(), 0.0), 1.0, tol) << "row " << r;
  }
}

TEST(EmInitialize, VoteFractions) {
  const auto t = em_initialize(AnnotationMatrix::from_rows(Taxonomy(2), {{0, 0, 1}}));
  EXPECT_DOUBLE_EQ(t(0, 0), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(t(0, 1), 1.0 / 3.0);

  const auto unanimous = em_initialize(AnnotationMatrix::from_rows(Taxonomy(3), {{2, 2, 2}}));
  EXPECT_DOUBLE_EQ(unanimous(0, 2), 1.0);
  EXPECT_DOUBLE_EQ(unanimous(0, 0), 0.0);

  const auto even = em_initialize(AnnotationMatrix::from_rows(Taxonomy(4), {{0, 1, 2, 3}}));
  for (int j = 0; j < 4; ++j) EXPECT_DOUBLE_EQ(even(0, j), 0.25);
}

TEST(EmMStep, PerfectWorkerGetsIdentity) {
  const auto m = AnnotationMatrix::from_rows(Taxonomy(3), {{0}, {1}, {2}, {1}});
  const auto params = em_m_step(em_initialize(m), m);
  for (int j = 0; j < 3; ++j) {
    for (int g = 0; g < 3; ++g) {
      EXPECT_NEAR(params.error_rates[0](j, g), j == g ? 1.0 : 0.0, 1e-8);
    }
  }
}

TEST(EmMStep, ConstantWorkerConcentratesOnColumnZero) {
  const auto m = AnnotationMatrix::from_rows(Taxonomy(3), {{0, 0}, {1, 0}, {2, 0}});
  RealTable t(3, 3);
  for (int s = 0; s < 3; ++s) t(s, s) = 1.0;
  const auto params = em_m_step(t, m);
  for (int j = 0; j < 3; ++j) EXPECT_NEAR(params.error_rates[1](j, 0), 1.0, 1e-8);
  expect_rows_sum_to_one(params.error_rates[1]);
}

TEST(EmMStep, HandEvaluatedCounts) {
  // T one-hot [0, 0, 1, 1]; worker answers [0, 1, 1, 1]. True-0 items were
  // answered 0 and 1 once each; true-1 items were both answered 1.
  const auto m = AnnotationMatrix::from_rows(Taxonomy(2), {{0}, {1}, {1}, {1}});
  RealTable t(4, 2);
  t(0, 0) = t(1, 0) = t(2, 1) = t(3, 1) = 1.0;
  const auto raw = em_m_step(t, m, 0.0);
  EXPECT_DOUBLE_EQ(raw.error_rates[0](0, 0), 0.5);
  EXPECT_DOUBLE_EQ(raw.error_rates[0](0, 1), 0.5);
  EXPECT_DOUBLE_EQ(raw.error_rates[0](1, 0), 0.0);
  EXPECT_DOUBLE_EQ(raw.error_rates[0](1, 1), 1.0);
  EXPECT_DOUBLE_EQ(raw.marginals[0], 0.5);

  const auto smoothed = em_m_step(t, m);
  EXPECT_NEAR(smoothed.error_rates[0](1, 0), 0.0, 1e-8);
  EXPECT_GT(smoothed.error_rates[0](1, 0), 0.0);
  expect_rows_sum_to_one(smoothed.error_rates[0]);
}

TEST(EmMStep, MarginalsFlooredAndNormalised) {
  const auto m = AnnotationMatrix::from_rows(Taxonomy(3), {{0, 0}, {0, 0}});
  const auto params = em_m_step(em_initialize(m), m);
  EXPECT_GT(params.marginals[2], 0.0);
  EXPECT_NEAR(std::accumulate(params.marginals.begin(), params.marginals.end(), 0.0), 1.0, 1e-12);
}

TEST(EmEStep, HandBayesProduct) {
  // 0.5*0.8*0.8*0.2 = 0.064 against 0.5*0.2*0.2*0.8 = 0.016.
  const auto m = AnnotationMatrix::from_rows(Taxonomy(2), {{0, 0, 1}});
  const auto step = em_e_step(symmetric_params(3, 2, 0.8), m);
  EXPECT_NEAR(step.posterior(0, 0), 0.8, 1e-12);
  EXPECT_NEAR(step.posterior(0, 1), 0.2, 1e-12);
  EXPECT_NEAR(step.log_likelihood, std::log(0.064 + 0.016), 1e-12);
}

TEST(EmEStep, IdentityRatesGiveOneHot) {
  const auto m = AnnotationMatrix::from_rows(Taxonomy(3), {{1, 1, 1}, {2, 2, 2}});
  const auto step = em_e_step(symmetric_params(3, 3, 1.0), m);
  EXPECT_DOUBLE_EQ(step.posterior(0, 1), 1.0);
  EXPECT_DOUBLE_EQ(step.posterior(1, 2), 1.0);
  EXPECT_DOUBLE_EQ(step.posterior(1, 0), 0.0);
}

TEST(EmEStep, UniformRatesReturnMarginals) {
  Rng rng(3);
  const auto m = testutil::random_matrix(rng, 10, 4, 3);
  auto params = symmetric_params(4, 3, 1.0 / 3.0);
  params.marginals = {0.2, 0.3, 0.5};
  const auto step = em_e_step(params, m);
  for (std::size_t s = 0; s < 10; ++s) {
    for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(step.posterior(s, j), params.marginals[j], 1e-12);
  }
}

TEST(EmEStep, ZeroLikelihoodRowIsNumericError) {
  const auto m = AnnotationMatrix::from_rows(Taxonomy(2), {{0, 1}});
  EXPECT_THROW(em_e_step(symmetric_params(2, 2, 1.0), m), NumericError);
}

TEST(EmEStep, NoUnderflowWithManyWorkers) {
  Rng rng(8);
  const auto m = testutil::random_matrix(rng, 50, 400, 5);
  const auto step = em_e_step(symmetric_params(400, 5, 0.05), m);
  expect_rows_sum_to_one(step.posterior);
  EXPECT_TRUE(std::isfinite(step.log_likelihood));
}

TEST(RunEm, PerfectCopiesConvergeImmediately) {
  const auto truth = sample_ground_truth(builtin_distribution(5), 100, 2);
  const std::vector<WorkerProfile> perfect(4, WorkerProfile{1.0});
  const auto m = simulate_annotations(truth, perfect, 3);
  const auto state = run_em(m);
  EXPECT_TRUE(state.converged);
  EXPECT_LE(state.iterations, 2);
  const auto mv = majority_vote(m, TiePolicy::lowest_index);
  EXPECT_EQ(state.estimate.hard_labels, mv.hard_labels);
  for (std::size_t s = 0; s < truth.size(); ++s) {
    EXPECT_NEAR(state.estimate.posterior(s, truth[s]), 1.0, 1e-12);
  }
}

TEST(RunEm, MatchesNaiveOracleOnSmallMatrix) {
  Rng rng(1234);
  const auto m = testutil::random_matrix(rng, 5, 3, 2);
  const auto state = run_em(m);
  const auto ref = oracle::naive_dawid_skene(testutil::to_rows(m), 2, kEmSmoothing, 1e-6, 100);
  EXPECT_EQ(state.iterations, ref.iterations);
  EXPECT_EQ(state.converged, ref.converged);
  for (std::size_t s = 0; s < 5; ++s) {
    for (std::size_t j = 0; j < 2; ++j) {
      EXPECT_NEAR(state.estimate.posterior(s, j), ref.posterior[s][j], 1e-8);
    }
  }
}

TEST(RunEm, MatchesNaiveOracleOnRandomSmallMatrices) {
  Rng rng(99);
  for (int trial = 0; trial < 40; ++trial) {
    const int s = 1 + int(rng.below(6)), w = 1 + int(rng.below(3)), g = 2 + int(rng.below(2));
    const auto m = testutil::random_matrix(rng, s, w, g);
    const auto state = run_em(m);
    const auto ref = oracle::naive_dawid_skene(testutil::to_rows(m), g, kEmSmoothing, 1e-6, 100);
    for (int i = 0; i < s; ++i) {
      for (int j = 0; j < g; ++j) {
        ASSERT_NEAR(state.estimate.posterior(i, j), ref.posterior[i][j], 1e-8) << "trial " << trial;
      }
    }
  }
}

TEST(RunEm, LogLikelihoodIsMonotone) {
  Rng rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    const auto m = testutil::random_matrix(rng, 10 + int(rng.below(90)), 2 + int(rng.below(9)),
                                           2 + int(rng.below(4)));
    const auto state = run_em(m);
    const auto& trace = state.log_likelihood_trace;
    ASSERT_EQ(trace.size(), static_cast<std::size_t>(state.iterations));
    for (std::size_t i = 1; i < trace.size(); ++i) EXPECT_GE(trace[i], trace[i - 1] - 1e-9);
  }
}

TEST(RunEm, EverythingStaysStochastic) {
  Rng rng(4);
  const auto m = testutil::random_matrix(rng, 60, 6, 4);
  const auto state = run_em(m);
  expect_rows_sum_to_one(state.estimate.posterior);
  for (const auto& pi : state.parameters.error_rates) {
    expect_rows_sum_to_one(pi);
    for (double v : pi.values()) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
  }
  const auto& p = state.parameters.marginals;
  EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-9);
}

TEST(RunEm, LabelPermutationEquivariance) {
  Rng rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const int g = 2 + int(rng.below(4));
    const auto m = testutil::random_matrix(rng, 40, 5, g);
    const auto perm = testutil::random_permutation(rng, g);
    const auto base = run_em(m);
    const auto moved = run_em(testutil::relabel(m, perm));
    for (std::size_t s = 0; s < m.num_items(); ++s) {
      for (int j = 0; j < g; ++j) {
        EXPECT_NEAR(moved.estimate.posterior(s, perm[j]), base.estimate.posterior(s, j), 1e-12);
      }
      if (!base.estimate.tie_flags[s]) {
        EXPECT_EQ(moved.estimate.hard_labels[s],
                  static_cast<Label>(perm[static_cast<std::size_t>(base.estimate.hard_labels[s])]));
      }
    }
  }
}

TEST(RunEm, WorkerOrderInvariance) {
  Rng rng(22);
  const auto m = testutil::random_matrix(rng, 80, 7, 3);
  const auto perm = testutil::random_permutation(rng, 7);
  const auto base = run_em(m);
  const auto moved = run_em(testutil::permute_workers(m, perm));
  for (std::size_t i = 0; i < base.estimate.posterior.values().size(); ++i) {
    EXPECT_NEAR(base.estimate.posterior.values()[i], moved.estimate.posterior.values()[i], 1e-12);
  }
}

TEST(RunEm, SingleWorkerIsReproduced) {
  Rng rng(6);
  const auto m = testutil::random_matrix(rng, 30, 1, 4);
  const auto state = run_em(m);
  for (std::size_t s = 0; s < 30; ++s) EXPECT_EQ(state.estimate.hard_labels[s], m(s, 0));
}

TEST(RunEm, NonConvergenceIsReported) {
  Rng rng(10);
  const auto m = testutil::random_matrix(rng, 200, 5, 3);
  const auto state = run_em(m, {.tolerance = 1e-15, .max_iterations = 2});
  EXPECT_FALSE(state.converged);
  EXPECT_EQ(state.iterations, 2);
  EXPECT_THROW(run_em(m, {.tolerance = 1e-6, .max_iterations = 0}), ConfigError);
}

TEST(RunEm, BeatsMajorityVoteForBinaryLowExpertise) {
  // Ten or more low-expertise workers on a binary task: EM's mean weighted F1
  // over ten repetitions exceeds MV's.
  const auto truth = sample_ground_truth(builtin_distribution(2), 2000, 1);
  double em_sum = 0.0, mv_sum = 0.0;
  for (std::uint64_t rep = 0; rep < 10; ++rep) {
    const auto workers = sample_expertise(ExpertiseBand::low(2), 10, derive_seed({rep, 1}));
    const auto m = simulate_annotations(truth, workers, derive_seed({rep, 2}));
    em_sum += weighted_f1(run_em(m).estimate, truth).weighted_f1;
    mv_sum += weighted_f1(majority_vote(m, TiePolicy::weighted_random, rep), truth).weighted_f1;
  }
  EXPECT_GT(em_sum / 10, mv_sum / 10);
}

}  // namespace
}  // namespace labelagg
