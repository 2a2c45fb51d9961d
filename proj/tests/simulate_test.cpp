#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "labelagg/random.hpp"
#include "labelagg/simulate.hpp"

namespace labelagg {
namespace {

constexpr int kTabulated[] = {2, 3, 5, 7, 10, 15, 20};
constexpr int kSampleSizes[] = {50, 125, 250, 500, 1000, 2000};

std::vector<int> label_counts(const TruthAssignment& t) {
  std::vector<int> c(static_cast<std::size_t>(t.taxonomy().num_labels()), 0);
  for (Label l : t.labels()) ++c[static_cast<std::size_t>(l)];
  return c;
}

TEST(BuiltinDistribution, BinaryColumn) {
  const auto d = builtin_distribution(2);
  ASSERT_EQ(d.num_labels(), 2);
  EXPECT_DOUBLE_EQ(d.proportions()[0], 0.373);
  EXPECT_DOUBLE_EQ(d.proportions()[1], 0.627);
}

TEST(BuiltinDistribution, ThreeLabelColumn) {
  const auto d = builtin_distribution(3);
  ASSERT_EQ(d.num_labels(), 3);
  EXPECT_NEAR(d.proportions()[0], 0.289, 1e-12);
  EXPECT_NEAR(d.proportions()[1], 0.353, 1e-12);
  EXPECT_NEAR(d.proportions()[2], 0.358, 1e-12);
}

TEST(BuiltinDistribution, UntabulatedIsError) {
  EXPECT_THROW(builtin_distribution(4), ValidationError);
  EXPECT_THROW(builtin_distribution(13), ValidationError);
  EXPECT_FALSE(has_builtin_distribution(13));
}

TEST(BuiltinDistribution, EveryColumnSumsToOne) {
  for (int g : kTabulated) {
    const auto d = builtin_distribution(g);
    EXPECT_EQ(d.num_labels(), g);
    const double sum = std::accumulate(d.proportions().begin(), d.proportions().end(), 0.0);
    EXPECT_NEAR(sum, 1.0, 1e-9) << "G=" << g;
  }
  // The twenty-label column is published summing to 0.999 and is rescaled.
  const auto d20 = builtin_distribution(20);
  EXPECT_NEAR(d20.proportions()[0], 0.042 / 0.999, 1e-12);
  EXPECT_NEAR(d20.proportions()[19], 0.033 / 0.999, 1e-12);
}

TEST(LabelDistribution, RejectsBadProportions) {
  EXPECT_THROW(LabelDistribution({0.5, 0.6}), ValidationError);
  EXPECT_THROW(LabelDistribution({1.2, -0.2}), ValidationError);
  EXPECT_THROW(LabelDistribution({1.0}), ValidationError);
}

TEST(LabelDistribution, ParsesJson) {
  const auto d = parse_distribution_json(R"({"num_labels": 3, "proportions": [0.2, 0.3, 0.5]})");
  EXPECT_EQ(d.num_labels(), 3);
  EXPECT_DOUBLE_EQ(d.proportions()[2], 0.5);
  EXPECT_THROW(parse_distribution_json(R"({"num_labels": 2, "proportions": [0.2, 0.3, 0.5]})"),
               ValidationError);
  EXPECT_THROW(parse_distribution_json(R"({"proportions": [0.5, 0.5]})"), ParseError);
  EXPECT_THROW(parse_distribution_json("not json"), ParseError);
}

TEST(SampleGroundTruth, BinaryFiveHundredApportionsLowestIndexOnTie) {
  // 500 * (0.373, 0.627) = (186.5, 313.5): floors 186 + 313 leave one item,
  // the remainders tie at 0.5 and label 0 takes it.
  const auto truth = sample_ground_truth(builtin_distribution(2), 500, 1);
  EXPECT_EQ(truth.size(), 500u);
  EXPECT_EQ(label_counts(truth), (std::vector<int>{187, 313}));
}

TEST(SampleGroundTruth, DegenerateDistribution) {
  const auto truth = sample_ground_truth(LabelDistribution({1.0, 0.0}), 1, 99);
  ASSERT_EQ(truth.size(), 1u);
  EXPECT_EQ(truth[0], 0);
}

TEST(SampleGroundTruth, FiveLabelsThousandWithinOne) {
  const auto dist = builtin_distribution(5);
  const auto counts = label_counts(sample_ground_truth(dist, 1000, 3));
  for (std::size_t j = 0; j < counts.size(); ++j) {
    EXPECT_LT(std::abs(counts[j] - 1000.0 * dist.proportions()[j]), 1.0) << "label " << j;
  }
}

TEST(SampleGroundTruth, ApportionmentPropertyForEveryTableAndSize) {
  for (int g : kTabulated) {
    const auto dist = builtin_distribution(g);
    for (int s : kSampleSizes) {
      const auto counts = apportion_counts(dist, s);
      EXPECT_EQ(std::accumulate(counts.begin(), counts.end(), 0), s);
      for (std::size_t j = 0; j < counts.size(); ++j) {
        EXPECT_LT(std::abs(counts[j] - s * dist.proportions()[j]), 1.0)
            << "G=" << g << " S=" << s << " label " << j;
      }
    }
  }
}

TEST(SampleGroundTruth, SeedOnlyChangesOrder) {
  const auto dist = builtin_distribution(7);
  const auto a = sample_ground_truth(dist, 250, 1);
  const auto b = sample_ground_truth(dist, 250, 2);
  EXPECT_EQ(label_counts(a), label_counts(b));
  EXPECT_NE(a, b);
  EXPECT_EQ(a, sample_ground_truth(dist, 250, 1));
}

TEST(SampleExpertise, HighBandStrictlyInside) {
  const auto band = ExpertiseBand::high();
  EXPECT_DOUBLE_EQ(band.lower, 0.51);
  EXPECT_DOUBLE_EQ(band.upper, 0.99);
  const auto workers = sample_expertise(band, 10, 5);
  ASSERT_EQ(workers.size(), 10u);
  for (const auto& w : workers) {
    EXPECT_GT(w.expertise, 0.51);
    EXPECT_LT(w.expertise, 0.99);
  }
}

TEST(SampleExpertise, LowBandBinary) {
  const auto band = ExpertiseBand::low(2);
  EXPECT_DOUBLE_EQ(band.lower, 0.483);
  EXPECT_DOUBLE_EQ(band.upper, 0.8);
  for (const auto& w : sample_expertise(band, 3, 11)) {
    EXPECT_GT(w.expertise, 0.483);
    EXPECT_LT(w.expertise, 0.8);
  }
}

TEST(SampleExpertise, DeterministicGivenSeed) {
  const auto a = sample_expertise(ExpertiseBand::high(), 40, 123);
  const auto b = sample_expertise(ExpertiseBand::high(), 40, 123);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].expertise, b[i].expertise);
}

TEST(SampleExpertise, RejectsBadBand) {
  EXPECT_THROW(ExpertiseBand(0.8, 0.5, BandKind::low), ValidationError);
  EXPECT_THROW(ExpertiseBand(-0.1, 0.5, BandKind::low), ValidationError);
  EXPECT_THROW(ExpertiseBand(0.1, 1.5, BandKind::low), ValidationError);
}

TEST(CorruptAnswers, SixtyPercentKeepsSixOfTen) {
  const TruthAssignment truth(Taxonomy(3), {0, 1, 2, 0, 1, 2, 0, 1, 2, 0});
  const auto answers = corrupt_answers(truth, {0.6}, Taxonomy(3), 17);
  int differ = 0;
  for (std::size_t s = 0; s < truth.size(); ++s) differ += answers[s] != truth[s];
  EXPECT_EQ(differ, 4);
}

TEST(CorruptAnswers, PerfectWorkerChangesNothing) {
  const auto truth = sample_ground_truth(builtin_distribution(5), 250, 4);
  const auto answers = corrupt_answers(truth, {1.0}, Taxonomy(5), 8);
  EXPECT_TRUE(std::equal(answers.begin(), answers.end(), truth.labels().begin()));
}

TEST(CorruptAnswers, BinaryReplacementIsTheOtherLabel) {
  const auto truth = sample_ground_truth(builtin_distribution(2), 200, 4);
  const auto answers = corrupt_answers(truth, {0.55}, Taxonomy(2), 9);
  for (std::size_t s = 0; s < truth.size(); ++s) {
    if (answers[s] != truth[s]) EXPECT_EQ(answers[s], 1 - truth[s]);
  }
}

TEST(CorruptAnswers, CountIsRoundedExactlyAndEveryChangeIsWrong) {
  Rng rng(2024);
  const auto dist = builtin_distribution(5);
  for (int trial = 0; trial < 200; ++trial) {
    const int s = 1 + static_cast<int>(rng.below(400));
    const double lambda = rng.uniform01();
    const auto truth = sample_ground_truth(dist, s, rng.next());
    const auto answers = corrupt_answers(truth, {lambda}, Taxonomy(5), rng.next());
    std::size_t differ = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) differ += answers[i] != truth[i];
    EXPECT_EQ(differ, static_cast<std::size_t>(std::nearbyint((1.0 - lambda) * s)));
  }
}

TEST(CorruptionCount, TiesRoundToEven) {
  EXPECT_EQ(corruption_count(0.75, 2), 0u);  // 0.5 -> 0
  EXPECT_EQ(corruption_count(0.25, 2), 2u);  // 1.5 -> 2
  EXPECT_EQ(corruption_count(0.5, 5), 2u);   // 2.5 -> 2
}

TEST(CorruptAnswers, ReplacementLabelsAreUniformOverWrongLabels) {
  // One item with true label 2 under G = 5, always corrupted. Chi-square
  // goodness of fit over the four wrong labels, alpha = 0.01 (df = 3).
  const TruthAssignment truth(Taxonomy(5), {2});
  constexpr int kDraws = 20000;
  std::vector<int> counts(5, 0);
  for (int i = 0; i < kDraws; ++i) {
    const auto a = corrupt_answers(truth, {0.0}, Taxonomy(5), derive_seed({77, std::uint64_t(i)}));
    ++counts[static_cast<std::size_t>(a[0])];
  }
  EXPECT_EQ(counts[2], 0);
  const double expected = kDraws / 4.0;
  double chi2 = 0.0;
  for (int j : {0, 1, 3, 4}) chi2 += (counts[j] - expected) * (counts[j] - expected) / expected;
  EXPECT_LT(chi2, 11.345);
}

TEST(LowerBound, TabulatedValues) {
  EXPECT_DOUBLE_EQ(lower_bound_for(2), 0.483);
  EXPECT_DOUBLE_EQ(lower_bound_for(3), 0.327);
  EXPECT_DOUBLE_EQ(lower_bound_for(5), 0.189);
  EXPECT_DOUBLE_EQ(lower_bound_for(7), 0.139);
  EXPECT_DOUBLE_EQ(lower_bound_for(10), 0.094);
  EXPECT_DOUBLE_EQ(lower_bound_for(15), 0.063);
  EXPECT_DOUBLE_EQ(lower_bound_for(20), 0.049);
}

TEST(LowerBound, ThirteenInterpolatesBetweenNeighbours) {
  const double lb = lower_bound_for(13);
  EXPECT_GT(lb, 0.063);
  EXPECT_LT(lb, 0.094);
  // Linear in 1/G between G=15 and G=10.
  const double t = (1.0 / 13 - 1.0 / 15) / (1.0 / 10 - 1.0 / 15);
  EXPECT_NEAR(lb, 0.063 + t * (0.094 - 0.063), 1e-15);
}

TEST(LowerBound, ClampsBeyondTable) {
  EXPECT_DOUBLE_EQ(lower_bound_for(40), 0.049);
  EXPECT_THROW(lower_bound_for(1), ValidationError);
  const double lb4 = lower_bound_for(4);
  EXPECT_GT(lb4, 0.189);
  EXPECT_LT(lb4, 0.327);
}

TEST(SimulateAnnotations, OneColumnPerWorker) {
  const auto truth = sample_ground_truth(builtin_distribution(3), 125, 1);
  const auto workers = sample_expertise(ExpertiseBand::low(3), 8, 2);
  const auto m = simulate_annotations(truth, workers, 3);
  EXPECT_EQ(m.num_items(), 125u);
  EXPECT_EQ(m.num_workers(), 8u);
  for (std::size_t w = 0; w < workers.size(); ++w) {
    std::size_t differ = 0;
    for (std::size_t s = 0; s < truth.size(); ++s) differ += m(s, w) != truth[s];
    EXPECT_EQ(differ, corruption_count(workers[w].expertise, truth.size()));
  }
}

}  // namespace
}  // namespace labelagg
