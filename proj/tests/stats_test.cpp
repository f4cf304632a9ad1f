#include "synthmetric/stats.hpp"

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"

using namespace synthmetric;

TEST(Stats, PearsonExamples) {
  const std::vector<double> x{1, 2, 3};
  EXPECT_DOUBLE_EQ(pearson_corr(x, x), 1.0);
  EXPECT_DOUBLE_EQ(pearson_corr(x, std::vector<double>{-1, -2, -3}), -1.0);
  EXPECT_NEAR(pearson_corr(x, std::vector<double>{1, 2, 4}), 0.9819, 1e-4);
}

TEST(Stats, PearsonMatchesOracle) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> len(3, 100);
  std::normal_distribution<double> z(0.0, 1.0);
  for (int rep = 0; rep < 100; ++rep) {
    const auto n = static_cast<std::size_t>(len(rng));
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = z(rng);
      y[i] = 0.3 * x[i] + z(rng);
    }
    EXPECT_NEAR(pearson_corr(x, y), oracle::pearson(x, y), 1e-12);
  }
}

TEST(Stats, PearsonErrors) {
  const std::vector<double> a{1, 2};
  try {
    pearson_corr(a, a);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::LengthMismatch);
  }
  try {
    pearson_corr(std::vector<double>{1, 1, 1}, std::vector<double>{1, 2, 3});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InsufficientVariation);
  }
}

TEST(Stats, SpearmanUsesAverageRanks) {
  EXPECT_EQ(average_ranks(std::vector<double>{10, 20, 20, 5}), (std::vector<double>{2, 3.5, 3.5, 1}));
  EXPECT_DOUBLE_EQ(spearman_corr(std::vector<double>{1, 2, 3, 4}, std::vector<double>{1, 4, 9, 16}), 1.0);
}

TEST(Stats, MeanAndPopulationStd) {
  EXPECT_DOUBLE_EQ(mean(std::vector<double>{1, 2, 3}), 2.0);
  EXPECT_DOUBLE_EQ(population_std(std::vector<double>{1, -1}), 1.0);
  EXPECT_DOUBLE_EQ(population_std(std::vector<double>{0.3, 0.3, 0.3}), 0.0);
}

TEST(Stats, FiveNumberSummary) {
  auto s = five_number_summary({0.4, 0.1, 0.3, 0.2});
  EXPECT_DOUBLE_EQ(s.min, 0.1);
  EXPECT_DOUBLE_EQ(s.q1, 0.15);
  EXPECT_DOUBLE_EQ(s.median, 0.25);
  EXPECT_DOUBLE_EQ(s.q3, 0.35);
  EXPECT_DOUBLE_EQ(s.max, 0.4);
  s = five_number_summary({1, 2, 3, 4, 5});
  EXPECT_DOUBLE_EQ(s.q1, 1.5);
  EXPECT_DOUBLE_EQ(s.median, 3.0);
  EXPECT_DOUBLE_EQ(s.q3, 4.5);
  s = five_number_summary({0.7});
  EXPECT_EQ(s.min, 0.7);
  EXPECT_EQ(s.q1, 0.7);
  EXPECT_EQ(s.median, 0.7);
  EXPECT_EQ(s.q3, 0.7);
  EXPECT_EQ(s.max, 0.7);
}

TEST(Stats, FiveNumberSummaryOrdered) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  for (std::size_t n = 1; n < 40; ++n) {
    std::vector<double> v(n);
    for (double& x : v) x = u(rng);
    const auto s = five_number_summary(v);
    EXPECT_LE(s.min, s.q1);
    EXPECT_LE(s.q1, s.median);
    EXPECT_LE(s.median, s.q3);
    EXPECT_LE(s.q3, s.max);
  }
}
