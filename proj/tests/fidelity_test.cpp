#include "synthmetric/fidelity.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "synthmetric/builtin.hpp"
#include "synthmetric/generators.hpp"

using namespace synthmetric;

namespace {

oracle::Table binary_table(std::vector<std::vector<double>> rows) {
  oracle::Table t;
  t.binary.assign(rows.front().size(), true);
  for (std::size_t i = 0; i < rows.size(); ++i) t.y.push_back(static_cast<int>(i % 2));
  t.x = std::move(rows);
  return t;
}

Dataset ds(std::vector<std::vector<double>> rows) { return oracle::to_dataset(binary_table(std::move(rows))); }

Dataset constant_rows(std::size_t n, std::size_t d, std::size_t first_one, std::size_t last_one) {
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> r(d, 0.0);
    for (std::size_t j = first_one; j < last_one; ++j) r[j] = 1.0;
    rows.push_back(r);
  }
  return ds(rows);
}

template <typename Fn>
ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no exception";
  return ErrorCode::Io;
}

}  // namespace

TEST(Fidelity, HellingerHandExamples) {
  EXPECT_NEAR(hellinger_marginal_score(ds({{1}, {1}}), ds({{0}, {0}})), 0.0, 1e-15);
  EXPECT_NEAR(hellinger_marginal_score(ds({{1}, {1}}), ds({{1}, {0}})), 1.0 - std::sqrt(1.0 - std::sqrt(0.5)), 1e-12);
  EXPECT_NEAR(hellinger_marginal_score(ds({{1}, {1}}), ds({{1}, {0}})), 0.4588, 1e-4);
}

TEST(Fidelity, HellingerOracleAgreesWithBhattacharyyaForm) {
  // The oracle uses the root-sum-of-squares form; check it against sqrt(1 - BC) away from identity.
  const auto r = binary_table({{1}, {1}, {0}, {1}});
  const auto s = binary_table({{0}, {1}, {0}, {0}});
  const double p = 0.75, q = 0.25;
  const double h = std::sqrt(1.0 - (std::sqrt(p * q) + std::sqrt((1 - p) * (1 - q))));
  EXPECT_NEAR(oracle::hellinger_score(r, s), 1.0 - h, 1e-12);
}

TEST(Fidelity, EuclideanMeanHandExamples) {
  EXPECT_NEAR(euclidean_mean_score(ds({{0, 0}, {0, 0}}), ds({{1, 1}, {1, 1}})), 0.0, 1e-15);
  EXPECT_NEAR(euclidean_mean_score(ds({{0, 0}, {1, 1}}), ds({{1, 0}, {1, 1}})), 1.0 - 0.5 / std::sqrt(2.0), 1e-12);
}

TEST(Fidelity, PearsonHandExamples) {
  EXPECT_NEAR(pearson_assoc_score(ds({{0, 0}, {1, 1}, {0, 0}, {1, 1}}), ds({{0, 1}, {1, 0}, {0, 1}, {1, 0}})), 0.0,
              1e-12);
  EXPECT_NEAR(pearson_assoc_score(ds({{0, 0}, {1, 1}, {0, 0}, {1, 1}}), ds({{0, 0}, {0, 1}, {1, 0}, {1, 1}})), 0.5,
              1e-12);
  EXPECT_EQ(code_of([] { pearson_assoc_score(ds({{0}, {1}}), ds({{0}, {1}})); }), ErrorCode::TooFewFeatures);
}

TEST(Fidelity, CramersVHandExamples) {
  const Dataset equal_bits = ds({{0, 0}, {1, 1}, {0, 0}, {1, 1}});
  EXPECT_NEAR(cramers_v_score(equal_bits, ds({{0, 0}, {0, 1}, {1, 0}, {1, 1}})), 0.0, 1e-12);
  const Dataset phi_half = ds({{1, 1}, {1, 1}, {1, 1}, {0, 0}, {0, 0}, {0, 0}, {1, 0}, {0, 1}});
  EXPECT_NEAR(cramers_v_score(equal_bits, phi_half), 0.5, 1e-12);
}

TEST(Fidelity, CramersVRejectsContinuous) {
  oracle::Table t = binary_table({{0, 0.5}, {1, 0.25}});
  t.binary[1] = false;
  const Dataset d = oracle::to_dataset(t);
  EXPECT_EQ(code_of([&] { cramers_v_score(d, d); }), ErrorCode::NonBinaryFeature);
}

TEST(Fidelity, MeanSimilarityHandExamples) {
  EXPECT_NEAR(mean_similarity_score(ds({{0, 0}, {0, 0}}), ds({{1, 1}, {1, 1}})), 0.0, 1e-15);
  const Dataset r = ds({{1, 1}, {0, 1}, {0, 0}, {0, 0}, {0, 0}});
  const Dataset s = ds({{1, 1}, {1, 1}, {0, 0}, {0, 0}, {0, 0}});
  EXPECT_NEAR(mean_similarity_score(r, s), 0.9, 1e-12);
}

TEST(Fidelity, JsdHandExamples) {
  EXPECT_NEAR(jsd_marginal_score(ds({{1}, {1}}), ds({{0}, {0}})), 0.0, 1e-15);
  const double score = jsd_marginal_score(ds({{1}, {1}}), ds({{1}, {0}}));
  EXPECT_NEAR(score, oracle::jsd_score(binary_table({{1}, {1}}), binary_table({{1}, {0}})), 1e-12);
  EXPECT_NEAR(score, 0.6887, 1e-4);
}

TEST(Fidelity, MmdDistantConstantClouds) {
  const Dataset a = constant_rows(20, 30, 0, 0);
  const Dataset b = constant_rows(20, 30, 0, 30);
  EXPECT_EQ(mmd_terms(a, b).sigma2, 1.0);
  EXPECT_NEAR(mmd_score(a, b), 0.0, 1e-3);
}

TEST(Fidelity, PmseSeparableNearZero) {
  const Dataset real = constant_rows(100, 30, 0, 15);
  const Dataset syn = constant_rows(100, 30, 15, 30);
  EXPECT_NEAR(pmse_score(real, syn, RngSeed{1}), 0.0, 0.05);
}

TEST(Fidelity, PmseNeedsRows) {
  const Dataset small = constant_rows(10, 3, 0, 1);
  EXPECT_EQ(code_of([&] { pmse_score(small, small, RngSeed{1}); }), ErrorCode::TooFewRows);
}

TEST(Fidelity, IdentityScores) {
  BuiltinSpec b;
  const Dataset real = make_builtin_dataset(b);
  const FidelityVector v = evaluate_all(real, real, RngSeed{1});
  for (MetricId id : {MetricId::HellingerMarginal, MetricId::EuclideanMean, MetricId::PearsonAssoc,
                      MetricId::CramersVAssoc, MetricId::MeanSimilarity, MetricId::JsdMarginal, MetricId::Mmd})
    EXPECT_EQ(v[id], 1.0) << to_string(id);
  EXPECT_GE(v[MetricId::Pmse], 0.95);
}

TEST(Fidelity, SchemaMismatch) {
  const Dataset a = ds({{0, 1}, {1, 0}});
  const Dataset b = ds({{0}, {1}});
  EXPECT_EQ(code_of([&] { hellinger_marginal_score(a, b); }), ErrorCode::SchemaMismatch);
  EXPECT_EQ(code_of([&] { evaluate_all(a, b, RngSeed{1}); }), ErrorCode::SchemaMismatch);
}

TEST(Fidelity, EvaluateAllInRangeAndDeterministic) {
  BuiltinSpec b;
  b.n = 300;
  b.d = 12;
  const Dataset real = make_builtin_dataset(b);
  GeneratorSpec g{"ind", GeneratorKind::IndependentMarginals, 5, 0.0, "statistical"};
  const Dataset syn = sample(fit(g, real), 150, RngSeed{2});
  const FidelityVector v = evaluate_all(real, syn, RngSeed{3});
  EXPECT_NO_THROW(v.validate());
  EXPECT_EQ(v, evaluate_all(real, syn, RngSeed{3}));
  EXPECT_LT(v[MetricId::PearsonAssoc], 1.0);
}

TEST(Fidelity, MetricNamesAndDimensions) {
  for (MetricId id : kAllMetrics) EXPECT_EQ(metric_from_string(to_string(id)), id);
  EXPECT_EQ(dimension_of(MetricId::HellingerMarginal), Dimension::Distance);
  EXPECT_EQ(dimension_of(MetricId::CramersVAssoc), Dimension::CorrelationAssociation);
  EXPECT_EQ(dimension_of(MetricId::JsdMarginal), Dimension::FeatureSimilarity);
  EXPECT_EQ(dimension_of(MetricId::Mmd), Dimension::MultivariateDistribution);
}

class OracleSeeds : public ::testing::TestWithParam<int> {};

TEST_P(OracleSeeds, MetricsMatchBruteForce) {
  std::mt19937_64 rng(static_cast<std::uint64_t>(GetParam()));
  std::uniform_int_distribution<std::size_t> nd(2, 10), nn(2, 50);
  const std::size_t d = nd(rng);
  const bool all_binary = GetParam() % 2 == 0;
  std::vector<bool> binary(d, true);
  if (!all_binary)
    for (std::size_t j = 0; j < d; j += 2) binary[j] = false;
  const auto r = oracle::random_table(rng, nn(rng), d, binary);
  const auto s = oracle::random_table(rng, nn(rng), d, binary);
  const Dataset dr = oracle::to_dataset(r);
  const Dataset dsy = oracle::to_dataset(s);
  EXPECT_NEAR(hellinger_marginal_score(dr, dsy), oracle::hellinger_score(r, s), 1e-9);
  EXPECT_NEAR(jsd_marginal_score(dr, dsy), oracle::jsd_score(r, s), 1e-9);
  EXPECT_NEAR(pearson_assoc_score(dr, dsy), oracle::pearson_score(r, s), 1e-9);
  EXPECT_NEAR(euclidean_mean_score(dr, dsy), oracle::euclidean_score(r, s), 1e-9);
  EXPECT_NEAR(mean_similarity_score(dr, dsy), oracle::mean_similarity_score(r, s), 1e-9);
  EXPECT_NEAR(mmd_score(dr, dsy), oracle::mmd_score(r, s), 1e-9);
  if (all_binary) EXPECT_NEAR(cramers_v_score(dr, dsy), oracle::cramers_score(r, s), 1e-9);
}

INSTANTIATE_TEST_SUITE_P(Random, OracleSeeds, ::testing::Range(0, 20));
