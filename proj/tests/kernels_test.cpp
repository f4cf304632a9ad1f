#include "synthmetric/kernels.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

namespace k = synthmetric::kernels;

namespace {

struct Matrix {
  std::vector<double> values;
  std::size_t rows = 0;
  std::size_t cols = 0;

  k::MatrixView view() const { return {values, rows, cols}; }
};

Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed, bool binary) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Matrix m{std::vector<double>(rows * cols), rows, cols};
  for (double& v : m.values) v = binary ? (u(rng) < 0.3 ? 1.0 : 0.0) : u(rng);
  return m;
}

}  // namespace

class KernelSizes : public ::testing::TestWithParam<std::size_t> {};

TEST_P(KernelSizes, RbfSerialMatchesOmp) {
  const Matrix a = random_matrix(GetParam(), 7, 1, false);
  const Matrix b = random_matrix(GetParam() + 3, 7, 2, false);
  const double s = k::serial::rbf_kernel_sum(a.view(), b.view(), 0.7);
  const double p = k::omp::rbf_kernel_sum(a.view(), b.view(), 0.7);
  EXPECT_NEAR(s, p, 1e-12 * std::max(1.0, std::fabs(s)));
}

TEST_P(KernelSizes, PairwiseSerialMatchesOmp) {
  const Matrix a = random_matrix(GetParam(), 5, 3, false);
  EXPECT_EQ(k::serial::pairwise_squared_distances(a.view()), k::omp::pairwise_squared_distances(a.view()));
}

TEST_P(KernelSizes, NeighborsSerialMatchesOmp) {
  const Matrix ref = random_matrix(GetParam() + 6, 9, 4, true);
  const Matrix q = random_matrix(GetParam(), 9, 5, true);
  EXPECT_EQ(k::serial::nearest_neighbors(ref.view(), q.view(), 5, false),
            k::omp::nearest_neighbors(ref.view(), q.view(), 5, false));
  EXPECT_EQ(k::serial::nearest_neighbors(ref.view(), ref.view(), 5, true),
            k::omp::nearest_neighbors(ref.view(), ref.view(), 5, true));
}

TEST_P(KernelSizes, LogisticGradientSerialMatchesOmp) {
  const Matrix x = random_matrix(GetParam(), 6, 6, true);
  std::vector<double> targets(x.rows);
  for (std::size_t i = 0; i < x.rows; ++i) targets[i] = static_cast<double>(i % 3 == 0);
  const std::vector<double> w{0.1, -0.2, 0.3, 0.0, 0.5, -0.4};
  std::vector<double> gs(7), gp(7);
  k::serial::logistic_gradient(x.view(), targets, w, 0.05, 1e-3, gs);
  k::omp::logistic_gradient(x.view(), targets, w, 0.05, 1e-3, gp);
  for (std::size_t j = 0; j < 7; ++j) EXPECT_NEAR(gs[j], gp[j], 1e-12);
}

TEST_P(KernelSizes, OmpResultsIndependentOfThreadCount) {
  const Matrix a = random_matrix(GetParam(), 8, 7, true);
  const Matrix b = random_matrix(GetParam() + 1, 8, 8, true);
  const double r1 = k::omp::rbf_kernel_sum(a.view(), b.view(), 0.3, 1);
  const double r4 = k::omp::rbf_kernel_sum(a.view(), b.view(), 0.3, 4);
  EXPECT_EQ(r1, r4);
  EXPECT_EQ(k::omp::pairwise_squared_distances(a.view(), 1), k::omp::pairwise_squared_distances(a.view(), 4));
  EXPECT_EQ(k::omp::nearest_neighbors(a.view(), b.view(), 3, false, 1),
            k::omp::nearest_neighbors(a.view(), b.view(), 3, false, 4));
  std::vector<double> targets(a.rows, 1.0);
  for (std::size_t i = 0; i < a.rows; i += 2) targets[i] = 0.0;
  const std::vector<double> w(8, 0.05);
  std::vector<double> g1(9), g4(9);
  k::omp::logistic_gradient(a.view(), targets, w, 0.0, 1e-3, g1, 1);
  k::omp::logistic_gradient(a.view(), targets, w, 0.0, 1e-3, g4, 4);
  EXPECT_EQ(g1, g4);
}

INSTANTIATE_TEST_SUITE_P(Sizes, KernelSizes, ::testing::Values(1u, 6u, 63u, 64u, 65u, 200u));

TEST(Kernels, NeighborTiesGoToLowerIndex) {
  // Rows 1, 2 and 3 are all at distance 1 from row 0.
  const std::vector<double> v{0, 0, 1, 0, 0, 1, 1, 0, 1, 1};
  const k::MatrixView m{v, 5, 2};
  const auto nn = k::serial::nearest_neighbors(m, m, 2, true);
  EXPECT_EQ(nn[0], 1u);
  EXPECT_EQ(nn[1], 2u);
  EXPECT_EQ(k::omp::nearest_neighbors(m, m, 2, true), nn);
}

TEST(Kernels, SelfExcludedEvenWhenDuplicated) {
  const std::vector<double> v{1, 1, 1, 1, 1, 1};
  const k::MatrixView m{v, 3, 2};
  const auto nn = k::omp::nearest_neighbors(m, m, 2, true);
  EXPECT_EQ(nn, (std::vector<std::size_t>{1, 2, 0, 2, 0, 1}));
}

TEST(Kernels, RbfOfIdenticalSingleRowIsOne) {
  const std::vector<double> v{0.2, 0.9};
  const k::MatrixView m{v, 1, 2};
  EXPECT_EQ(k::serial::rbf_kernel_sum(m, m, 5.0), 1.0);
  EXPECT_EQ(k::omp::rbf_kernel_sum(m, m, 5.0), 1.0);
}
