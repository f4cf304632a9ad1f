#pragma once

#include <cstddef>
#include <span>
#include <vector>

// Hot loops of the metric and classifier code. Each kernel has a plain serial
// reference (kept for tests and benchmarks) and an OpenMP version used by the library.
// The OpenMP versions reduce over fixed-size row chunks in a fixed order, so their
// results do not depend on the number of threads.

namespace synthmetric::kernels {

struct MatrixView {
  std::span<const double> data;
  std::size_t rows = 0;
  std::size_t cols = 0;

  std::span<const double> row(std::size_t i) const { return data.subspan(i * cols, cols); }
};

template <typename Table>
MatrixView view_of(const Table& table) {
  return MatrixView{std::span<const double>(table.values()), table.rows(), table.cols()};
}

inline constexpr std::size_t kChunkRows = 64;

double squared_distance(std::span<const double> a, std::span<const double> b);
double l1_distance(std::span<const double> a, std::span<const double> b);

namespace serial {

// sum_i sum_j exp(-|a_i - b_j|^2 * inv_two_sigma2)
double rbf_kernel_sum(MatrixView a, MatrixView b, double inv_two_sigma2);

// Squared distances for all pairs i < j, in (i, j) lexicographic order.
std::vector<double> pairwise_squared_distances(MatrixView m);

// For every query row, the k nearest reference rows by L1 distance (Hamming on binary
// data), ties broken by lower reference index. When exclude_self is set, query row q
// never matches reference row q. Result is row-major, queries x k.
std::vector<std::size_t> nearest_neighbors(MatrixView reference, MatrixView queries, std::size_t k, bool exclude_self);

// Gradient of mean log-loss plus 0.5*l2*|w|^2 for logistic regression.
// grad has cols + 1 entries; the last is the bias derivative.
void logistic_gradient(MatrixView x, std::span<const double> targets, std::span<const double> weights, double bias,
                       double l2, std::span<double> grad);

}  // namespace serial

namespace omp {

// threads == 0 uses the OpenMP runtime default.
double rbf_kernel_sum(MatrixView a, MatrixView b, double inv_two_sigma2, int threads = 0);
std::vector<double> pairwise_squared_distances(MatrixView m, int threads = 0);
std::vector<std::size_t> nearest_neighbors(MatrixView reference, MatrixView queries, std::size_t k, bool exclude_self,
                                           int threads = 0);
void logistic_gradient(MatrixView x, std::span<const double> targets, std::span<const double> weights, double bias,
                       double l2, std::span<double> grad, int threads = 0);

}  // namespace omp

}  // namespace synthmetric::kernels
