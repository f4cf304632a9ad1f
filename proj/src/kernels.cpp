#include "synthmetric/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

namespace synthmetric::kernels {

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double diff = a[j] - b[j];
    s += diff * diff;
  }
  return s;
}

double l1_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += std::fabs(a[j] - b[j]);
  return s;
}

namespace {

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

std::size_t chunk_count(std::size_t rows) { return (rows + kChunkRows - 1) / kChunkRows; }

int resolve_threads(int threads) { return threads > 0 ? threads : omp_get_max_threads(); }

void neighbors_of(MatrixView reference, std::span<const double> query, std::size_t self, std::size_t k,
                  std::vector<std::pair<double, std::size_t>>& scratch, std::size_t* out) {
  scratch.clear();
  for (std::size_t r = 0; r < reference.rows; ++r) {
    if (r == self) continue;
    scratch.emplace_back(l1_distance(reference.row(r), query), r);
  }
  const std::size_t take = std::min(k, scratch.size());
  std::partial_sort(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(take), scratch.end());
  for (std::size_t i = 0; i < take; ++i) out[i] = scratch[i].second;
}

}  // namespace

namespace serial {

double rbf_kernel_sum(MatrixView a, MatrixView b, double inv_two_sigma2) {
  double total = 0.0;
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < b.rows; ++j) total += std::exp(-squared_distance(a.row(i), b.row(j)) * inv_two_sigma2);
  return total;
}

std::vector<double> pairwise_squared_distances(MatrixView m) {
  std::vector<double> out;
  out.reserve(m.rows * (m.rows - (m.rows > 0 ? 1 : 0)) / 2);
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = i + 1; j < m.rows; ++j) out.push_back(squared_distance(m.row(i), m.row(j)));
  return out;
}

std::vector<std::size_t> nearest_neighbors(MatrixView reference, MatrixView queries, std::size_t k, bool exclude_self) {
  std::vector<std::size_t> out(queries.rows * k, 0);
  for (std::size_t q = 0; q < queries.rows; ++q) {
    std::vector<std::pair<double, std::size_t>> all;
    for (std::size_t r = 0; r < reference.rows; ++r) {
      if (exclude_self && r == q) continue;
      all.emplace_back(l1_distance(reference.row(r), queries.row(q)), r);
    }
    std::stable_sort(all.begin(), all.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    for (std::size_t i = 0; i < std::min(k, all.size()); ++i) out[q * k + i] = all[i].second;
  }
  return out;
}

void logistic_gradient(MatrixView x, std::span<const double> targets, std::span<const double> weights, double bias,
                       double l2, std::span<double> grad) {
  const std::size_t d = x.cols;
  std::fill(grad.begin(), grad.end(), 0.0);
  for (std::size_t i = 0; i < x.rows; ++i) {
    auto r = x.row(i);
    const double z = std::inner_product(r.begin(), r.end(), weights.begin(), bias);
    const double err = sigmoid(z) - targets[i];
    for (std::size_t j = 0; j < d; ++j) grad[j] += err * r[j];
    grad[d] += err;
  }
  const double inv_n = x.rows > 0 ? 1.0 / static_cast<double>(x.rows) : 0.0;
  for (std::size_t j = 0; j < d; ++j) grad[j] = grad[j] * inv_n + l2 * weights[j];
  grad[d] *= inv_n;
}

}  // namespace serial

namespace omp {

double rbf_kernel_sum(MatrixView a, MatrixView b, double inv_two_sigma2, int threads) {
  std::vector<double> row_sums(a.rows, 0.0);
  const auto rows = static_cast<std::ptrdiff_t>(a.rows);
#pragma omp parallel for schedule(static) num_threads(resolve_threads(threads))
  for (std::ptrdiff_t i = 0; i < rows; ++i) {
    double s = 0.0;
    auto ai = a.row(static_cast<std::size_t>(i));
    for (std::size_t j = 0; j < b.rows; ++j) s += std::exp(-squared_distance(ai, b.row(j)) * inv_two_sigma2);
    row_sums[static_cast<std::size_t>(i)] = s;
  }
  return std::accumulate(row_sums.begin(), row_sums.end(), 0.0);
}

std::vector<double> pairwise_squared_distances(MatrixView m, int threads) {
  const std::size_t n = m.rows;
  std::vector<double> out(n > 1 ? n * (n - 1) / 2 : 0);
  const auto rows = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 16) num_threads(resolve_threads(threads))
  for (std::ptrdiff_t si = 0; si < rows; ++si) {
    const auto i = static_cast<std::size_t>(si);
    // offset of pair (i, i+1) in the flattened upper triangle
    std::size_t pos = i * n - i * (i + 1) / 2;
    for (std::size_t j = i + 1; j < n; ++j) out[pos++] = squared_distance(m.row(i), m.row(j));
  }
  return out;
}

std::vector<std::size_t> nearest_neighbors(MatrixView reference, MatrixView queries, std::size_t k, bool exclude_self,
                                           int threads) {
  std::vector<std::size_t> out(queries.rows * k, 0);
  const auto rows = static_cast<std::ptrdiff_t>(queries.rows);
#pragma omp parallel num_threads(resolve_threads(threads))
  {
    std::vector<std::pair<double, std::size_t>> scratch;
    scratch.reserve(reference.rows);
#pragma omp for schedule(static)
    for (std::ptrdiff_t sq = 0; sq < rows; ++sq) {
      const auto q = static_cast<std::size_t>(sq);
      const std::size_t self = exclude_self ? q : reference.rows;
      neighbors_of(reference, queries.row(q), self, k, scratch, out.data() + q * k);
    }
  }
  return out;
}

void logistic_gradient(MatrixView x, std::span<const double> targets, std::span<const double> weights, double bias,
                       double l2, std::span<double> grad, int threads) {
  const std::size_t d = x.cols;
  const std::size_t chunks = chunk_count(x.rows);
  std::vector<double> partial(chunks * (d + 1), 0.0);
  const auto n_chunks = static_cast<std::ptrdiff_t>(chunks);
#pragma omp parallel for schedule(static) num_threads(resolve_threads(threads))
  for (std::ptrdiff_t sc = 0; sc < n_chunks; ++sc) {
    const auto c = static_cast<std::size_t>(sc);
    double* acc = partial.data() + c * (d + 1);
    const std::size_t end = std::min(x.rows, (c + 1) * kChunkRows);
    for (std::size_t i = c * kChunkRows; i < end; ++i) {
      auto r = x.row(i);
      const double z = std::inner_product(r.begin(), r.end(), weights.begin(), bias);
      const double err = sigmoid(z) - targets[i];
      for (std::size_t j = 0; j < d; ++j) acc[j] += err * r[j];
      acc[d] += err;
    }
  }
  std::fill(grad.begin(), grad.end(), 0.0);
  for (std::size_t c = 0; c < chunks; ++c)
    for (std::size_t j = 0; j <= d; ++j) grad[j] += partial[c * (d + 1) + j];
  const double inv_n = x.rows > 0 ? 1.0 / static_cast<double>(x.rows) : 0.0;
  for (std::size_t j = 0; j < d; ++j) grad[j] = grad[j] * inv_n + l2 * weights[j];
  grad[d] *= inv_n;
}

}  // namespace omp

}  // namespace synthmetric::kernels
