#include "synthmetric/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "synthmetric/error.hpp"

namespace synthmetric {

double mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double population_std(std::span<const double> values) {
  if (values.empty()) return 0.0;
  if (std::all_of(values.begin(), values.end(), [&](double v) { return v == values.front(); })) return 0.0;
  const double mu = mean(values);
  double s = 0.0;
  for (double v : values) s += (v - mu) * (v - mu);
  return std::sqrt(s / static_cast<double>(values.size()));
}

double pearson_corr(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(ErrorCode::LengthMismatch, "correlation inputs differ in length");
  if (x.size() < 3) throw Error(ErrorCode::LengthMismatch, "correlation needs at least 3 points");
  const double mx = mean(x);
  const double my = mean(y);
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw Error(ErrorCode::InsufficientVariation, "zero variance in correlation input");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  for (std::size_t start = 0; start < order.size();) {
    std::size_t end = start;
    while (end < order.size() && values[order[end]] == values[order[start]]) ++end;
    const double avg = 0.5 * static_cast<double>(start + 1 + end);
    for (std::size_t t = start; t < end; ++t) ranks[order[t]] = avg;
    start = end;
  }
  return ranks;
}

double spearman_corr(std::span<const double> x, std::span<const double> y) {
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  return pearson_corr(rx, ry);
}

namespace {

double sorted_median(std::span<const double> sorted) {
  const std::size_t n = sorted.size();
  if (n % 2 == 1) return sorted[n / 2];
  return 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
}

}  // namespace

FiveNumberSummary five_number_summary(std::vector<double> values) {
  if (values.empty()) throw Error(ErrorCode::NoDefinedCells, "five-number summary of nothing");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  FiveNumberSummary s;
  s.min = values.front();
  s.max = values.back();
  s.median = sorted_median(values);
  if (n == 1) {
    s.q1 = s.q3 = s.median;
    return s;
  }
  const std::size_t half = n / 2;
  s.q1 = sorted_median(std::span<const double>(values).first(half));
  s.q3 = sorted_median(std::span<const double>(values).last(half));
  return s;
}

}  // namespace synthmetric
