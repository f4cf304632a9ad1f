#pragma once

#include <span>
#include <vector>

namespace synthmetric {

// Pearson product-moment correlation. Throws LengthMismatch for unequal or < 3 long
// inputs and InsufficientVariation when either side has zero variance.
double pearson_corr(std::span<const double> x, std::span<const double> y);

// Spearman rank correlation (Pearson on average ranks).
double spearman_corr(std::span<const double> x, std::span<const double> y);

std::vector<double> average_ranks(std::span<const double> values);

double mean(std::span<const double> values);
double population_std(std::span<const double> values);

struct FiveNumberSummary {
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
};

// Quartiles by the exclusive median-of-halves rule: Q1/Q3 are the medians of the values
// strictly below/above the middle position. A single value yields five equal numbers.
FiveNumberSummary five_number_summary(std::vector<double> values);

}  // namespace synthmetric
