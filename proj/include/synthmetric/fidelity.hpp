#pragma once

#include <array>
#include <cstddef>
#include <string_view>

#include "synthmetric/dataset.hpp"
#include "synthmetric/rng.hpp"

namespace synthmetric {

// The eight fidelity metrics, two per dimension, in canonical order.
enum class MetricId : std::size_t {
  HellingerMarginal = 0,
  EuclideanMean,
  PearsonAssoc,
  CramersVAssoc,
  MeanSimilarity,
  JsdMarginal,
  Pmse,
  Mmd,
};

enum class Dimension { Distance, CorrelationAssociation, FeatureSimilarity, MultivariateDistribution };

inline constexpr std::size_t kMetricCount = 8;

inline constexpr std::array<MetricId, kMetricCount> kAllMetrics = {
    MetricId::HellingerMarginal, MetricId::EuclideanMean, MetricId::PearsonAssoc, MetricId::CramersVAssoc,
    MetricId::MeanSimilarity,    MetricId::JsdMarginal,   MetricId::Pmse,         MetricId::Mmd,
};

std::string_view to_string(MetricId id);
std::string_view to_string(Dimension dim);
Dimension dimension_of(MetricId id);
MetricId metric_from_string(std::string_view name);

// One score in [0, 1] per metric; 1 means indistinguishable by that criterion.
struct FidelityVector {
  std::array<double, kMetricCount> scores{};

  double operator[](MetricId id) const { return scores[static_cast<std::size_t>(id)]; }
  double& operator[](MetricId id) { return scores[static_cast<std::size_t>(id)]; }

  // Throws InvalidArgument if a score is outside [0, 1] or NaN.
  void validate() const;

  friend bool operator==(const FidelityVector&, const FidelityVector&) = default;
};

inline constexpr std::size_t kHistogramBins = 10;

double hellinger_marginal_score(const Dataset& real, const Dataset& syn);
double euclidean_mean_score(const Dataset& real, const Dataset& syn);
double pearson_assoc_score(const Dataset& real, const Dataset& syn);
double cramers_v_score(const Dataset& real, const Dataset& syn);
double mean_similarity_score(const Dataset& real, const Dataset& syn);
double jsd_marginal_score(const Dataset& real, const Dataset& syn);
double pmse_score(const Dataset& real, const Dataset& syn, RngSeed seed);
double mmd_score(const Dataset& real, const Dataset& syn);

FidelityVector evaluate_all(const Dataset& real, const Dataset& syn, RngSeed seed);

// Exposed for tests and diagnostics.
struct MmdTerms {
  double sigma2 = 1.0;
  double mmd2 = 0.0;
};
MmdTerms mmd_terms(const Dataset& real, const Dataset& syn);

}  // namespace synthmetric
