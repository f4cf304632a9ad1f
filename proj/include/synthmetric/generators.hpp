#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "synthmetric/dataset.hpp"
#include "synthmetric/rng.hpp"

namespace synthmetric {

enum class GeneratorKind { IndependentMarginals, GaussianCopula, Smote, NoisyCopy };

std::string_view to_string(GeneratorKind kind);
GeneratorKind generator_kind_from_string(std::string_view name);

struct GeneratorSpec {
  std::string id;
  GeneratorKind kind = GeneratorKind::IndependentMarginals;
  std::size_t k_neighbors = 5;  // Smote
  double flip_rate = 0.0;       // NoisyCopy
  std::string family;           // grouping used by the robustness statistic

  void validate() const;
};

// Class-conditional model fitted on one training split. Each class keeps only what
// its kind needs; nothing outside the training split is referenced.
class FittedGenerator {
 public:
  struct ClassModel {
    Dataset rows;                                    // training rows of this class
    std::vector<double> p_hat;                       // per-feature mean
    std::vector<double> cholesky;                    // GaussianCopula: d x d lower factor
    double jitter = 0.0;                             // GaussianCopula: diagonal jitter used
    std::vector<double> latent_thresholds;           // GaussianCopula: Phi^-1(1 - p_hat)
    std::vector<std::vector<double>> sorted_values;  // per-feature empirical marginal
    std::vector<std::size_t> neighbors;              // Smote: rows x k_neighbors
  };

  FittedGenerator(GeneratorSpec spec, FeatureSchema schema, std::array<ClassModel, 2> classes)
      : spec_(std::move(spec)), schema_(std::move(schema)), classes_(std::move(classes)) {}

  const GeneratorSpec& spec() const { return spec_; }
  const FeatureSchema& schema() const { return schema_; }
  const ClassModel& model(int cls) const { return classes_.at(static_cast<std::size_t>(cls)); }

 private:
  GeneratorSpec spec_;
  FeatureSchema schema_;
  std::array<ClassModel, 2> classes_;
};

FittedGenerator fit(const GeneratorSpec& spec, const Dataset& train);

// n_per_class rows of class 0 followed by n_per_class rows of class 1.
Dataset sample(const FittedGenerator& gen, std::size_t n_per_class, RngSeed seed);

// Standard normal CDF and quantile; quantile(0) = -inf, quantile(1) = +inf.
double normal_cdf(double z);
double normal_quantile(double p);

// Pearson correlation matrix of the columns (zero-variance pairs get 0 off the diagonal).
std::vector<double> correlation_matrix(const Dataset& data);

// Lower Cholesky factor of a symmetric d x d matrix; false if not positive definite.
bool cholesky(std::vector<double> matrix, std::size_t d, std::vector<double>& lower);

}  // namespace synthmetric
