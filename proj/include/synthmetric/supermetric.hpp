#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "synthmetric/fidelity.hpp"
#include "synthmetric/rng.hpp"

namespace synthmetric {

struct WeightVector {
  std::array<double, kMetricCount> w{};

  static WeightVector uniform();
  static WeightVector unit(MetricId id);

  double operator[](MetricId id) const { return w[static_cast<std::size_t>(id)]; }

  // Throws InvalidWeights unless every weight is >= 0 and they sum to 1 within 1e-9.
  void validate() const;

  friend bool operator==(const WeightVector&, const WeightVector&) = default;
};

// One (dataset, generator, fold) observation.
struct RunRecord {
  std::string generator_id;
  std::string dataset_id;
  std::size_t fold = 0;
  FidelityVector fidelity;
  double recall = 0.0;  // mean TSTR recall over classifiers
  double f1 = 0.0;      // mean TSTR F1 over classifiers
  bool external = false;
};

struct FitConfig {
  double lambda_gap = 0.5;
  std::size_t n_random = 2000;
  std::size_t refine_passes = 5;
  double refine_step = 0.02;
  RngSeed seed{0};

  void validate() const;
};

struct FitResult {
  WeightVector weights;
  double objective = 0.0;
  double corr_recall = 0.0;
  double corr_f1 = 0.0;
};

double score(const WeightVector& weights, const FidelityVector& fidelity);

struct ObjectiveTerms {
  double objective = 0.0;
  double corr_recall = 0.0;
  double corr_f1 = 0.0;
};

// J = (rho_recall + rho_f1) / 2 - lambda * |rho_recall - rho_f1|, where the rhos are Pearson
// correlations of the per-run super-metric with mean TSTR recall and F1.
ObjectiveTerms objective_terms(const WeightVector& weights, std::span<const RunRecord> runs, double lambda_gap);
double objective_j(const WeightVector& weights, std::span<const RunRecord> runs, double lambda_gap);

// Dirichlet(1, ..., 1) random search followed by coordinate refinement on the simplex.
// Returns the uniform vector when J does not depend on the weights (within 1e-12).
FitResult fit_weights(std::span<const RunRecord> runs, const FitConfig& cfg);

}  // namespace synthmetric
