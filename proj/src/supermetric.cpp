#include "synthmetric/supermetric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "synthmetric/stats.hpp"

namespace synthmetric {

WeightVector WeightVector::uniform() {
  WeightVector v;
  v.w.fill(1.0 / static_cast<double>(kMetricCount));
  return v;
}

WeightVector WeightVector::unit(MetricId id) {
  WeightVector v;
  v.w[static_cast<std::size_t>(id)] = 1.0;
  return v;
}

void WeightVector::validate() const {
  double sum = 0.0;
  for (double x : w) {
    if (!(x >= 0.0)) throw Error(ErrorCode::InvalidWeights, "weights must be non-negative");
    sum += x;
  }
  if (std::fabs(sum - 1.0) > 1e-9) throw Error(ErrorCode::InvalidWeights, "weights must sum to 1");
}

void FitConfig::validate() const {
  if (!(lambda_gap >= 0.0)) throw Error(ErrorCode::InvalidArgument, "lambda_gap must be >= 0");
  if (n_random < 1) throw Error(ErrorCode::InvalidArgument, "n_random must be >= 1");
  if (!(refine_step > 0.0)) throw Error(ErrorCode::InvalidArgument, "refine_step must be > 0");
}

double score(const WeightVector& weights, const FidelityVector& fidelity) {
  weights.validate();
  double s = 0.0;
  for (std::size_t k = 0; k < kMetricCount; ++k) s += weights.w[k] * fidelity.scores[k];
  return std::clamp(s, 0.0, 1.0);
}

namespace {

struct Columns {
  std::vector<std::array<double, kMetricCount>> fidelity;
  std::vector<double> recall;
  std::vector<double> f1;
};

Columns columns_of(std::span<const RunRecord> runs) {
  if (runs.size() < 3) throw Error(ErrorCode::TooFewRuns, "need at least 3 runs, got " + std::to_string(runs.size()));
  Columns c;
  for (const auto& r : runs) {
    c.fidelity.push_back(r.fidelity.scores);
    c.recall.push_back(r.recall);
    c.f1.push_back(r.f1);
  }
  if (population_std(c.recall) == 0.0 || population_std(c.f1) == 0.0)
    throw Error(ErrorCode::InsufficientVariation, "recall or F1 is constant across runs");
  return c;
}

ObjectiveTerms evaluate(const std::array<double, kMetricCount>& w, const Columns& cols, double lambda) {
  std::vector<double> s(cols.fidelity.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    double v = 0.0;
    for (std::size_t k = 0; k < kMetricCount; ++k) v += w[k] * cols.fidelity[i][k];
    s[i] = v;
  }
  ObjectiveTerms t;
  t.corr_recall = pearson_corr(s, cols.recall);
  t.corr_f1 = pearson_corr(s, cols.f1);
  t.objective = 0.5 * (t.corr_recall + t.corr_f1) - lambda * std::fabs(t.corr_recall - t.corr_f1);
  return t;
}

constexpr double kUndefined = -std::numeric_limits<double>::infinity();

// J for search purposes; weight vectors whose super-metric is constant rank last.
double search_value(const std::array<double, kMetricCount>& w, const Columns& cols, double lambda) {
  try {
    return evaluate(w, cols, lambda).objective;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::InsufficientVariation) throw;
    return kUndefined;
  }
}

std::array<double, kMetricCount> normalized(std::array<double, kMetricCount> w) {
  double sum = 0.0;
  for (double x : w) sum += x;
  for (double& x : w) x /= sum;
  return w;
}

double after_transfer(double have, double amount) { return amount >= have ? 0.0 : have - amount; }

struct Candidate {
  std::array<double, kMetricCount> w{};
  double value = kUndefined;
};

// Pattern search over mass transfers between pairs of coordinates; stays on the simplex.
Candidate polish(const Candidate& start, const Columns& cols, double lambda) {
  constexpr double kInitialStep = 0.25;
  constexpr double kFinalStep = 1e-4;
  constexpr std::size_t kMaxSweeps = 200;
  Candidate best = start;
  for (double step = kInitialStep; step >= kFinalStep; step *= 0.5) {
    for (std::size_t sweep = 0; sweep < kMaxSweeps; ++sweep) {
      Candidate sweep_best = best;
      for (std::size_t from = 0; from < kMetricCount; ++from) {
        if (best.w[from] <= 0.0) continue;
        const double amount = std::min(step, best.w[from]);
        for (std::size_t to = 0; to < kMetricCount; ++to) {
          if (to == from) continue;
          Candidate c = best;
          c.w[from] = after_transfer(best.w[from], amount);
          c.w[to] += amount;
          c.value = search_value(c.w, cols, lambda);
          if (c.value > sweep_best.value) sweep_best = c;
        }
      }
      if (!(sweep_best.value > best.value)) break;
      best = sweep_best;
    }
  }
  best.w = normalized(best.w);
  best.value = search_value(best.w, cols, lambda);
  return best.value > start.value ? best : start;
}

constexpr std::size_t kPolishedDraws = 32;

}  // namespace

ObjectiveTerms objective_terms(const WeightVector& weights, std::span<const RunRecord> runs, double lambda_gap) {
  weights.validate();
  if (!(lambda_gap >= 0.0)) throw Error(ErrorCode::InvalidArgument, "lambda_gap must be >= 0");
  return evaluate(weights.w, columns_of(runs), lambda_gap);
}

double objective_j(const WeightVector& weights, std::span<const RunRecord> runs, double lambda_gap) {
  return objective_terms(weights, runs, lambda_gap).objective;
}

FitResult fit_weights(std::span<const RunRecord> runs, const FitConfig& cfg) {
  cfg.validate();
  if (!runs.empty()) {
    for (const auto& r : runs)
      if (r.dataset_id != runs.front().dataset_id)
        throw Error(ErrorCode::InvalidArgument, "fit_weights expects runs from a single dataset");
  }
  const Columns cols = columns_of(runs);
  const double lambda = cfg.lambda_gap;

  Rng rng(derive_seed(cfg.seed, "fit_weights", "dirichlet"));
  std::vector<std::array<double, kMetricCount>> draws(cfg.n_random);
  for (auto& w : draws) {
    for (double& x : w) x = rng.exponential();
    w = normalized(w);
  }
  std::vector<double> values(draws.size());
  const auto n_draws = static_cast<std::ptrdiff_t>(draws.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n_draws; ++i)
    values[static_cast<std::size_t>(i)] = search_value(draws[static_cast<std::size_t>(i)], cols, lambda);

  const WeightVector uniform = WeightVector::uniform();
  const double uniform_value = search_value(uniform.w, cols, lambda);
  const bool invariant = std::isfinite(uniform_value) && std::all_of(values.begin(), values.end(), [&](double v) {
                           return std::isfinite(v) && std::fabs(v - uniform_value) <= 1e-12;
                         });

  std::array<double, kMetricCount> best{};
  double best_value = kUndefined;
  if (invariant) {
    best = uniform.w;
    best_value = uniform_value;
  } else {
    std::size_t best_index = 0;
    for (std::size_t i = 0; i < values.size(); ++i)
      if (values[i] > best_value) {
        best_value = values[i];
        best_index = i;
      }
    if (!std::isfinite(best_value))
      throw Error(ErrorCode::InsufficientVariation, "every candidate weighting yields a constant super-metric");
    best = draws[best_index];

    for (std::size_t pass = 0; pass < cfg.refine_passes; ++pass) {
      for (std::size_t k = 0; k < kMetricCount; ++k) {
        for (double delta : {cfg.refine_step, -cfg.refine_step}) {
          auto candidate = best;
          candidate[k] = std::max(0.0, candidate[k] + delta);
          double sum = 0.0;
          for (double x : candidate) sum += x;
          if (!(sum > 0.0)) continue;
          candidate = normalized(candidate);
          const double v = search_value(candidate, cols, lambda);
          if (v > best_value) {
            best = candidate;
            best_value = v;
            break;
          }
        }
      }
    }

    if (cfg.refine_passes > 0) {
      // Polish from the refined point, the leading draws and every vertex.
      std::vector<Candidate> starts{{best, best_value}};
      std::vector<std::size_t> order(values.size());
      std::iota(order.begin(), order.end(), std::size_t{0});
      const std::size_t lead = std::min(kPolishedDraws, order.size());
      std::partial_sort(
          order.begin(), order.begin() + static_cast<std::ptrdiff_t>(lead), order.end(),
          [&](std::size_t a, std::size_t b) { return values[a] > values[b] || (values[a] == values[b] && a < b); });
      for (std::size_t i = 0; i < lead; ++i) starts.push_back({draws[order[i]], values[order[i]]});
      for (std::size_t k = 0; k < kMetricCount; ++k) {
        Candidate v;
        v.w[k] = 1.0;
        v.value = search_value(v.w, cols, lambda);
        starts.push_back(v);
      }
      std::vector<Candidate> polished(starts.size());
      const auto n_starts = static_cast<std::ptrdiff_t>(starts.size());
#pragma omp parallel for schedule(dynamic, 1)
      for (std::ptrdiff_t i = 0; i < n_starts; ++i)
        polished[static_cast<std::size_t>(i)] = polish(starts[static_cast<std::size_t>(i)], cols, lambda);
      for (const auto& c : polished)
        if (c.value > best_value) {
          best = c.w;
          best_value = c.value;
        }
    }
  }

  FitResult result;
  result.weights.w = best;
  const ObjectiveTerms terms = evaluate(best, cols, lambda);
  result.objective = terms.objective;
  result.corr_recall = terms.corr_recall;
  result.corr_f1 = terms.corr_f1;
  return result;
}

}  // namespace synthmetric
