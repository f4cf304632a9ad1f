#include "synthmetric/generators.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <limits>
#include <numeric>

#include "synthmetric/kernels.hpp"

namespace synthmetric {

std::string_view to_string(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::IndependentMarginals:
      return "IndependentMarginals";
    case GeneratorKind::GaussianCopula:
      return "GaussianCopula";
    case GeneratorKind::Smote:
      return "Smote";
    case GeneratorKind::NoisyCopy:
      return "NoisyCopy";
  }
  return "Unknown";
}

GeneratorKind generator_kind_from_string(std::string_view name) {
  for (auto kind : {GeneratorKind::IndependentMarginals, GeneratorKind::GaussianCopula, GeneratorKind::Smote,
                    GeneratorKind::NoisyCopy})
    if (to_string(kind) == name) return kind;
  throw Error(ErrorCode::InvalidArgument, "unknown generator kind '" + std::string(name) + "'");
}

void GeneratorSpec::validate() const {
  if (!(flip_rate >= 0.0 && flip_rate <= 1.0)) throw Error(ErrorCode::InvalidArgument, "flip_rate must lie in [0,1]");
  if (k_neighbors < 1) throw Error(ErrorCode::InvalidArgument, "k_neighbors must be at least 1");
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double normal_quantile(double p) {
  if (p <= 0.0) return -std::numeric_limits<double>::infinity();
  if (p >= 1.0) return std::numeric_limits<double>::infinity();
  return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

std::vector<double> correlation_matrix(const Dataset& data) {
  const std::size_t n = data.rows();
  const std::size_t d = data.cols();
  const std::vector<double> mu = data.means();
  std::vector<double> cov(d * d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    auto r = data.row(i);
    for (std::size_t a = 0; a < d; ++a) {
      const double da = r[a] - mu[a];
      if (da == 0.0) continue;
      for (std::size_t b = a; b < d; ++b) cov[a * d + b] += da * (r[b] - mu[b]);
    }
  }
  std::vector<double> corr(d * d, 0.0);
  for (std::size_t a = 0; a < d; ++a) {
    corr[a * d + a] = 1.0;
    for (std::size_t b = a + 1; b < d; ++b) {
      const double denom = std::sqrt(cov[a * d + a] * cov[b * d + b]);
      const double rho = denom > 0.0 ? std::clamp(cov[a * d + b] / denom, -1.0, 1.0) : 0.0;
      corr[a * d + b] = rho;
      corr[b * d + a] = rho;
    }
  }
  return corr;
}

bool cholesky(std::vector<double> m, std::size_t d, std::vector<double>& lower) {
  lower.assign(d * d, 0.0);
  for (std::size_t j = 0; j < d; ++j) {
    double diag = m[j * d + j];
    for (std::size_t k = 0; k < j; ++k) diag -= lower[j * d + k] * lower[j * d + k];
    if (!(diag > 0.0)) return false;
    const double ljj = std::sqrt(diag);
    lower[j * d + j] = ljj;
    for (std::size_t i = j + 1; i < d; ++i) {
      double s = m[i * d + j];
      for (std::size_t k = 0; k < j; ++k) s -= lower[i * d + k] * lower[j * d + k];
      lower[i * d + j] = s / ljj;
    }
  }
  return true;
}

namespace {

void fit_copula(FittedGenerator::ClassModel& model, std::size_t d) {
  std::vector<double> corr = correlation_matrix(model.rows);
  double jitter = 0.0;
  for (int attempt = 0;; ++attempt) {
    std::vector<double> trial = corr;
    // Rescaled so the jittered matrix stays a correlation matrix (unit diagonal).
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b < d; ++b)
        trial[a * d + b] = (corr[a * d + b] + (a == b ? jitter : 0.0)) / (1.0 + jitter);
    if (cholesky(trial, d, model.cholesky)) break;
    if (attempt > 60) throw Error(ErrorCode::DegenerateClass, "correlation matrix cannot be factorized");
    jitter = jitter == 0.0 ? 1e-6 : jitter * 2.0;
  }
  model.jitter = jitter;
  model.latent_thresholds.resize(d);
  for (std::size_t j = 0; j < d; ++j) model.latent_thresholds[j] = normal_quantile(1.0 - model.p_hat[j]);
}

void fit_marginals(FittedGenerator::ClassModel& model) {
  const std::size_t d = model.rows.cols();
  model.p_hat = model.rows.means();
  model.sorted_values.assign(d, {});
  for (std::size_t j = 0; j < d; ++j) {
    if (model.rows.schema().feature_kinds[j] != FeatureKind::Continuous) continue;
    auto& col = model.sorted_values[j];
    col.reserve(model.rows.rows());
    for (std::size_t i = 0; i < model.rows.rows(); ++i) col.push_back(model.rows.at(i, j));
    std::sort(col.begin(), col.end());
  }
}

double empirical_quantile(const std::vector<double>& sorted, double u) {
  const auto n = sorted.size();
  const auto idx = std::min(n - 1, static_cast<std::size_t>(u * static_cast<double>(n)));
  return sorted[idx];
}

void sample_class(const FittedGenerator& gen, int cls, std::size_t n, Rng& rng, std::vector<double>& out) {
  const auto& model = gen.model(cls);
  const GeneratorSpec& spec = gen.spec();
  const auto& kinds = gen.schema().feature_kinds;
  const std::size_t d = kinds.size();
  const std::size_t stored = model.rows.rows();
  std::vector<double> row(d);
  std::vector<double> latent(d);
  std::vector<double> gauss(d);
  for (std::size_t s = 0; s < n; ++s) {
    switch (spec.kind) {
      case GeneratorKind::IndependentMarginals:
        for (std::size_t j = 0; j < d; ++j) {
          if (kinds[j] == FeatureKind::Binary)
            row[j] = rng.bernoulli(model.p_hat[j]) ? 1.0 : 0.0;
          else
            row[j] = model.sorted_values[j][rng.below(model.sorted_values[j].size())];
        }
        break;
      case GeneratorKind::GaussianCopula:
        for (double& g : gauss) g = rng.normal();
        for (std::size_t a = 0; a < d; ++a) {
          double z = 0.0;
          for (std::size_t b = 0; b <= a; ++b) z += model.cholesky[a * d + b] * gauss[b];
          latent[a] = z;
        }
        for (std::size_t j = 0; j < d; ++j) {
          if (kinds[j] == FeatureKind::Binary)
            row[j] = latent[j] > model.latent_thresholds[j] ? 1.0 : 0.0;
          else
            row[j] = empirical_quantile(model.sorted_values[j], normal_cdf(latent[j]));
        }
        break;
      case GeneratorKind::Smote: {
        const std::size_t base = rng.below(stored);
        const std::size_t mate = model.neighbors[base * spec.k_neighbors + rng.below(spec.k_neighbors)];
        const double u = rng.uniform();
        auto x = model.rows.row(base);
        auto y = model.rows.row(mate);
        for (std::size_t j = 0; j < d; ++j) {
          const double v = x[j] + u * (y[j] - x[j]);
          row[j] = kinds[j] == FeatureKind::Binary ? (v >= 0.5 ? 1.0 : 0.0) : v;
        }
        break;
      }
      case GeneratorKind::NoisyCopy: {
        auto x = model.rows.row(rng.below(stored));
        for (std::size_t j = 0; j < d; ++j) row[j] = rng.bernoulli(spec.flip_rate) ? 1.0 - x[j] : x[j];
        break;
      }
    }
    out.insert(out.end(), row.begin(), row.end());
  }
}

}  // namespace

FittedGenerator fit(const GeneratorSpec& spec, const Dataset& train) {
  spec.validate();
  std::array<FittedGenerator::ClassModel, 2> classes;
  const std::size_t d = train.cols();
  for (int cls = 0; cls <= 1; ++cls) {
    auto& model = classes[static_cast<std::size_t>(cls)];
    model.rows = train.with_class(cls);
    if (model.rows.rows() == 0)
      throw Error(ErrorCode::DegenerateClass, "training split has no rows of class " + std::to_string(cls));
    if (spec.kind == GeneratorKind::Smote && model.rows.rows() <= spec.k_neighbors)
      throw Error(ErrorCode::TooFewNeighbors, "class " + std::to_string(cls) + " has " +
                                                  std::to_string(model.rows.rows()) + " rows, Smote needs more than " +
                                                  std::to_string(spec.k_neighbors));
    fit_marginals(model);
    switch (spec.kind) {
      case GeneratorKind::GaussianCopula:
        fit_copula(model, d);
        break;
      case GeneratorKind::Smote: {
        const auto view = kernels::view_of(model.rows);
        model.neighbors = kernels::omp::nearest_neighbors(view, view, spec.k_neighbors, true);
        break;
      }
      case GeneratorKind::IndependentMarginals:
      case GeneratorKind::NoisyCopy:
        break;
    }
  }
  return FittedGenerator(spec, train.schema(), std::move(classes));
}

Dataset sample(const FittedGenerator& gen, std::size_t n_per_class, RngSeed seed) {
  if (n_per_class < 1) throw Error(ErrorCode::InvalidArgument, "n_per_class must be at least 1");
  const std::size_t d = gen.schema().size();
  std::vector<double> values;
  values.reserve(2 * n_per_class * d);
  std::vector<int> labels;
  labels.reserve(2 * n_per_class);
  for (int cls = 0; cls <= 1; ++cls) {
    Rng rng(derive_seed(seed, "sample", to_string(gen.spec().kind), cls));
    sample_class(gen, cls, n_per_class, rng, values);
    labels.insert(labels.end(), n_per_class, cls);
  }
  // Interleave the classes; index-ordered tie rules downstream would otherwise favour class 0.
  std::vector<std::size_t> order(labels.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng shuffle_rng(derive_seed(seed, "sample_order"));
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[shuffle_rng.below(i)]);
  std::vector<double> shuffled(values.size());
  std::vector<int> shuffled_labels(labels.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    std::copy_n(values.begin() + static_cast<std::ptrdiff_t>(order[i] * d), d,
                shuffled.begin() + static_cast<std::ptrdiff_t>(i * d));
    shuffled_labels[i] = labels[order[i]];
  }
  values = std::move(shuffled);
  labels = std::move(shuffled_labels);
  std::vector<std::int64_t> provenance(labels.size(), Dataset::kSyntheticRow);
  return Dataset(gen.schema(), std::move(values), std::move(labels), std::move(provenance), gen.model(0).rows.ranges());
}

}  // namespace synthmetric
