#include "synthmetric/fidelity.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "synthmetric/classifiers.hpp"
#include "synthmetric/kernels.hpp"

namespace synthmetric {

std::string_view to_string(MetricId id) {
  switch (id) {
    case MetricId::HellingerMarginal:
      return "HellingerMarginal";
    case MetricId::EuclideanMean:
      return "EuclideanMean";
    case MetricId::PearsonAssoc:
      return "PearsonAssoc";
    case MetricId::CramersVAssoc:
      return "CramersVAssoc";
    case MetricId::MeanSimilarity:
      return "MeanSimilarity";
    case MetricId::JsdMarginal:
      return "JsdMarginal";
    case MetricId::Pmse:
      return "Pmse";
    case MetricId::Mmd:
      return "Mmd";
  }
  return "Unknown";
}

std::string_view to_string(Dimension dim) {
  switch (dim) {
    case Dimension::Distance:
      return "Distance";
    case Dimension::CorrelationAssociation:
      return "CorrelationAssociation";
    case Dimension::FeatureSimilarity:
      return "FeatureSimilarity";
    case Dimension::MultivariateDistribution:
      return "MultivariateDistribution";
  }
  return "Unknown";
}

Dimension dimension_of(MetricId id) {
  switch (id) {
    case MetricId::HellingerMarginal:
    case MetricId::EuclideanMean:
      return Dimension::Distance;
    case MetricId::PearsonAssoc:
    case MetricId::CramersVAssoc:
      return Dimension::CorrelationAssociation;
    case MetricId::MeanSimilarity:
    case MetricId::JsdMarginal:
      return Dimension::FeatureSimilarity;
    case MetricId::Pmse:
    case MetricId::Mmd:
      return Dimension::MultivariateDistribution;
  }
  return Dimension::Distance;
}

MetricId metric_from_string(std::string_view name) {
  for (MetricId id : kAllMetrics)
    if (to_string(id) == name) return id;
  throw Error(ErrorCode::InvalidArgument, "unknown metric '" + std::string(name) + "'");
}

void FidelityVector::validate() const {
  for (std::size_t m = 0; m < kMetricCount; ++m)
    if (!(scores[m] >= 0.0 && scores[m] <= 1.0))
      throw Error(ErrorCode::InvalidArgument, std::string(to_string(kAllMetrics[m])) + " score outside [0,1]");
}

namespace {

using Distribution = std::vector<double>;

// Bernoulli (binary) or 10-bin histogram (continuous) marginal of column j.
Distribution marginal(const Dataset& data, std::size_t j) {
  const std::size_t n = data.rows();
  if (data.schema().feature_kinds[j] == FeatureKind::Binary) {
    double ones = 0.0;
    for (std::size_t i = 0; i < n; ++i) ones += data.at(i, j);
    const double p = ones / static_cast<double>(n);
    return {1.0 - p, p};
  }
  Distribution hist(kHistogramBins, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto bin = std::min(kHistogramBins - 1, static_cast<std::size_t>(data.at(i, j) * kHistogramBins));
    hist[bin] += 1.0;
  }
  for (double& h : hist) h /= static_cast<double>(n);
  return hist;
}

// Hellinger via 0.5 * sum (sqrt a - sqrt b)^2, which equals 1 - BC but is exactly 0
// for identical inputs.
double hellinger(const Distribution& a, const Distribution& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = std::sqrt(a[i]) - std::sqrt(b[i]);
    s += diff * diff;
  }
  return std::sqrt(std::clamp(0.5 * s, 0.0, 1.0));
}

double jsd(const Distribution& a, const Distribution& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double m = 0.5 * (a[i] + b[i]);
    if (a[i] > 0.0) s += 0.5 * a[i] * std::log2(a[i] / m);
    if (b[i] > 0.0) s += 0.5 * b[i] * std::log2(b[i] / m);
  }
  return std::clamp(s, 0.0, 1.0);
}

void require_nonempty(const Dataset& real, const Dataset& syn) {
  if (real.rows() == 0 || syn.rows() == 0) throw Error(ErrorCode::TooFewRows, "metric inputs must be non-empty");
}

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

// Upper-triangle (j < k) Pearson correlations of the columns; 0 where either column is constant.
std::vector<double> pair_correlations(const Dataset& data) {
  const std::size_t n = data.rows();
  const std::size_t d = data.cols();
  const std::vector<double> mu = data.means();
  std::vector<double> cov(d * d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    auto r = data.row(i);
    for (std::size_t a = 0; a < d; ++a) {
      const double da = r[a] - mu[a];
      for (std::size_t b = a; b < d; ++b) cov[a * d + b] += da * (r[b] - mu[b]);
    }
  }
  std::vector<double> out;
  out.reserve(d * (d - 1) / 2);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = a + 1; b < d; ++b) {
      const double denom = std::sqrt(cov[a * d + a] * cov[b * d + b]);
      out.push_back(denom > 0.0 ? std::clamp(cov[a * d + b] / denom, -1.0, 1.0) : 0.0);
    }
  return out;
}

// |phi| from the 2x2 contingency table of each binary column pair (j < k).
std::vector<double> pair_phi(const Dataset& data) {
  const std::size_t n = data.rows();
  const std::size_t d = data.cols();
  std::vector<double> ones(d, 0.0);
  std::vector<double> both(d * d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    auto r = data.row(i);
    for (std::size_t a = 0; a < d; ++a) {
      if (r[a] == 0.0) continue;
      ones[a] += 1.0;
      for (std::size_t b = a + 1; b < d; ++b) both[a * d + b] += r[b];
    }
  }
  const double total = static_cast<double>(n);
  std::vector<double> out;
  out.reserve(d * (d - 1) / 2);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = a + 1; b < d; ++b) {
      const double n11 = both[a * d + b];
      const double n10 = ones[a] - n11;
      const double n01 = ones[b] - n11;
      const double n00 = total - n11 - n10 - n01;
      const double denom = std::sqrt(ones[a] * (total - ones[a]) * ones[b] * (total - ones[b]));
      out.push_back(denom > 0.0 ? std::min(1.0, std::fabs(n11 * n00 - n10 * n01) / denom) : 0.0);
    }
  return out;
}

}  // namespace

double hellinger_marginal_score(const Dataset& real, const Dataset& syn) {
  require_same_schema(real, syn);
  require_nonempty(real, syn);
  double total = 0.0;
  for (std::size_t j = 0; j < real.cols(); ++j) total += hellinger(marginal(real, j), marginal(syn, j));
  return clamp01(1.0 - total / static_cast<double>(real.cols()));
}

double euclidean_mean_score(const Dataset& real, const Dataset& syn) {
  require_same_schema(real, syn);
  require_nonempty(real, syn);
  const auto mr = real.means();
  const auto ms = syn.means();
  double s = 0.0;
  for (std::size_t j = 0; j < mr.size(); ++j) s += (mr[j] - ms[j]) * (mr[j] - ms[j]);
  return clamp01(1.0 - std::sqrt(s) / std::sqrt(static_cast<double>(mr.size())));
}

double pearson_assoc_score(const Dataset& real, const Dataset& syn) {
  require_same_schema(real, syn);
  require_nonempty(real, syn);
  if (real.cols() < 2) throw Error(ErrorCode::TooFewFeatures, "association metrics need at least 2 features");
  const auto rr = pair_correlations(real);
  const auto rs = pair_correlations(syn);
  double s = 0.0;
  for (std::size_t p = 0; p < rr.size(); ++p) s += std::fabs(rr[p] - rs[p]);
  return clamp01(1.0 - s / static_cast<double>(rr.size()) / 2.0);
}

double cramers_v_score(const Dataset& real, const Dataset& syn) {
  require_same_schema(real, syn);
  require_nonempty(real, syn);
  if (!real.schema().all_binary()) throw Error(ErrorCode::NonBinaryFeature, "Cramer's V needs binary features");
  if (real.cols() < 2) throw Error(ErrorCode::TooFewFeatures, "association metrics need at least 2 features");
  const auto vr = pair_phi(real);
  const auto vs = pair_phi(syn);
  double s = 0.0;
  for (std::size_t p = 0; p < vr.size(); ++p) s += std::fabs(vr[p] - vs[p]);
  return clamp01(1.0 - s / static_cast<double>(vr.size()));
}

double mean_similarity_score(const Dataset& real, const Dataset& syn) {
  require_same_schema(real, syn);
  require_nonempty(real, syn);
  const auto mr = real.means();
  const auto ms = syn.means();
  double s = 0.0;
  for (std::size_t j = 0; j < mr.size(); ++j) s += std::fabs(mr[j] - ms[j]);
  return clamp01(1.0 - s / static_cast<double>(mr.size()));
}

double jsd_marginal_score(const Dataset& real, const Dataset& syn) {
  require_same_schema(real, syn);
  require_nonempty(real, syn);
  double total = 0.0;
  for (std::size_t j = 0; j < real.cols(); ++j) total += jsd(marginal(real, j), marginal(syn, j));
  return clamp01(1.0 - total / static_cast<double>(real.cols()));
}

double pmse_score(const Dataset& real, const Dataset& syn, RngSeed seed) {
  require_same_schema(real, syn);
  if (real.rows() < 20 || syn.rows() < 20) throw Error(ErrorCode::TooFewRows, "pMSE needs at least 20 rows per side");
  const std::size_t d = real.cols();
  const std::size_t n = real.rows() + syn.rows();
  std::vector<double> values;
  values.reserve(n * d);
  values.insert(values.end(), real.values().begin(), real.values().end());
  values.insert(values.end(), syn.values().begin(), syn.values().end());
  std::vector<int> origin(real.rows(), 0);
  origin.insert(origin.end(), syn.rows(), 1);
  const Dataset combined(real.schema(), std::move(values), std::move(origin));

  const auto model = train(ClassifierSpec::defaults(ClassifierKind::Logistic), combined, seed);
  const auto propensity = predict_proba(model, combined);
  const double c = static_cast<double>(syn.rows()) / static_cast<double>(n);
  double pmse = 0.0;
  for (double p : propensity) pmse += (p - c) * (p - c);
  pmse /= static_cast<double>(n);
  return clamp01(1.0 - pmse / (c * (1.0 - c)));
}

MmdTerms mmd_terms(const Dataset& real, const Dataset& syn) {
  require_same_schema(real, syn);
  if (real.rows() < 2 || syn.rows() < 2) throw Error(ErrorCode::TooFewRows, "MMD needs at least 2 rows per side");
  const auto xr = kernels::view_of(real);
  const auto xs = kernels::view_of(syn);
  std::vector<double> dists = kernels::omp::pairwise_squared_distances(xr);
  const std::size_t m = dists.size();
  std::nth_element(dists.begin(), dists.begin() + static_cast<std::ptrdiff_t>(m / 2), dists.end());
  double median = dists[m / 2];
  if (m % 2 == 0) {
    const double lower = *std::max_element(dists.begin(), dists.begin() + static_cast<std::ptrdiff_t>(m / 2));
    median = 0.5 * (lower + median);
  }
  MmdTerms terms;
  terms.sigma2 = median > 0.0 ? median : 1.0;
  const double gamma = 1.0 / (2.0 * terms.sigma2);
  const double nr = static_cast<double>(real.rows());
  const double ns = static_cast<double>(syn.rows());
  const double kxx = kernels::omp::rbf_kernel_sum(xr, xr, gamma) / (nr * nr);
  const double kyy = kernels::omp::rbf_kernel_sum(xs, xs, gamma) / (ns * ns);
  const double kxy = kernels::omp::rbf_kernel_sum(xr, xs, gamma) / (nr * ns);
  terms.mmd2 = std::clamp(kxx + kyy - 2.0 * kxy, 0.0, 2.0);
  return terms;
}

double mmd_score(const Dataset& real, const Dataset& syn) {
  const MmdTerms terms = mmd_terms(real, syn);
  return clamp01(1.0 - terms.mmd2 / 2.0);
}

FidelityVector evaluate_all(const Dataset& real, const Dataset& syn, RngSeed seed) {
  require_same_schema(real, syn);
  FidelityVector v;
  v[MetricId::HellingerMarginal] = hellinger_marginal_score(real, syn);
  v[MetricId::EuclideanMean] = euclidean_mean_score(real, syn);
  v[MetricId::PearsonAssoc] = pearson_assoc_score(real, syn);
  v[MetricId::CramersVAssoc] = cramers_v_score(real, syn);
  v[MetricId::MeanSimilarity] = mean_similarity_score(real, syn);
  v[MetricId::JsdMarginal] = jsd_marginal_score(real, syn);
  v[MetricId::Pmse] = pmse_score(real, syn, derive_seed(seed, "pmse"));
  v[MetricId::Mmd] = mmd_score(real, syn);
  return v;
}

}  // namespace synthmetric
