#include "synthmetric/builtin.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "synthmetric/generators.hpp"
#include "synthmetric/rng.hpp"

namespace synthmetric {

void BuiltinSpec::validate() const {
  if (n < 4) throw Error(ErrorCode::InvalidArgument, "builtin dataset needs n >= 4");
  if (d < 2) throw Error(ErrorCode::InvalidArgument, "builtin dataset needs d >= 2");
  if (block_size < 1) throw Error(ErrorCode::InvalidArgument, "block_size must be >= 1");
  if (!(block_rho >= 0.0 && block_rho < 1.0)) throw Error(ErrorCode::InvalidArgument, "block_rho must be in [0,1)");
  if (!(min_rate > 0.0 && min_rate <= max_rate && max_rate < 1.0))
    throw Error(ErrorCode::InvalidArgument, "need 0 < min_rate <= max_rate < 1");
  if (informative < 1 || informative > d) throw Error(ErrorCode::InvalidArgument, "informative must be in [1, d]");
  if (!(label_noise >= 0.0)) throw Error(ErrorCode::InvalidArgument, "label_noise must be >= 0");
}

Dataset make_builtin_dataset(const BuiltinSpec& spec) {
  spec.validate();
  Rng rng(derive_seed(RngSeed{spec.seed}, "builtin"));
  const std::size_t n = spec.n;
  const std::size_t d = spec.d;

  std::vector<double> thresholds(d);
  for (double& t : thresholds)
    t = normal_quantile(1.0 - (spec.min_rate + (spec.max_rate - spec.min_rate) * rng.uniform()));

  std::vector<std::size_t> features(d);
  std::iota(features.begin(), features.end(), std::size_t{0});
  for (std::size_t i = d; i > 1; --i) std::swap(features[i - 1], features[rng.below(i)]);
  std::vector<double> label_weights(d, 0.0);
  for (std::size_t i = 0; i < spec.informative; ++i) {
    const double magnitude = 0.5 + rng.uniform();
    label_weights[features[i]] = rng.bernoulli(0.75) ? magnitude : -magnitude;
  }

  const std::size_t blocks = (d + spec.block_size - 1) / spec.block_size;
  const double shared = std::sqrt(spec.block_rho);
  const double own = std::sqrt(1.0 - spec.block_rho);
  std::vector<double> values(n * d);
  std::vector<double> label_score(n);
  std::vector<double> factors(blocks);
  for (std::size_t i = 0; i < n; ++i) {
    for (double& f : factors) f = rng.normal();
    double s = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      const double latent = shared * factors[j / spec.block_size] + own * rng.normal();
      const double x = latent > thresholds[j] ? 1.0 : 0.0;
      values[i * d + j] = x;
      s += label_weights[j] * x;
    }
    label_score[i] = s + spec.label_noise * rng.normal();
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return label_score[a] < label_score[b]; });
  std::vector<int> labels(n, 0);
  for (std::size_t r = n - n / 2; r < n; ++r) labels[order[r]] = 1;

  FeatureSchema schema;
  schema.label_name = spec.label_name;
  char name[32];
  for (std::size_t j = 0; j < d; ++j) {
    std::snprintf(name, sizeof(name), "feature_%02zu", j);
    schema.feature_names.emplace_back(name);
    schema.feature_kinds.push_back(FeatureKind::Binary);
  }
  return Dataset(std::move(schema), std::move(values), std::move(labels));
}

}  // namespace synthmetric
