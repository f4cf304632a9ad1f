#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "synthmetric/dataset.hpp"

namespace synthmetric {

// Planted model for builtin "real" datasets: sparse binary features that are correlated
// within blocks through a shared latent Gaussian factor, and a label given by a noisy
// linear score over a few informative features, split at the median so the classes are
// balanced.
struct BuiltinSpec {
  std::size_t n = 1000;
  std::size_t d = 30;
  std::uint64_t seed = 1;
  std::size_t block_size = 5;
  double block_rho = 0.5;  // latent correlation inside a block
  double min_rate = 0.05;  // feature activation rates are drawn from [min_rate, max_rate]
  double max_rate = 0.5;
  std::size_t informative = 8;
  double label_noise = 0.5;  // std of the Gaussian noise added to the label score
  std::string label_name = "label";

  void validate() const;
};

Dataset make_builtin_dataset(const BuiltinSpec& spec);

}  // namespace synthmetric
