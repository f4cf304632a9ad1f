#pragma once

#include <cstddef>
#include <filesystem>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "synthmetric/builtin.hpp"
#include "synthmetric/classifiers.hpp"
#include "synthmetric/generators.hpp"
#include "synthmetric/supermetric.hpp"

namespace synthmetric {

struct DatasetEntry {
  std::string id;
  std::optional<std::filesystem::path> path;  // CSV file, or
  std::optional<BuiltinSpec> builtin;         // planted synthetic "real" data
  std::string label_name = "label";
};

struct RunConfig {
  std::string run_id = "run";
  std::vector<DatasetEntry> datasets;
  std::vector<GeneratorSpec> generators;
  std::vector<ClassifierSpec> classifiers;
  std::size_t k_folds = 5;
  FitConfig fit;  // fit.seed is derived per dataset from `seed`
  RngSeed seed{1};
  std::filesystem::path out_dir = "results";
  bool spearman = false;

  // Throws Error(ConfigInvalid) describing the first problem found.
  void validate() const;

  nlohmann::json to_json() const;
  // Relative dataset paths are resolved against base_dir.
  static RunConfig from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
  static RunConfig load(const std::filesystem::path& file);

  // Five builtin datasets x ten generators x four classifiers, k = 5.
  static RunConfig default_config();
};

Dataset load_dataset(const DatasetEntry& entry);

}  // namespace synthmetric
