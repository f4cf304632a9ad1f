#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "synthmetric/error.hpp"
#include "synthmetric/rng.hpp"

namespace synthmetric {

enum class FeatureKind { Binary, Continuous };

struct FeatureSchema {
  std::vector<std::string> feature_names;
  std::vector<FeatureKind> feature_kinds;
  std::string label_name = "label";

  std::size_t size() const { return feature_names.size(); }
  bool all_binary() const;
  // Throws InvalidArgument when names are empty/duplicated, the label shadows a feature,
  // or there are no features.
  void validate() const;

  friend bool operator==(const FeatureSchema&, const FeatureSchema&) = default;
};

// Raw [min, max] of a Continuous column before scaling; lets foreign CSVs be scaled
// onto the same axis as the dataset they imitate.
struct FeatureRange {
  double min = 0.0;
  double max = 1.0;
};

// Row-major feature matrix with binary labels (0 = benign, 1 = malware).
// Immutable after construction, so it can be shared freely across worker threads.
//
// Provenance: each row carries the index it had in the originally loaded real table,
// or kSyntheticRow for generated rows. Subsetting preserves it.
class Dataset {
 public:
  static constexpr std::int64_t kSyntheticRow = -1;

  Dataset() = default;
  Dataset(FeatureSchema schema, std::vector<double> values, std::vector<int> labels,
          std::vector<std::int64_t> provenance = {}, std::vector<FeatureRange> ranges = {});

  const FeatureSchema& schema() const { return schema_; }
  std::size_t rows() const { return labels_.size(); }
  std::size_t cols() const { return schema_.size(); }
  bool empty() const { return labels_.empty(); }

  std::span<const double> row(std::size_t i) const { return {values_.data() + i * cols(), cols()}; }
  double at(std::size_t i, std::size_t j) const { return values_[i * cols() + j]; }
  int label(std::size_t i) const { return labels_[i]; }

  const std::vector<double>& values() const { return values_; }
  const std::vector<int>& labels() const { return labels_; }
  const std::vector<std::int64_t>& provenance() const { return provenance_; }
  const std::vector<FeatureRange>& ranges() const { return ranges_; }

  Dataset subset(std::span<const std::size_t> indices) const;
  Dataset with_class(int cls) const;
  // Per-feature column means.
  std::vector<double> means() const;

 private:
  FeatureSchema schema_;
  std::vector<double> values_;
  std::vector<int> labels_;
  std::vector<std::int64_t> provenance_;
  std::vector<FeatureRange> ranges_;
};

struct ClassCounts {
  std::size_t n_benign = 0;
  std::size_t n_malware = 0;

  friend bool operator==(const ClassCounts&, const ClassCounts&) = default;
};

ClassCounts class_counts(std::span<const int> labels);
inline ClassCounts class_counts(const Dataset& data) { return class_counts(data.labels()); }

// Reads a numeric CSV with a header row. Binary iff every value is 0 or 1; Continuous
// columns are min-max scaled onto [0, 1] (constant columns map to 0).
Dataset load_csv(const std::filesystem::path& path, const std::string& label_name);

// Reads a CSV that must share `reference`'s header. Feature kinds are taken from the
// reference and Continuous columns are scaled with its recorded ranges, clamped to [0, 1].
Dataset load_csv_like(const std::filesystem::path& path, const Dataset& reference);

// load_csv over in-memory text.
Dataset parse_csv(const std::string& text, const std::string& label_name);

// Shortest round-trip decimal form of every value.
std::string to_csv(const Dataset& data);
void write_csv(const Dataset& data, const std::filesystem::path& path);

// Throws SchemaMismatch when the two datasets cannot be compared column by column.
void require_same_schema(const Dataset& a, const Dataset& b);

struct FoldPlan {
  std::size_t k = 0;
  std::vector<std::size_t> assignments;

  std::vector<std::size_t> test_indices(std::size_t fold) const;
  std::vector<std::size_t> train_indices(std::size_t fold) const;
};

FoldPlan stratified_kfold(const Dataset& data, std::size_t k, RngSeed seed);

}  // namespace synthmetric
