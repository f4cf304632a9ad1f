#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "synthmetric/fidelity.hpp"
#include "synthmetric/stats.hpp"
#include "synthmetric/supermetric.hpp"

namespace synthmetric {

// Rows of the study: the eight metrics in MetricId order, then the super-metric.
inline constexpr std::size_t kSuperMetricRow = kMetricCount;
inline constexpr std::size_t kStudyRows = kMetricCount + 1;

std::string_view study_row_name(std::size_t row);
std::size_t study_row_from_name(std::string_view name);

enum class Target { Recall, F1 };
std::string_view to_string(Target t);
Target target_from_string(std::string_view name);

enum class CorrelationMethod { Pearson, Spearman };

struct CorrelationCell {
  std::string generator_id;
  std::size_t metric = 0;  // study row
  Target target = Target::Recall;
  std::optional<double> rho;  // empty when undefined (constant column or < 3 points)
  std::size_t n_points = 0;
};

struct CorrelationStudy {
  std::vector<CorrelationCell> cells;  // generator (lexicographic), row, target order
  std::size_t undefined_cells = 0;
};

// For every generator, correlates each study row with mean TSTR recall and F1 across that
// generator's (dataset, fold) runs. Super-metric scores apply the weights fitted for the
// run's dataset.
CorrelationStudy per_generator_correlations(std::span<const RunRecord> runs,
                                            const std::map<std::string, WeightVector>& weights_by_dataset,
                                            CorrelationMethod method = CorrelationMethod::Pearson);

std::vector<CorrelationCell> select_cells(std::span<const CorrelationCell> cells, std::size_t row, Target target);

// The following take the cells of one row and one target; undefined cells are ignored.
double sign_consistency(std::span<const CorrelationCell> cells);
double stability_std(std::span<const CorrelationCell> cells);
double robustness_range(std::span<const CorrelationCell> cells, const std::map<std::string, std::string>& family_of);

struct PropertyRow {
  std::size_t metric = 0;
  Target target = Target::Recall;
  std::size_t defined_cells = 0;
  std::optional<double> consistency;
  std::optional<double> stability_std;
  std::optional<double> robustness_range;
};

std::vector<PropertyRow> summarize_properties(std::span<const CorrelationCell> cells,
                                              const std::map<std::string, std::string>& family_of);
std::string properties_to_csv(std::span<const PropertyRow> rows);

struct HeatmapTable {
  std::vector<std::string> row_names;
  std::vector<std::string> col_names;
  std::vector<std::optional<double>> values;  // row-major

  const std::optional<double>& at(std::size_t r, std::size_t c) const { return values[r * col_names.size() + c]; }

  std::string to_csv() const;
  static HeatmapTable from_csv(const std::string& text);

  friend bool operator==(const HeatmapTable&, const HeatmapTable&) = default;
};

// Cell value = mean of the recall and F1 correlations (undefined if either is).
HeatmapTable build_heatmap_table(std::span<const CorrelationCell> cells);
HeatmapTable build_heatmap_table(std::span<const CorrelationCell> cells, Target target);

inline constexpr std::string_view kQuartileRule = "median_of_halves_exclusive";

struct BoxplotRow {
  std::string metric;
  std::string target;  // "Recall", "F1" or "Pooled"
  std::size_t n = 0;
  FiveNumberSummary summary;

  friend bool operator==(const BoxplotRow& a, const BoxplotRow& b) {
    return a.metric == b.metric && a.target == b.target && a.n == b.n && a.summary.min == b.summary.min &&
           a.summary.q1 == b.summary.q1 && a.summary.median == b.summary.median && a.summary.q3 == b.summary.q3 &&
           a.summary.max == b.summary.max;
  }
};

struct BoxplotTable {
  std::vector<BoxplotRow> rows;  // study row order; Recall, F1, Pooled within a row

  std::vector<BoxplotRow> for_target(std::string_view target) const;
  std::string to_csv() const;
  static BoxplotTable from_csv(const std::string& text);

  friend bool operator==(const BoxplotTable&, const BoxplotTable&) = default;
};

BoxplotTable build_boxplot_table(std::span<const CorrelationCell> cells);

}  // namespace synthmetric
