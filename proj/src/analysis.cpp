#include "synthmetric/analysis.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "synthmetric/text.hpp"

namespace synthmetric {

std::string_view study_row_name(std::size_t row) {
  if (row < kMetricCount) return to_string(kAllMetrics[row]);
  if (row == kSuperMetricRow) return "SuperMetric";
  throw Error(ErrorCode::InvalidArgument, "study row out of range");
}

std::size_t study_row_from_name(std::string_view name) {
  for (std::size_t r = 0; r < kStudyRows; ++r)
    if (study_row_name(r) == name) return r;
  throw Error(ErrorCode::InvalidArgument, "unknown study row '" + std::string(name) + "'");
}

std::string_view to_string(Target t) { return t == Target::Recall ? "Recall" : "F1"; }

Target target_from_string(std::string_view name) {
  if (name == "Recall") return Target::Recall;
  if (name == "F1") return Target::F1;
  throw Error(ErrorCode::InvalidArgument, "unknown target '" + std::string(name) + "'");
}

CorrelationStudy per_generator_correlations(std::span<const RunRecord> runs,
                                            const std::map<std::string, WeightVector>& weights_by_dataset,
                                            CorrelationMethod method) {
  std::map<std::string, std::vector<const RunRecord*>> by_generator;
  for (const auto& r : runs) by_generator[r.generator_id].push_back(&r);

  CorrelationStudy study;
  for (const auto& [generator, members] : by_generator) {
    // Every study row, the super-metric included, becomes one column of per-run scores.
    std::vector<std::vector<double>> columns(kStudyRows);
    std::vector<double> recall;
    std::vector<double> f1;
    for (const RunRecord* r : members) {
      for (std::size_t m = 0; m < kMetricCount; ++m) columns[m].push_back(r->fidelity.scores[m]);
      auto w = weights_by_dataset.find(r->dataset_id);
      if (w == weights_by_dataset.end())
        throw Error(ErrorCode::InvalidArgument, "no fitted weights for dataset '" + r->dataset_id + "'");
      columns[kSuperMetricRow].push_back(score(w->second, r->fidelity));
      recall.push_back(r->recall);
      f1.push_back(r->f1);
    }
    for (std::size_t row = 0; row < kStudyRows; ++row) {
      for (Target target : {Target::Recall, Target::F1}) {
        CorrelationCell cell;
        cell.generator_id = generator;
        cell.metric = row;
        cell.target = target;
        cell.n_points = members.size();
        const auto& y = target == Target::Recall ? recall : f1;
        try {
          cell.rho =
              method == CorrelationMethod::Pearson ? pearson_corr(columns[row], y) : spearman_corr(columns[row], y);
        } catch (const Error& e) {
          if (e.code() != ErrorCode::InsufficientVariation && e.code() != ErrorCode::LengthMismatch) throw;
          ++study.undefined_cells;
        }
        study.cells.push_back(std::move(cell));
      }
    }
  }
  return study;
}

std::vector<CorrelationCell> select_cells(std::span<const CorrelationCell> cells, std::size_t row, Target target) {
  std::vector<CorrelationCell> out;
  for (const auto& c : cells)
    if (c.metric == row && c.target == target) out.push_back(c);
  return out;
}

namespace {

std::vector<double> defined_rhos(std::span<const CorrelationCell> cells) {
  std::vector<double> out;
  for (const auto& c : cells)
    if (c.rho) out.push_back(*c.rho);
  return out;
}

}  // namespace

double sign_consistency(std::span<const CorrelationCell> cells) {
  const auto rhos = defined_rhos(cells);
  if (rhos.empty()) throw Error(ErrorCode::NoDefinedCells, "no defined correlations");
  const auto positive = std::count_if(rhos.begin(), rhos.end(), [](double r) { return r > 0.0; });
  const auto negative = std::count_if(rhos.begin(), rhos.end(), [](double r) { return r < 0.0; });
  const auto zero = static_cast<std::ptrdiff_t>(rhos.size()) - positive - negative;
  const auto matching = (positive >= negative ? positive : negative) + zero;
  return static_cast<double>(matching) / static_cast<double>(rhos.size());
}

double stability_std(std::span<const CorrelationCell> cells) {
  const auto rhos = defined_rhos(cells);
  if (rhos.size() < 2) throw Error(ErrorCode::TooFewCells, "stability needs at least 2 defined cells");
  return population_std(rhos);
}

double robustness_range(std::span<const CorrelationCell> cells, const std::map<std::string, std::string>& family_of) {
  std::map<std::string, std::vector<double>> by_family;
  for (const auto& c : cells) {
    if (!c.rho) continue;
    auto it = family_of.find(c.generator_id);
    if (it == family_of.end())
      throw Error(ErrorCode::InvalidArgument, "generator '" + c.generator_id + "' has no family tag");
    by_family[it->second].push_back(*c.rho);
  }
  if (by_family.size() < 2) throw Error(ErrorCode::TooFewFamilies, "robustness needs at least 2 families");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const auto& [family, rhos] : by_family) {
    const double m = mean(rhos);
    lo = std::min(lo, m);
    hi = std::max(hi, m);
  }
  return hi - lo;
}

std::vector<PropertyRow> summarize_properties(std::span<const CorrelationCell> cells,
                                              const std::map<std::string, std::string>& family_of) {
  std::vector<PropertyRow> out;
  for (std::size_t row = 0; row < kStudyRows; ++row) {
    for (Target target : {Target::Recall, Target::F1}) {
      const auto selected = select_cells(cells, row, target);
      if (selected.empty()) continue;
      PropertyRow p;
      p.metric = row;
      p.target = target;
      p.defined_cells = defined_rhos(selected).size();
      if (p.defined_cells >= 1) p.consistency = sign_consistency(selected);
      if (p.defined_cells >= 2) p.stability_std = stability_std(selected);
      try {
        p.robustness_range = robustness_range(selected, family_of);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::TooFewFamilies) throw;
      }
      out.push_back(p);
    }
  }
  return out;
}

namespace {

std::string optional_cell(const std::optional<double>& v) { return v ? shortest(*v) : std::string(); }

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

double parse_double(const std::string& s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw Error(ErrorCode::InvalidArgument, "not a number: '" + s + "'");
  return v;
}

}  // namespace

std::string properties_to_csv(std::span<const PropertyRow> rows) {
  std::string out = "metric,target,defined_cells,consistency,stability_std,robustness_range\n";
  for (const auto& p : rows) {
    out += std::string(study_row_name(p.metric)) + ',' + std::string(to_string(p.target)) + ',' +
           std::to_string(p.defined_cells) + ',' + optional_cell(p.consistency) + ',' + optional_cell(p.stability_std) +
           ',' + optional_cell(p.robustness_range) + '\n';
  }
  return out;
}

std::string HeatmapTable::to_csv() const {
  std::string out = "metric";
  for (const auto& c : col_names) out += ',' + c;
  out += '\n';
  for (std::size_t r = 0; r < row_names.size(); ++r) {
    out += row_names[r];
    for (std::size_t c = 0; c < col_names.size(); ++c) out += ',' + optional_cell(at(r, c));
    out += '\n';
  }
  return out;
}

HeatmapTable HeatmapTable::from_csv(const std::string& text) {
  const auto lines = lines_of(text);
  if (lines.empty()) throw Error(ErrorCode::EmptyTable, "heatmap CSV has no header");
  HeatmapTable t;
  auto header = split(lines[0]);
  t.col_names.assign(header.begin() + 1, header.end());
  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto fields = split(lines[i]);
    if (fields.size() != header.size()) throw Error(ErrorCode::InvalidArgument, "ragged heatmap CSV");
    t.row_names.push_back(fields[0]);
    for (std::size_t c = 1; c < fields.size(); ++c)
      t.values.push_back(fields[c].empty() ? std::nullopt : std::optional<double>(parse_double(fields[c])));
  }
  return t;
}

namespace {

HeatmapTable heatmap_skeleton(std::span<const CorrelationCell> cells) {
  std::set<std::string> generators;
  std::set<std::size_t> rows;
  for (const auto& c : cells) {
    generators.insert(c.generator_id);
    rows.insert(c.metric);
  }
  HeatmapTable t;
  for (std::size_t r : rows) t.row_names.emplace_back(study_row_name(r));
  t.col_names.assign(generators.begin(), generators.end());
  t.values.assign(t.row_names.size() * t.col_names.size(), std::nullopt);
  return t;
}

template <typename CellValue>
HeatmapTable fill_heatmap(std::span<const CorrelationCell> cells, CellValue value) {
  HeatmapTable t = heatmap_skeleton(cells);
  for (std::size_t r = 0; r < t.row_names.size(); ++r) {
    const std::size_t row = study_row_from_name(t.row_names[r]);
    for (std::size_t c = 0; c < t.col_names.size(); ++c) {
      std::optional<double> recall;
      std::optional<double> f1;
      bool seen_recall = false;
      bool seen_f1 = false;
      for (const auto& cell : cells) {
        if (cell.metric != row || cell.generator_id != t.col_names[c]) continue;
        if (cell.target == Target::Recall) {
          recall = cell.rho;
          seen_recall = true;
        } else {
          f1 = cell.rho;
          seen_f1 = true;
        }
      }
      t.values[r * t.col_names.size() + c] = value(seen_recall ? recall : std::nullopt, seen_f1 ? f1 : std::nullopt);
    }
  }
  return t;
}

}  // namespace

HeatmapTable build_heatmap_table(std::span<const CorrelationCell> cells) {
  return fill_heatmap(cells, [](std::optional<double> r, std::optional<double> f) -> std::optional<double> {
    if (!r || !f) return std::nullopt;
    return 0.5 * (*r + *f);
  });
}

HeatmapTable build_heatmap_table(std::span<const CorrelationCell> cells, Target target) {
  return fill_heatmap(
      cells, [target](std::optional<double> r, std::optional<double> f) { return target == Target::Recall ? r : f; });
}

std::vector<BoxplotRow> BoxplotTable::for_target(std::string_view target) const {
  std::vector<BoxplotRow> out;
  for (const auto& r : rows)
    if (r.target == target) out.push_back(r);
  return out;
}

std::string BoxplotTable::to_csv() const {
  std::string out = "metric,target,n,min,q1,median,q3,max,quartile_rule\n";
  for (const auto& r : rows) {
    out += r.metric + ',' + r.target + ',' + std::to_string(r.n) + ',' + shortest(r.summary.min) + ',' +
           shortest(r.summary.q1) + ',' + shortest(r.summary.median) + ',' + shortest(r.summary.q3) + ',' +
           shortest(r.summary.max) + ',' + std::string(kQuartileRule) + '\n';
  }
  return out;
}

BoxplotTable BoxplotTable::from_csv(const std::string& text) {
  const auto lines = lines_of(text);
  if (lines.empty()) throw Error(ErrorCode::EmptySummaries, "boxplot CSV has no header");
  BoxplotTable t;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto f = split(lines[i]);
    if (f.size() != 9) throw Error(ErrorCode::InvalidArgument, "boxplot CSV row needs 9 fields");
    BoxplotRow r;
    r.metric = f[0];
    r.target = f[1];
    r.n = static_cast<std::size_t>(parse_double(f[2]));
    r.summary = {parse_double(f[3]), parse_double(f[4]), parse_double(f[5]), parse_double(f[6]), parse_double(f[7])};
    t.rows.push_back(std::move(r));
  }
  return t;
}

BoxplotTable build_boxplot_table(std::span<const CorrelationCell> cells) {
  std::set<std::size_t> rows;
  for (const auto& c : cells) rows.insert(c.metric);
  BoxplotTable table;
  for (std::size_t row : rows) {
    std::vector<double> pooled;
    std::vector<BoxplotRow> per_target;
    for (Target target : {Target::Recall, Target::F1}) {
      const auto rhos = defined_rhos(select_cells(cells, row, target));
      pooled.insert(pooled.end(), rhos.begin(), rhos.end());
      if (rhos.empty()) continue;
      per_target.push_back(
          {std::string(study_row_name(row)), std::string(to_string(target)), rhos.size(), five_number_summary(rhos)});
    }
    if (pooled.empty())
      throw Error(ErrorCode::NoDefinedCells, "no defined correlations for " + std::string(study_row_name(row)));
    table.rows.insert(table.rows.end(), per_target.begin(), per_target.end());
    table.rows.push_back({std::string(study_row_name(row)), "Pooled", pooled.size(), five_number_summary(pooled)});
  }
  return table;
}

}  // namespace synthmetric
