#include "synthmetric/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <system_error>
#include <unordered_set>

namespace synthmetric {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MissingLabelColumn:
      return "MissingLabelColumn";
    case ErrorCode::NonNumericCell:
      return "NonNumericCell";
    case ErrorCode::EmptyDataset:
      return "EmptyDataset";
    case ErrorCode::ConstantLabel:
      return "ConstantLabel";
    case ErrorCode::InvalidLabel:
      return "InvalidLabel";
    case ErrorCode::InvalidArgument:
      return "InvalidArgument";
    case ErrorCode::TooFewSamplesPerClass:
      return "TooFewSamplesPerClass";
    case ErrorCode::TooFewNeighbors:
      return "TooFewNeighbors";
    case ErrorCode::DegenerateClass:
      return "DegenerateClass";
    case ErrorCode::SchemaMismatch:
      return "SchemaMismatch";
    case ErrorCode::TooFewFeatures:
      return "TooFewFeatures";
    case ErrorCode::NonBinaryFeature:
      return "NonBinaryFeature";
    case ErrorCode::TooFewRows:
      return "TooFewRows";
    case ErrorCode::InvalidWeights:
      return "InvalidWeights";
    case ErrorCode::TooFewRuns:
      return "TooFewRuns";
    case ErrorCode::InsufficientVariation:
      return "InsufficientVariation";
    case ErrorCode::SingleClass:
      return "SingleClass";
    case ErrorCode::LengthMismatch:
      return "LengthMismatch";
    case ErrorCode::NoDefinedCells:
      return "NoDefinedCells";
    case ErrorCode::TooFewCells:
      return "TooFewCells";
    case ErrorCode::TooFewFamilies:
      return "TooFewFamilies";
    case ErrorCode::EmptyTable:
      return "EmptyTable";
    case ErrorCode::EmptySummaries:
      return "EmptySummaries";
    case ErrorCode::ConfigInvalid:
      return "ConfigInvalid";
    case ErrorCode::Io:
      return "Io";
  }
  return "Unknown";
}

bool FeatureSchema::all_binary() const {
  return std::all_of(feature_kinds.begin(), feature_kinds.end(),
                     [](FeatureKind k) { return k == FeatureKind::Binary; });
}

void FeatureSchema::validate() const {
  if (feature_names.empty()) throw Error(ErrorCode::InvalidArgument, "schema has no features");
  if (feature_names.size() != feature_kinds.size())
    throw Error(ErrorCode::InvalidArgument, "feature names and kinds differ in length");
  std::unordered_set<std::string> seen;
  for (const auto& name : feature_names) {
    if (name.empty()) throw Error(ErrorCode::InvalidArgument, "empty feature name");
    if (!seen.insert(name).second) throw Error(ErrorCode::InvalidArgument, "duplicate feature name '" + name + "'");
  }
  if (seen.count(label_name) != 0)
    throw Error(ErrorCode::InvalidArgument, "label '" + label_name + "' is also a feature");
}

Dataset::Dataset(FeatureSchema schema, std::vector<double> values, std::vector<int> labels,
                 std::vector<std::int64_t> provenance, std::vector<FeatureRange> ranges)
    : schema_(std::move(schema)),
      values_(std::move(values)),
      labels_(std::move(labels)),
      provenance_(std::move(provenance)),
      ranges_(std::move(ranges)) {
  schema_.validate();
  const std::size_t d = schema_.size();
  if (values_.size() != labels_.size() * d)
    throw Error(ErrorCode::InvalidArgument, "value count does not match rows x features");
  if (provenance_.empty()) {
    provenance_.resize(labels_.size());
    for (std::size_t i = 0; i < provenance_.size(); ++i) provenance_[i] = static_cast<std::int64_t>(i);
  } else if (provenance_.size() != labels_.size()) {
    throw Error(ErrorCode::InvalidArgument, "provenance length does not match rows");
  }
  if (ranges_.empty()) ranges_.assign(d, FeatureRange{});
  if (ranges_.size() != d) throw Error(ErrorCode::InvalidArgument, "range count does not match features");
  for (int y : labels_)
    if (y != 0 && y != 1) throw Error(ErrorCode::InvalidLabel, "labels must be 0 or 1");
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const double v = values_[i * d + j];
      if (schema_.feature_kinds[j] == FeatureKind::Binary) {
        if (v != 0.0 && v != 1.0)
          throw Error(ErrorCode::NonBinaryFeature,
                      "binary feature '" + schema_.feature_names[j] + "' holds " + std::to_string(v));
      } else if (!(v >= 0.0 && v <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "continuous feature '" + schema_.feature_names[j] + "' outside [0,1]");
      }
    }
  }
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  const std::size_t d = cols();
  std::vector<double> values;
  values.reserve(indices.size() * d);
  std::vector<int> labels;
  std::vector<std::int64_t> provenance;
  labels.reserve(indices.size());
  provenance.reserve(indices.size());
  for (std::size_t idx : indices) {
    if (idx >= rows()) throw Error(ErrorCode::InvalidArgument, "subset index out of range");
    auto r = row(idx);
    values.insert(values.end(), r.begin(), r.end());
    labels.push_back(labels_[idx]);
    provenance.push_back(provenance_[idx]);
  }
  return Dataset(schema_, std::move(values), std::move(labels), std::move(provenance), ranges_);
}

Dataset Dataset::with_class(int cls) const {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < rows(); ++i)
    if (labels_[i] == cls) idx.push_back(i);
  return subset(idx);
}

std::vector<double> Dataset::means() const {
  std::vector<double> mu(cols(), 0.0);
  if (rows() == 0) return mu;
  for (std::size_t i = 0; i < rows(); ++i) {
    auto r = row(i);
    for (std::size_t j = 0; j < mu.size(); ++j) mu[j] += r[j];
  }
  for (double& m : mu) m /= static_cast<double>(rows());
  return mu;
}

ClassCounts class_counts(std::span<const int> labels) {
  ClassCounts counts;
  for (int y : labels) {
    if (y == 1)
      ++counts.n_malware;
    else
      ++counts.n_benign;
  }
  return counts;
}

namespace {

std::vector<std::string> split_fields(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    std::string_view field = line.substr(start, comma == std::string_view::npos ? line.npos : comma - start);
    while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
    while (!field.empty() && (field.back() == ' ' || field.back() == '\t')) field.remove_suffix(1);
    out.emplace_back(field);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

struct RawTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> cells;  // per row, header order
};

RawTable parse_raw(const std::string& text) {
  RawTable table;
  std::istringstream in(text);
  std::string line;
  bool have_header = false;
  std::size_t data_row = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!have_header) {
      if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
      if (line.empty()) continue;
      table.header = split_fields(line);
      have_header = true;
      continue;
    }
    if (line.empty()) continue;
    ++data_row;
    auto fields = split_fields(line);
    if (fields.size() != table.header.size())
      throw Error(ErrorCode::SchemaMismatch, "row " + std::to_string(data_row) + " has " +
                                                 std::to_string(fields.size()) + " fields, header has " +
                                                 std::to_string(table.header.size()));
    std::vector<double> row(fields.size());
    for (std::size_t j = 0; j < fields.size(); ++j) {
      const std::string& f = fields[j];
      const char* end = f.data() + f.size();
      auto [ptr, ec] = std::from_chars(f.data(), end, row[j]);
      if (f.empty() || ec != std::errc() || ptr != end || !std::isfinite(row[j]))
        throw NonNumericCellError(data_row - 1, j, f);  // 0-based, header excluded
    }
    table.cells.push_back(std::move(row));
  }
  if (!have_header || table.cells.empty()) throw Error(ErrorCode::EmptyDataset, "no data rows");
  return table;
}

std::size_t find_label(const RawTable& table, const std::string& label_name) {
  auto it = std::find(table.header.begin(), table.header.end(), label_name);
  if (it == table.header.end()) throw Error(ErrorCode::MissingLabelColumn, "column '" + label_name + "' not in header");
  return static_cast<std::size_t>(it - table.header.begin());
}

std::vector<int> extract_labels(const RawTable& table, std::size_t label_col) {
  std::vector<int> labels;
  labels.reserve(table.cells.size());
  for (std::size_t i = 0; i < table.cells.size(); ++i) {
    const double v = table.cells[i][label_col];
    if (v != 0.0 && v != 1.0)
      throw Error(ErrorCode::InvalidLabel, "row " + std::to_string(i + 1) + " label is not 0/1");
    labels.push_back(static_cast<int>(v));
  }
  return labels;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

Dataset parse_csv(const std::string& text, const std::string& label_name) {
  const RawTable table = parse_raw(text);
  const std::size_t label_col = find_label(table, label_name);
  std::vector<int> labels = extract_labels(table, label_col);
  const ClassCounts counts = class_counts(labels);
  if (counts.n_benign == 0 || counts.n_malware == 0)
    throw Error(ErrorCode::ConstantLabel, "label column holds a single class");

  FeatureSchema schema;
  schema.label_name = label_name;
  std::vector<std::size_t> source_cols;
  for (std::size_t j = 0; j < table.header.size(); ++j) {
    if (j == label_col) continue;
    schema.feature_names.push_back(table.header[j]);
    source_cols.push_back(j);
  }
  const std::size_t n = table.cells.size();
  const std::size_t d = source_cols.size();
  std::vector<FeatureRange> ranges(d);
  std::vector<double> values(n * d);
  for (std::size_t f = 0; f < d; ++f) {
    const std::size_t src = source_cols[f];
    double lo = table.cells[0][src];
    double hi = lo;
    bool binary = true;
    for (const auto& row : table.cells) {
      const double v = row[src];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      binary = binary && (v == 0.0 || v == 1.0);
    }
    schema.feature_kinds.push_back(binary ? FeatureKind::Binary : FeatureKind::Continuous);
    ranges[f] = binary ? FeatureRange{} : FeatureRange{lo, hi};
    const double span = hi - lo;
    for (std::size_t i = 0; i < n; ++i) {
      const double v = table.cells[i][src];
      values[i * d + f] = binary ? v : (span > 0.0 ? (v - lo) / span : 0.0);
    }
  }
  return Dataset(std::move(schema), std::move(values), std::move(labels), {}, std::move(ranges));
}

Dataset load_csv(const std::filesystem::path& path, const std::string& label_name) {
  return parse_csv(read_file(path), label_name);
}

Dataset load_csv_like(const std::filesystem::path& path, const Dataset& reference) {
  const RawTable table = parse_raw(read_file(path));
  const FeatureSchema& ref = reference.schema();
  std::vector<std::string> expected = ref.feature_names;
  const std::size_t label_col = [&] {
    auto it = std::find(table.header.begin(), table.header.end(), ref.label_name);
    if (it == table.header.end())
      throw Error(ErrorCode::SchemaMismatch, "label column '" + ref.label_name + "' missing");
    return static_cast<std::size_t>(it - table.header.begin());
  }();
  std::vector<std::string> got;
  for (std::size_t j = 0; j < table.header.size(); ++j)
    if (j != label_col) got.push_back(table.header[j]);
  if (got != expected)
    throw Error(ErrorCode::SchemaMismatch, "expected " + std::to_string(expected.size()) +
                                               " features matching the real header, got " + std::to_string(got.size()));
  std::vector<int> labels = extract_labels(table, label_col);
  const std::size_t n = table.cells.size();
  const std::size_t d = expected.size();
  std::vector<double> values(n * d);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t f = 0;
    for (std::size_t j = 0; j < table.header.size(); ++j) {
      if (j == label_col) continue;
      double v = table.cells[i][j];
      if (ref.feature_kinds[f] == FeatureKind::Binary) {
        if (v != 0.0 && v != 1.0)
          throw Error(ErrorCode::SchemaMismatch, "feature '" + expected[f] + "' is binary in the real data but row " +
                                                     std::to_string(i + 1) + " holds " + std::to_string(v));
      } else {
        const FeatureRange r = reference.ranges()[f];
        const double span = r.max - r.min;
        v = span > 0.0 ? std::clamp((v - r.min) / span, 0.0, 1.0) : 0.0;
      }
      values[i * d + f] = v;
      ++f;
    }
  }
  std::vector<std::int64_t> provenance(n, Dataset::kSyntheticRow);
  return Dataset(ref, std::move(values), std::move(labels), std::move(provenance), reference.ranges());
}

std::string to_csv(const Dataset& data) {
  std::string out;
  const auto& schema = data.schema();
  for (const auto& name : schema.feature_names) {
    out += name;
    out += ',';
  }
  out += schema.label_name;
  out += '\n';
  char buf[64];
  for (std::size_t i = 0; i < data.rows(); ++i) {
    for (double v : data.row(i)) {
      auto res = std::to_chars(buf, buf + sizeof(buf), v);
      out.append(buf, res.ptr);
      out += ',';
    }
    out += data.label(i) == 1 ? '1' : '0';
    out += '\n';
  }
  return out;
}

void write_csv(const Dataset& data, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << to_csv(data);
}

void require_same_schema(const Dataset& a, const Dataset& b) {
  const auto& sa = a.schema();
  const auto& sb = b.schema();
  if (sa.feature_names != sb.feature_names || sa.feature_kinds != sb.feature_kinds)
    throw Error(ErrorCode::SchemaMismatch, "datasets have different feature schemas");
}

std::vector<std::size_t> FoldPlan::test_indices(std::size_t fold) const {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < assignments.size(); ++i)
    if (assignments[i] == fold) idx.push_back(i);
  return idx;
}

std::vector<std::size_t> FoldPlan::train_indices(std::size_t fold) const {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < assignments.size(); ++i)
    if (assignments[i] != fold) idx.push_back(i);
  return idx;
}

FoldPlan stratified_kfold(const Dataset& data, std::size_t k, RngSeed seed) {
  if (k < 2) throw Error(ErrorCode::InvalidArgument, "k must be at least 2");
  FoldPlan plan;
  plan.k = k;
  plan.assignments.assign(data.rows(), 0);
  // Class 1's round-robin starts where class 0's left off so fold sizes stay level too.
  std::size_t offset = 0;
  for (int cls = 0; cls <= 1; ++cls) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < data.rows(); ++i)
      if (data.label(i) == cls) members.push_back(i);
    if (members.size() < k)
      throw Error(ErrorCode::TooFewSamplesPerClass, "class " + std::to_string(cls) + " has " +
                                                        std::to_string(members.size()) +
                                                        " samples, need at least k=" + std::to_string(k));
    Rng rng(derive_seed(seed, "stratified_kfold", cls));
    for (std::size_t i = members.size(); i > 1; --i) std::swap(members[i - 1], members[rng.below(i)]);
    for (std::size_t pos = 0; pos < members.size(); ++pos) plan.assignments[members[pos]] = (offset + pos) % k;
    offset = (offset + members.size()) % k;
  }
  return plan;
}

}  // namespace synthmetric
