#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "synthmetric/analysis.hpp"
#include "synthmetric/config.hpp"
#include "synthmetric/supermetric.hpp"

namespace synthmetric {

struct RunFailure {
  std::string dataset;
  std::string generator;
  std::optional<std::size_t> fold;
  std::string error;
};

struct AnalysisOutput {
  std::map<std::string, FitResult> fits;  // by dataset
  CorrelationStudy study;
  std::vector<PropertyRow> properties;
  std::vector<std::string> notes;  // e.g. datasets that fell back to uniform weights
};

struct PipelineResult {
  std::filesystem::path root;
  std::vector<RunRecord> records;  // sorted by (dataset, generator, fold)
  std::vector<RunFailure> failures;
  AnalysisOutput analysis;
};

// Result tree under <out_dir>/<run_id>/:
//   runs/<dataset>/<generator>/<TSTR|TRTR>/<classifier>/fold_<i>.json
//   runs/<dataset>/<generator>/fidelity/fold_<i>.json
//   analysis/weights_<dataset>.json, heatmap*.csv, boxplot.csv, properties.csv, cells.json
//   figures/heatmap.svg, figures/boxplot.svg
//   manifest.json
// Output bytes depend only on the config (and its seed), never on `jobs`.
PipelineResult run_pipeline(const RunConfig& cfg, int jobs = 1);

RunConfig read_manifest_config(const std::filesystem::path& run_dir);

// Rebuilds RunRecords from the persisted run tree, external generators included.
std::vector<RunRecord> read_run_records(const std::filesystem::path& run_dir, const RunConfig& cfg);

// Recomputes weights, analysis tables and figures from persisted runs.
AnalysisOutput rebuild_report(const std::filesystem::path& run_dir);

// Evaluates a synthetic CSV produced outside this tool against dataset `real_id` of an
// existing run, persists it as generator `generator_id` (external=true) and refreshes the
// analysis so it shows up as an extra generator.
std::vector<RunRecord> ingest_external_synthetic(const std::filesystem::path& run_dir, const std::string& real_id,
                                                 const std::filesystem::path& syn_csv, const std::string& generator_id);

// Refits one dataset's weights. With a lambda override the result goes to
// weights_<dataset>_lambda_<x>.json so the persisted analysis stays consistent.
FitResult refit_weights(const std::filesystem::path& run_dir, const std::string& dataset_id,
                        std::optional<double> lambda_gap = std::nullopt);

}  // namespace synthmetric
