#include "synthmetric/pipeline.hpp"

#include <omp.h>

#include <algorithm>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>
#include <tuple>

#include "synthmetric/svg.hpp"
#include "synthmetric/text.hpp"
#include "synthmetric/tstr.hpp"

#ifndef SYNTHMETRIC_VERSION
#define SYNTHMETRIC_VERSION "0.0.0"
#endif

namespace synthmetric {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kExternalMarker = "external.json";

void write_text(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << content;
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

void write_json(const fs::path& path, const json& doc) { write_text(path, doc.dump(2) + "\n"); }

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Io, path.string() + ": " + e.what());
  }
}

std::string fold_file(std::size_t fold) { return "fold_" + std::to_string(fold) + ".json"; }

json fidelity_json(const FidelityVector& v) {
  json scores = json::object();
  for (MetricId id : kAllMetrics) scores[std::string(to_string(id))] = v[id];
  return scores;
}

FidelityVector fidelity_from_json(const json& scores) {
  FidelityVector v;
  for (MetricId id : kAllMetrics) v[id] = scores.at(std::string(to_string(id))).get<double>();
  return v;
}

json weights_json(const WeightVector& w) {
  json out = json::object();
  for (MetricId id : kAllMetrics) out[std::string(to_string(id))] = w[id];
  return out;
}

json report_json(const UtilityReport& r, const ClassifierSpec& spec, const std::string& dataset,
                 const std::string& generator, bool external) {
  json hyper = json::object();
  for (const auto& [name, value] : spec.hyperparameters()) hyper[name] = value;
  return json{{"dataset", dataset},
              {"generator", generator},
              {"strategy", std::string(to_string(r.strategy))},
              {"classifier", std::string(to_string(r.classifier))},
              {"hyperparameters", std::move(hyper)},
              {"fold", r.fold},
              {"precision", r.precision},
              {"recall", r.recall},
              {"f1", r.f1},
              {"auc_roc", r.auc_roc},
              {"external", external}};
}

void write_tstr_result(const fs::path& root, const std::string& dataset, const std::string& generator,
                       const TstrResult& result, std::span<const ClassifierSpec> classifiers, bool external) {
  const fs::path base = root / "runs" / dataset / generator;
  for (const auto& r : result.reports) {
    const auto spec = std::find_if(classifiers.begin(), classifiers.end(),
                                   [&](const ClassifierSpec& c) { return c.kind == r.classifier; });
    write_json(base / std::string(to_string(r.strategy)) / std::string(to_string(r.classifier)) / fold_file(r.fold),
               report_json(r, *spec, dataset, generator, external));
  }
  for (std::size_t fold = 0; fold < result.fidelity.size(); ++fold) {
    json doc{{"dataset", dataset},
             {"generator", generator},
             {"fold", fold},
             {"scores", fidelity_json(result.fidelity[fold])},
             {"synthetic_rows", result.synthetic_rows[fold]},
             {"external", external}};
    write_json(base / "fidelity" / fold_file(fold), doc);
  }
}

std::vector<RunRecord> records_of(const std::string& dataset, const std::string& generator, const TstrResult& result,
                                  std::size_t k, bool external) {
  const auto utility = mean_tstr_utility(result.reports, k);
  std::vector<RunRecord> out;
  for (std::size_t fold = 0; fold < k; ++fold) {
    RunRecord r;
    r.dataset_id = dataset;
    r.generator_id = generator;
    r.fold = fold;
    r.fidelity = result.fidelity[fold];
    r.recall = utility[fold].recall;
    r.f1 = utility[fold].f1;
    r.external = external;
    out.push_back(std::move(r));
  }
  return out;
}

void sort_records(std::vector<RunRecord>& records) {
  std::sort(records.begin(), records.end(), [](const RunRecord& a, const RunRecord& b) {
    return std::tie(a.dataset_id, a.generator_id, a.fold) < std::tie(b.dataset_id, b.generator_id, b.fold);
  });
}

std::string cells_json(const CorrelationStudy& study, bool spearman) {
  json cells = json::array();
  for (const auto& c : study.cells) {
    cells.push_back(json{{"generator", c.generator_id},
                         {"metric", std::string(study_row_name(c.metric))},
                         {"target", std::string(to_string(c.target))},
                         {"rho", c.rho ? json(*c.rho) : json(nullptr)},
                         {"n_points", c.n_points}});
  }
  json doc{{"method", spearman ? "spearman" : "pearson"},
           {"pooling_axis", "dataset_x_fold"},
           {"heatmap_value", "mean_of_recall_and_f1_correlations"},
           {"undefined_cells", study.undefined_cells},
           {"cells", std::move(cells)}};
  return doc.dump(2) + "\n";
}

std::map<std::string, std::string> families(const fs::path& root, const RunConfig& cfg) {
  std::map<std::string, std::string> out;
  for (const auto& g : cfg.generators) out[g.id] = g.family;
  const fs::path runs = root / "runs";
  if (!fs::exists(runs)) return out;
  for (const auto& ds : cfg.datasets) {
    const fs::path dir = runs / ds.id;
    if (!fs::exists(dir)) continue;
    for (const auto& entry : fs::directory_iterator(dir)) {
      const fs::path marker = entry.path() / kExternalMarker;
      if (fs::exists(marker)) out[entry.path().filename().string()] = read_json(marker).value("family", "external");
    }
  }
  return out;
}

AnalysisOutput write_analysis(const fs::path& root, std::vector<RunRecord> records, const RunConfig& cfg) {
  sort_records(records);
  AnalysisOutput out;
  std::map<std::string, WeightVector> weights;
  for (const auto& ds : cfg.datasets) {
    std::vector<RunRecord> subset;
    for (const auto& r : records)
      if (r.dataset_id == ds.id) subset.push_back(r);
    if (subset.empty()) continue;
    FitConfig fit = cfg.fit;
    fit.seed = derive_seed(cfg.seed, "fit", ds.id);
    json doc{{"dataset", ds.id},
             {"lambda_gap", fit.lambda_gap},
             {"n_random", fit.n_random},
             {"refine_passes", fit.refine_passes},
             {"refine_step", fit.refine_step},
             {"n_runs", subset.size()}};
    try {
      const FitResult result = fit_weights(subset, fit);
      out.fits[ds.id] = result;
      weights[ds.id] = result.weights;
      doc["status"] = "fitted";
      doc["weights"] = weights_json(result.weights);
      doc["objective"] = result.objective;
      doc["corr_recall"] = result.corr_recall;
      doc["corr_f1"] = result.corr_f1;
    } catch (const Error& e) {
      weights[ds.id] = WeightVector::uniform();
      doc["status"] = "fallback_uniform";
      doc["error"] = e.what();
      doc["weights"] = weights_json(WeightVector::uniform());
      out.notes.push_back("dataset " + ds.id + ": " + e.what() + " (uniform weights used)");
    }
    write_json(root / "analysis" / ("weights_" + ds.id + ".json"), doc);
  }

  out.study = per_generator_correlations(records, weights,
                                         cfg.spearman ? CorrelationMethod::Spearman : CorrelationMethod::Pearson);
  const auto& cells = out.study.cells;
  out.properties = summarize_properties(cells, families(root, cfg));

  const fs::path analysis = root / "analysis";
  write_text(analysis / "cells.json", cells_json(out.study, cfg.spearman));
  write_text(analysis / "properties.csv", properties_to_csv(out.properties));
  const HeatmapTable heatmap = build_heatmap_table(cells);
  write_text(analysis / "heatmap.csv", heatmap.to_csv());
  write_text(analysis / "heatmap_recall.csv", build_heatmap_table(cells, Target::Recall).to_csv());
  write_text(analysis / "heatmap_f1.csv", build_heatmap_table(cells, Target::F1).to_csv());

  // Rows without a single defined correlation cannot be summarized as boxes.
  std::vector<CorrelationCell> boxable;
  std::set<std::size_t> defined_rows;
  for (const auto& c : cells)
    if (c.rho) defined_rows.insert(c.metric);
  for (const auto& c : cells)
    if (defined_rows.count(c.metric) != 0) boxable.push_back(c);
  if (defined_rows.size() < kStudyRows)
    out.notes.push_back(std::to_string(kStudyRows - defined_rows.size()) + " study rows have no defined correlation");
  const BoxplotTable boxplot = build_boxplot_table(boxable);
  write_text(analysis / "boxplot.csv", boxplot.to_csv());

  // Figures are rendered from the tables as persisted.
  write_text(root / "figures" / "heatmap.svg", render_heatmap_svg(HeatmapTable::from_csv(heatmap.to_csv())));
  const BoxplotTable persisted = BoxplotTable::from_csv(boxplot.to_csv());
  write_text(root / "figures" / "boxplot.svg",
             persisted.rows.empty()
                 ? render_notice_svg("Correlation with utility across generators", "no defined correlation cells")
                 : render_boxplot_svg(persisted));
  return out;
}

void prepare_root(const fs::path& root) {
  if (fs::exists(root)) {
    if (fs::exists(root / "manifest.json")) {
      fs::remove_all(root);
    } else if (!fs::is_empty(root)) {
      throw Error(ErrorCode::ConfigInvalid,
                  "refusing to overwrite non-empty directory without manifest: " + root.string());
    }
  }
  fs::create_directories(root);
}

struct Task {
  std::size_t dataset = 0;
  std::size_t generator = 0;
  std::optional<TstrResult> result;
  std::optional<RunFailure> failure;
};

}  // namespace

PipelineResult run_pipeline(const RunConfig& cfg, int jobs) {
  cfg.validate();
  PipelineResult out;
  out.root = cfg.out_dir / cfg.run_id;
  prepare_root(out.root);
  // Placeholder so an interrupted run can still be overwritten later.
  write_json(out.root / "manifest.json", json{{"tool", "synthmetric"}, {"status", "incomplete"}});

  std::vector<std::optional<Dataset>> data(cfg.datasets.size());
  for (std::size_t i = 0; i < cfg.datasets.size(); ++i) {
    try {
      data[i] = load_dataset(cfg.datasets[i]);
    } catch (const Error& e) {
      out.failures.push_back({cfg.datasets[i].id, "", std::nullopt, e.what()});
    }
  }

  std::vector<Task> tasks;
  for (std::size_t d = 0; d < data.size(); ++d)
    if (data[d])
      for (std::size_t g = 0; g < cfg.generators.size(); ++g) tasks.push_back({d, g, std::nullopt, std::nullopt});

  const auto n_tasks = static_cast<std::ptrdiff_t>(tasks.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(std::max(1, jobs))
  for (std::ptrdiff_t t = 0; t < n_tasks; ++t) {
    Task& task = tasks[static_cast<std::size_t>(t)];
    const auto& ds = cfg.datasets[task.dataset];
    const auto& gen = cfg.generators[task.generator];
    try {
      task.result =
          run_tstr(*data[task.dataset], gen, cfg.classifiers, cfg.k_folds, derive_seed(cfg.seed, "dataset", ds.id));
    } catch (const FoldError& e) {
      task.failure = RunFailure{ds.id, gen.id, e.fold(), e.what()};
    } catch (const std::exception& e) {
      task.failure = RunFailure{ds.id, gen.id, std::nullopt, e.what()};
    }
  }

  // Single writer, in task order.
  for (const Task& task : tasks) {
    const auto& ds = cfg.datasets[task.dataset];
    const auto& gen = cfg.generators[task.generator];
    if (task.failure) {
      out.failures.push_back(*task.failure);
      continue;
    }
    write_tstr_result(out.root, ds.id, gen.id, *task.result, cfg.classifiers, false);
    auto recs = records_of(ds.id, gen.id, *task.result, cfg.k_folds, false);
    out.records.insert(out.records.end(), recs.begin(), recs.end());
  }
  sort_records(out.records);
  out.analysis = write_analysis(out.root, out.records, cfg);

  json failures = json::array();
  for (const auto& f : out.failures) {
    failures.push_back(json{{"dataset", f.dataset},
                            {"generator", f.generator},
                            {"fold", f.fold ? json(*f.fold) : json(nullptr)},
                            {"error", f.error}});
  }
  json notes = json::array();
  for (const auto& n : out.analysis.notes) notes.push_back(n);
  // The tree must not depend on where it was written.
  json config = cfg.to_json();
  config.erase("out_dir");
  write_json(out.root / "manifest.json", json{{"tool", "synthmetric"},
                                              {"version", SYNTHMETRIC_VERSION},
                                              {"seed", cfg.seed.value},
                                              {"run_id", cfg.run_id},
                                              {"config", std::move(config)},
                                              {"failures", std::move(failures)},
                                              {"notes", std::move(notes)}});
  return out;
}

RunConfig read_manifest_config(const fs::path& run_dir) {
  const fs::path manifest = run_dir / "manifest.json";
  if (!fs::exists(manifest)) throw Error(ErrorCode::ConfigInvalid, "no manifest.json in " + run_dir.string());
  return RunConfig::from_json(read_json(manifest).at("config"));
}

std::vector<RunRecord> read_run_records(const fs::path& run_dir, const RunConfig& cfg) {
  std::vector<RunRecord> out;
  for (const auto& ds : cfg.datasets) {
    const fs::path dir = run_dir / "runs" / ds.id;
    if (!fs::exists(dir)) continue;
    std::set<std::string> generators;
    for (const auto& g : cfg.generators) generators.insert(g.id);
    for (const auto& entry : fs::directory_iterator(dir))
      if (fs::exists(entry.path() / kExternalMarker)) generators.insert(entry.path().filename().string());
    for (const auto& gen : generators) {
      const fs::path base = dir / gen;
      if (!fs::exists(base / "fidelity")) continue;
      const bool external = fs::exists(base / kExternalMarker);
      for (std::size_t fold = 0; fold < cfg.k_folds; ++fold) {
        const fs::path fid = base / "fidelity" / fold_file(fold);
        if (!fs::exists(fid)) continue;
        RunRecord r;
        r.dataset_id = ds.id;
        r.generator_id = gen;
        r.fold = fold;
        r.external = external;
        r.fidelity = fidelity_from_json(read_json(fid).at("scores"));
        double n = 0.0;
        for (const auto& c : cfg.classifiers) {
          const fs::path rep = base / "TSTR" / std::string(to_string(c.kind)) / fold_file(fold);
          const json doc = read_json(rep);
          r.recall += doc.at("recall").get<double>();
          r.f1 += doc.at("f1").get<double>();
          n += 1.0;
        }
        r.recall /= n;
        r.f1 /= n;
        out.push_back(std::move(r));
      }
    }
  }
  sort_records(out);
  return out;
}

AnalysisOutput rebuild_report(const fs::path& run_dir) {
  const RunConfig cfg = read_manifest_config(run_dir);
  for (const char* dir : {"analysis", "figures"}) fs::remove_all(run_dir / dir);
  return write_analysis(run_dir, read_run_records(run_dir, cfg), cfg);
}

std::vector<RunRecord> ingest_external_synthetic(const fs::path& run_dir, const std::string& real_id,
                                                 const fs::path& syn_csv, const std::string& generator_id) {
  const RunConfig cfg = read_manifest_config(run_dir);
  const auto entry =
      std::find_if(cfg.datasets.begin(), cfg.datasets.end(), [&](const DatasetEntry& d) { return d.id == real_id; });
  if (entry == cfg.datasets.end()) throw Error(ErrorCode::ConfigInvalid, "run has no dataset '" + real_id + "'");
  if (std::any_of(cfg.generators.begin(), cfg.generators.end(),
                  [&](const GeneratorSpec& g) { return g.id == generator_id; }))
    throw Error(ErrorCode::ConfigInvalid, "generator id '" + generator_id + "' is already used by the run");
  RunConfig probe = cfg;
  probe.generators = {GeneratorSpec{generator_id, GeneratorKind::NoisyCopy, 5, 0.0, "external"}};
  probe.validate();

  const Dataset real = load_dataset(*entry);
  const Dataset synthetic = load_csv_like(syn_csv, real);
  const TstrResult result =
      run_tstr_external(real, synthetic, cfg.classifiers, cfg.k_folds, derive_seed(cfg.seed, "dataset", real_id));
  const fs::path base = run_dir / "runs" / real_id / generator_id;
  fs::remove_all(base);
  write_tstr_result(run_dir, real_id, generator_id, result, cfg.classifiers, true);
  write_json(base / kExternalMarker, json{{"generator", generator_id},
                                          {"family", "external"},
                                          {"source", syn_csv.filename().string()},
                                          {"rows", synthetic.rows()},
                                          {"fold_protocol", "synthetic set reused across folds"}});
  rebuild_report(run_dir);
  return records_of(real_id, generator_id, result, cfg.k_folds, true);
}

FitResult refit_weights(const fs::path& run_dir, const std::string& dataset_id, std::optional<double> lambda_gap) {
  const RunConfig cfg = read_manifest_config(run_dir);
  std::vector<RunRecord> subset;
  for (auto& r : read_run_records(run_dir, cfg))
    if (r.dataset_id == dataset_id) subset.push_back(std::move(r));
  if (subset.empty()) throw Error(ErrorCode::ConfigInvalid, "no runs for dataset '" + dataset_id + "'");
  FitConfig fit = cfg.fit;
  fit.seed = derive_seed(cfg.seed, "fit", dataset_id);
  if (lambda_gap) fit.lambda_gap = *lambda_gap;
  const FitResult result = fit_weights(subset, fit);
  json doc{{"dataset", dataset_id},
           {"lambda_gap", fit.lambda_gap},
           {"n_random", fit.n_random},
           {"refine_passes", fit.refine_passes},
           {"refine_step", fit.refine_step},
           {"n_runs", subset.size()},
           {"status", "fitted"},
           {"weights", weights_json(result.weights)},
           {"objective", result.objective},
           {"corr_recall", result.corr_recall},
           {"corr_f1", result.corr_f1}};
  const std::string name = lambda_gap ? "weights_" + dataset_id + "_lambda_" + shortest(*lambda_gap) + ".json"
                                      : "weights_" + dataset_id + ".json";
  write_json(run_dir / "analysis" / name, doc);
  return result;
}

}  // namespace synthmetric
