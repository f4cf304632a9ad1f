#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "synthmetric/pipeline.hpp"
#include "synthmetric/text.hpp"

using namespace synthmetric;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

std::optional<std::uint64_t> env_seed() {
  const char* raw = std::getenv("SYNTHMETRIC_SEED");
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  try {
    std::size_t used = 0;
    const auto v = std::stoull(raw, &used);
    if (used != std::string(raw).size()) throw std::invalid_argument(raw);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::ConfigInvalid, std::string("SYNTHMETRIC_SEED is not an unsigned integer: ") + raw);
  }
}

void print_summary(const AnalysisOutput& a) {
  for (const auto& [ds, fit] : a.fits) {
    std::cout << "weights " << ds << ":";
    for (MetricId id : kAllMetrics) std::cout << ' ' << to_string(id) << '=' << fixed(fit.weights[id], 3);
    std::cout << "  J=" << fixed(fit.objective, 4) << '\n';
  }
  std::cout << "correlation cells: " << a.study.cells.size() << " (" << a.study.undefined_cells << " undefined)\n";
  for (const auto& n : a.notes) std::cout << "note: " << n << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fidelity metrics, super-metric and utility benchmark for synthetic tabular data"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  int jobs = 1;
  auto* run = app.add_subcommand("run", "Run the full benchmark");
  run->add_option("--config", config_path, "JSON config (defaults to the builtin default config)");
  run->add_option("--seed", seed, "Overrides config seed and SYNTHMETRIC_SEED");
  run->add_option("--out", out_dir, "Output directory (run_id is appended)");
  run->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

  std::string run_dir;
  std::string real_id;
  std::string syn_csv;
  std::string as_id;
  auto* ingest = app.add_subcommand("ingest", "Evaluate an externally generated synthetic CSV");
  ingest->add_option("--run", run_dir, "Existing run directory")->required();
  ingest->add_option("--real", real_id, "Dataset id within the run")->required();
  ingest->add_option("--syn", syn_csv, "Synthetic CSV with the real header")->required()->check(CLI::ExistingFile);
  ingest->add_option("--as", as_id, "Generator id to record it under")->required();

  auto* report = app.add_subcommand("report", "Rebuild analysis tables and figures from a run");
  report->add_option("--run", run_dir, "Run directory")->required();

  std::string dataset_id;
  std::optional<double> lambda;
  auto* fitw = app.add_subcommand("fit-weights", "Refit super-metric weights for one dataset");
  fitw->add_option("--run", run_dir, "Run directory")->required();
  fitw->add_option("--dataset", dataset_id, "Dataset id")->required();
  fitw->add_option("--lambda", lambda, "Gap penalty override")->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run) {
      RunConfig cfg = config_path.empty() ? RunConfig::default_config() : RunConfig::load(config_path);
      if (auto s = env_seed()) cfg.seed = RngSeed{*s};
      if (seed) cfg.seed = RngSeed{*seed};
      if (!out_dir.empty()) cfg.out_dir = out_dir;
      cfg.validate();
      const PipelineResult result = run_pipeline(cfg, jobs);
      std::cout << "wrote " << result.root.string() << " (" << result.records.size() << " fold records, "
                << result.failures.size() << " failures)\n";
      for (const auto& f : result.failures)
        std::cerr << "failed: " << f.dataset << '/' << f.generator << ": " << f.error << '\n';
      print_summary(result.analysis);
    } else if (*ingest) {
      const auto records = ingest_external_synthetic(run_dir, real_id, syn_csv, as_id);
      std::cout << "ingested " << as_id << " against " << real_id << " (" << records.size() << " folds)\n";
    } else if (*report) {
      print_summary(rebuild_report(run_dir));
    } else if (*fitw) {
      const FitResult fit = refit_weights(run_dir, dataset_id, lambda);
      for (MetricId id : kAllMetrics) std::cout << to_string(id) << ' ' << fixed(fit.weights[id], 4) << '\n';
      std::cout << "objective " << fixed(fit.objective, 6) << "\nrho_recall " << fixed(fit.corr_recall, 6)
                << "\nrho_f1 " << fixed(fit.corr_f1, 6) << '\n';
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::ConfigInvalid ? kExitConfig : kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}
