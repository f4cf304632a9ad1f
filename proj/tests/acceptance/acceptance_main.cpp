// Prints one PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <algorithm>
#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "synthmetric/builtin.hpp"
#include "synthmetric/fidelity.hpp"
#include "synthmetric/generators.hpp"
#include "synthmetric/pipeline.hpp"
#include "synthmetric/supermetric.hpp"
#include "synthmetric/tstr.hpp"
#include "tree_support.hpp"

using namespace synthmetric;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) { return std::chrono::duration<double>(Clock::now() - start).count(); }

std::string fmt(double v, int precision = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  return buf;
}

std::string sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

std::vector<ClassifierSpec> all_classifiers() {
  std::vector<ClassifierSpec> out;
  for (auto kind :
       {ClassifierKind::Logistic, ClassifierKind::BernoulliNB, ClassifierKind::Knn, ClassifierKind::DecisionTree})
    out.push_back(ClassifierSpec::defaults(kind));
  return out;
}

Dataset reference_dataset() {
  BuiltinSpec b;
  b.n = 1000;
  b.d = 30;
  b.seed = 1;
  return make_builtin_dataset(b);
}

Outcome metrics_match_oracles() {
  const auto start = Clock::now();
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<std::size_t> nd(2, 10), nn(2, 50);
  double worst = 0.0;
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t d = nd(rng);
    const std::vector<bool> binary(d, true);
    const auto r = oracle::random_table(rng, nn(rng), d, binary);
    const auto s = oracle::random_table(rng, nn(rng), d, binary);
    const Dataset dr = oracle::to_dataset(r);
    const Dataset dsy = oracle::to_dataset(s);
    const double diffs[] = {
        hellinger_marginal_score(dr, dsy) - oracle::hellinger_score(r, s),
        jsd_marginal_score(dr, dsy) - oracle::jsd_score(r, s),
        pearson_assoc_score(dr, dsy) - oracle::pearson_score(r, s),
        cramers_v_score(dr, dsy) - oracle::cramers_score(r, s),
        euclidean_mean_score(dr, dsy) - oracle::euclidean_score(r, s),
        mean_similarity_score(dr, dsy) - oracle::mean_similarity_score(r, s),
        mmd_score(dr, dsy) - oracle::mmd_score(r, s),
    };
    for (double v : diffs) worst = std::max(worst, std::isnan(v) ? INFINITY : std::fabs(v));
  }
  const double t = seconds_since(start);
  return {worst <= 1e-9 && t < 10.0, "max |diff| " + sci(worst) + ", " + fmt(t, 2) + " s"};
}

Outcome identity_scores() {
  const Dataset real = reference_dataset();
  const FidelityVector f = evaluate_all(real, real, RngSeed{1});
  bool ok = true;
  std::string detail;
  for (MetricId id : kAllMetrics) {
    const double v = f[id];
    const bool stochastic = id == MetricId::Pmse || id == MetricId::Mmd;
    ok = ok && (stochastic ? v >= 0.95 : v == 1.0);
    detail += std::string(to_string(id)) + "=" + fmt(v, 6) + " ";
  }
  return {ok, detail};
}

Outcome noise_monotonicity() {
  const auto start = Clock::now();
  const Dataset real = reference_dataset();
  const double eps[] = {0.0, 0.05, 0.1, 0.2, 0.3, 0.4};
  std::vector<FidelityVector> scores;
  for (double e : eps) {
    const GeneratorSpec g{"noisy", GeneratorKind::NoisyCopy, 5, e, "noise"};
    const Dataset syn = sample(fit(g, real), real.rows() / 2, RngSeed{1});
    scores.push_back(evaluate_all(real, syn, RngSeed{1}));
  }
  double worst_rise = -INFINITY;
  std::string where;
  auto check = [&](const std::string& name, const std::function<double(const FidelityVector&)>& get) {
    for (std::size_t i = 1; i < scores.size(); ++i) {
      const double rise = get(scores[i]) - get(scores[i - 1]);
      if (rise > worst_rise) {
        worst_rise = rise;
        where = name + " at eps=" + fmt(eps[i], 2);
      }
    }
  };
  for (MetricId id : kAllMetrics) check(std::string(to_string(id)), [id](const FidelityVector& f) { return f[id]; });
  check("SuperMetric", [](const FidelityVector& f) { return score(WeightVector::uniform(), f); });
  const double t = seconds_since(start);
  return {worst_rise <= 0.02 && t < 60.0,
          "largest step increase " + fmt(worst_rise) + " (" + where + "), " + fmt(t, 2) + " s"};
}

Outcome optimizer_near_grid() {
  const auto start = Clock::now();
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = INFINITY;
  for (int rep = 0; rep < 20; ++rep) {
    oracle::WeightInstance inst;
    std::vector<RunRecord> runs;
    for (int r = 0; r < 6; ++r) {
      std::array<double, 8> m{};
      for (double& v : m) v = u(rng);
      inst.metrics.push_back(m);
      inst.recall.push_back(u(rng));
      inst.f1.push_back(0.5 * inst.recall.back() + 0.5 * u(rng));
      RunRecord rec;
      rec.dataset_id = "d";
      rec.generator_id = "g" + std::to_string(r);
      rec.fidelity.scores = m;
      rec.recall = inst.recall.back();
      rec.f1 = inst.f1.back();
      runs.push_back(rec);
    }
    FitConfig cfg;
    cfg.seed = RngSeed{static_cast<std::uint64_t>(rep)};
    const double fitted = fit_weights(runs, cfg).objective;
    worst = std::min(worst, fitted - oracle::grid_optimum(inst, 20, cfg.lambda_gap));
  }
  const double t = seconds_since(start);
  return {worst >= -0.02 && t < 120.0, "min (fitted - grid) " + fmt(worst) + ", " + fmt(t, 2) + " s"};
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

Outcome supermetric_stability(const fs::path& work) {
  int wins = 0;
  bool fast = true;
  std::string detail;
  for (std::uint64_t seed : {1, 2, 3}) {
    const auto start = Clock::now();
    RunConfig cfg = RunConfig::default_config();
    cfg.seed = RngSeed{seed};
    cfg.out_dir = work / ("stability_seed_" + std::to_string(seed));
    const PipelineResult r = run_pipeline(cfg, 1);
    const double t = seconds_since(start);
    fast = fast && t < 600.0;
    std::optional<double> super;
    std::vector<double> others;
    for (const auto& p : r.analysis.properties) {
      if (p.target != Target::F1 || !p.stability_std) continue;
      if (p.metric == kSuperMetricRow)
        super = *p.stability_std;
      else
        others.push_back(*p.stability_std);
    }
    if (super && !others.empty()) {
      const double med = median_of(others);
      wins += *super <= med;
      detail +=
          "seed " + std::to_string(seed) + ": " + fmt(*super) + " vs median " + fmt(med) + " (" + fmt(t, 1) + " s); ";
    } else {
      detail += "seed " + std::to_string(seed) + ": undefined; ";
    }
    fs::remove_all(cfg.out_dir);
  }
  return {wins >= 2 && fast, detail + std::to_string(wins) + "/3 seeds"};
}

Outcome tstr_sanity() {
  const Dataset real = reference_dataset();
  const auto classifiers = all_classifiers();
  auto run = [&](double e) {
    return run_tstr(real, GeneratorSpec{"noisy", GeneratorKind::NoisyCopy, 5, e, "noise"}, classifiers, 5, RngSeed{1});
  };
  const TstrResult clean = run(0.0);
  const auto clean_tstr = mean_tstr_utility(clean.reports, 5);
  double worst_gap = 0.0;
  double clean_mean = 0.0;
  for (std::size_t f = 0; f < 5; ++f) {
    double trtr = 0.0;
    for (const auto& rep : clean.reports)
      if (rep.strategy == Strategy::TRTR && rep.fold == f) trtr += rep.f1 / static_cast<double>(classifiers.size());
    worst_gap = std::max(worst_gap, std::fabs(clean_tstr[f].f1 - trtr));
    clean_mean += clean_tstr[f].f1 / 5.0;
  }
  double noisy_mean = 0.0;
  for (const auto& u : mean_tstr_utility(run(0.5).reports, 5)) noisy_mean += u.f1 / 5.0;
  return {worst_gap <= 0.05 && noisy_mean <= clean_mean,
          "max fold |TSTR-TRTR| " + fmt(worst_gap) + "; F1 eps=0 " + fmt(clean_mean) + ", eps=0.5 " + fmt(noisy_mean)};
}

Outcome utility_metrics() {
  const ConfusionMetrics m = confusion_metrics({8, 2, 2, 8});
  const bool confusion_ok = m.precision == 0.8 && m.recall == 0.8 && m.f1 == 0.8;
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> size(2, 50), coarse(0, 10);
  double worst = 0.0;
  for (int rep = 0; rep < 50; ++rep) {
    const int n = size(rng);
    std::vector<double> scores(static_cast<std::size_t>(n));
    std::vector<int> labels(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      scores[static_cast<std::size_t>(i)] = coarse(rng) / 10.0;  // coarse grid forces ties
      labels[static_cast<std::size_t>(i)] = static_cast<int>(rng() % 2);
    }
    labels[0] = 0;
    labels[1] = 1;
    worst = std::max(worst, std::fabs(auc_roc(scores, labels) - oracle::pairwise_auc(scores, labels)));
  }
  return {confusion_ok && worst <= 1e-12, "confusion (" + fmt(m.precision, 17) + ", " + fmt(m.recall, 17) + ", " +
                                              fmt(m.f1, 17) + "), max AUC diff " + sci(worst)};
}

int run_cli(const fs::path& out, int jobs) {
  std::ostringstream cmd;
  cmd << "env -u SYNTHMETRIC_SEED " << SYNTHMETRIC_CLI << " run --seed 1 --jobs " << jobs << " --out " << out << " > "
      << (out.string() + ".log") << " 2>&1";
  return std::system(cmd.str().c_str());
}

Outcome reproducible_tree(const fs::path& a, const fs::path& b, int status_a, int status_b) {
  if (status_a != 0 || status_b != 0)
    return {false, "cli exit statuses " + std::to_string(status_a) + ", " + std::to_string(status_b)};
  const std::string run_id = RunConfig::default_config().run_id;
  const auto da = testing_support::tree_digest(a / run_id);
  const auto db = testing_support::tree_digest(b / run_id);
  std::size_t differing = 0;
  for (const auto& [path, hash] : da) differing += !db.count(path) || db.at(path) != hash;
  differing += db.size() > da.size() ? db.size() - da.size() : 0;
  return {!da.empty() && differing == 0,
          std::to_string(da.size()) + " files, " + std::to_string(differing) + " differ (--jobs 1 vs --jobs 2)"};
}

Outcome tree_contract(const fs::path& out) {
  const RunConfig cfg = RunConfig::default_config();
  const fs::path root = out / cfg.run_id;
  if (!fs::exists(root)) return {false, "no run tree"};
  const auto expected = testing_support::expected_tree(cfg);
  std::set<std::string> actual;
  for (const auto& [path, hash] : testing_support::tree_digest(root)) actual.insert(path);
  const std::size_t per_fold = cfg.datasets.size() * cfg.generators.size() * 2 * cfg.classifiers.size() * cfg.k_folds;
  bool svg_ok = true;
  for (const char* svg : {"figures/heatmap.svg", "figures/boxplot.svg"}) {
    try {
      std::istringstream in(testing_support::read_file(root / svg));
      boost::property_tree::ptree tree;
      boost::property_tree::read_xml(in, tree);
      svg_ok = svg_ok && tree.count("svg") == 1;
    } catch (const std::exception&) {
      svg_ok = false;
    }
  }
  return {actual == expected && svg_ok, std::to_string(actual.size()) + " files, expected " +
                                            std::to_string(expected.size()) + " (" + std::to_string(per_fold) +
                                            " utility); svg " + (svg_ok ? "well-formed" : "malformed")};
}

}  // namespace

int main(int argc, char** argv) {
  fs::path work = fs::temp_directory_path() / "synthmetric_acceptance";
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--work-dir") work = argv[i + 1];
  fs::remove_all(work);
  fs::create_directories(work);

  int failures = 0;
  auto report = [&](int id, const char* name, const std::function<Outcome()>& fn) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s %d %s: %s\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str());
    std::fflush(stdout);
  };

  report(1, "metric oracles", metrics_match_oracles);
  report(2, "identity", identity_scores);
  report(3, "noise monotonicity", noise_monotonicity);
  report(4, "weight optimizer vs grid", optimizer_near_grid);
  report(5, "super-metric stability", [&] { return supermetric_stability(work); });
  report(6, "tstr sanity", tstr_sanity);
  report(7, "confusion and auc", utility_metrics);

  const fs::path a = work / "jobs1";
  const fs::path b = work / "jobs2";
  const int status_a = run_cli(a, 1);
  const int status_b = run_cli(b, 2);
  report(8, "reproducible tree", [&] { return reproducible_tree(a, b, status_a, status_b); });
  report(9, "tree contract", [&] { return tree_contract(a); });

  return failures == 0 ? 0 : 1;
}
