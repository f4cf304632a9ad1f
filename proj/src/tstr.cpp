#include "synthmetric/tstr.hpp"

#include <algorithm>
#include <tuple>

namespace synthmetric {

std::string_view to_string(Strategy s) { return s == Strategy::TSTR ? "TSTR" : "TRTR"; }

Strategy strategy_from_string(std::string_view name) {
  if (name == "TSTR") return Strategy::TSTR;
  if (name == "TRTR") return Strategy::TRTR;
  throw Error(ErrorCode::InvalidArgument, "unknown strategy '" + std::string(name) + "'");
}

bool report_order(const UtilityReport& a, const UtilityReport& b) {
  return std::tuple(a.strategy, a.classifier, a.fold) < std::tuple(b.strategy, b.classifier, b.fold);
}

UtilityReport evaluate(const FittedClassifier& model, const Dataset& eval, Strategy strategy, std::size_t fold) {
  const auto proba = predict_proba(model, eval);
  const auto metrics = confusion_metrics(confusion(proba, eval.labels()));
  UtilityReport report;
  report.strategy = strategy;
  report.classifier = model.spec.kind;
  report.fold = fold;
  report.precision = metrics.precision;
  report.recall = metrics.recall;
  report.f1 = metrics.f1;
  report.auc_roc = auc_roc(proba, eval.labels());
  return report;
}

namespace {

template <typename MakeSynthetic>
TstrResult run_protocol(const Dataset& real, std::span<const ClassifierSpec> classifiers, std::size_t k, RngSeed seed,
                        const EvalObserver& observer, MakeSynthetic make_synthetic) {
  TstrResult result;
  result.folds = stratified_kfold(real, k, derive_seed(seed, "folds"));
  for (std::size_t fold = 0; fold < k; ++fold) {
    try {
      const auto train_idx = result.folds.train_indices(fold);
      const auto test_idx = result.folds.test_indices(fold);
      const Dataset train_real = real.subset(train_idx);
      const Dataset eval = real.subset(test_idx);
      const Dataset synthetic = make_synthetic(train_real, fold);
      result.synthetic_rows.push_back(synthetic.rows());
      result.fidelity.push_back(evaluate_all(train_real, synthetic, derive_seed(seed, "fidelity", fold)));

      for (const ClassifierSpec& spec : classifiers) {
        const RngSeed model_seed = derive_seed(seed, "classifier", to_string(spec.kind), fold);
        if (observer) observer(fold, Strategy::TSTR, spec.kind, synthetic, eval);
        result.reports.push_back(evaluate(train(spec, synthetic, model_seed), eval, Strategy::TSTR, fold));
        if (observer) observer(fold, Strategy::TRTR, spec.kind, train_real, eval);
        result.reports.push_back(evaluate(train(spec, train_real, model_seed), eval, Strategy::TRTR, fold));
      }
    } catch (const FoldError&) {
      throw;
    } catch (const Error& e) {
      throw FoldError(e, fold);
    }
  }
  std::sort(result.reports.begin(), result.reports.end(), report_order);
  return result;
}

}  // namespace

TstrResult run_tstr(const Dataset& real, const GeneratorSpec& gen_spec, std::span<const ClassifierSpec> classifiers,
                    std::size_t k, RngSeed seed, const EvalObserver& observer) {
  gen_spec.validate();
  return run_protocol(real, classifiers, k, seed, observer, [&](const Dataset& train_real, std::size_t fold) {
    const FittedGenerator gen = fit(gen_spec, train_real);
    // Balanced, and as large as the real training split (odd sizes round up).
    const std::size_t per_class = std::max<std::size_t>(1, (train_real.rows() + 1) / 2);
    return sample(gen, per_class, derive_seed(seed, "generator", gen_spec.id, fold));
  });
}

TstrResult run_tstr_external(const Dataset& real, const Dataset& synthetic, std::span<const ClassifierSpec> classifiers,
                             std::size_t k, RngSeed seed, const EvalObserver& observer) {
  require_same_schema(real, synthetic);
  return run_protocol(real, classifiers, k, seed, observer, [&](const Dataset&, std::size_t) { return synthetic; });
}

std::vector<FoldUtility> mean_tstr_utility(const std::vector<UtilityReport>& reports, std::size_t k) {
  std::vector<FoldUtility> out(k);
  std::vector<double> counts(k, 0.0);
  for (const auto& r : reports) {
    if (r.strategy != Strategy::TSTR || r.fold >= k) continue;
    out[r.fold].recall += r.recall;
    out[r.fold].f1 += r.f1;
    counts[r.fold] += 1.0;
  }
  for (std::size_t f = 0; f < k; ++f) {
    if (counts[f] == 0.0) continue;
    out[f].recall /= counts[f];
    out[f].f1 /= counts[f];
  }
  return out;
}

}  // namespace synthmetric
