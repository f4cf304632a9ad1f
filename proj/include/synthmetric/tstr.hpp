#pragma once

#include <cstddef>
#include <functional>
#include <string_view>
#include <vector>

#include "synthmetric/classifiers.hpp"
#include "synthmetric/dataset.hpp"
#include "synthmetric/fidelity.hpp"
#include "synthmetric/generators.hpp"

namespace synthmetric {

enum class Strategy { TSTR, TRTR };

std::string_view to_string(Strategy s);
Strategy strategy_from_string(std::string_view name);

struct UtilityReport {
  Strategy strategy = Strategy::TSTR;
  ClassifierKind classifier = ClassifierKind::Logistic;
  std::size_t fold = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double auc_roc = 0.0;
};

// A member error annotated with the fold it happened in.
class FoldError : public Error {
 public:
  FoldError(const Error& cause, std::size_t fold)
      : Error(cause.code(), std::string("fold ") + std::to_string(fold) + ": " + cause.what()), fold_(fold) {}

  std::size_t fold() const noexcept { return fold_; }

 private:
  std::size_t fold_;
};

// Canonical persistence order: (strategy, classifier, fold).
bool report_order(const UtilityReport& a, const UtilityReport& b);

struct TstrResult {
  FoldPlan folds;
  std::vector<UtilityReport> reports;       // sorted by report_order
  std::vector<FidelityVector> fidelity;     // one per fold: real training split vs synthetic
  std::vector<std::size_t> synthetic_rows;  // synthetic training set size per fold
};

// Called for every (fold, strategy, classifier) evaluation with the exact training
// and evaluation sets; used by tests to audit evaluation purity.
using EvalObserver =
    std::function<void(std::size_t fold, Strategy, ClassifierKind, const Dataset& train, const Dataset& eval)>;

UtilityReport evaluate(const FittedClassifier& model, const Dataset& eval, Strategy strategy, std::size_t fold);

// Folds come from stratified_kfold(real, k, derive_seed(seed, "folds")), so every generator
// evaluated with the same seed sees the same splits.
TstrResult run_tstr(const Dataset& real, const GeneratorSpec& gen_spec, std::span<const ClassifierSpec> classifiers,
                    std::size_t k, RngSeed seed, const EvalObserver& observer = {});

// Same protocol for an externally produced synthetic table, reused for every fold.
TstrResult run_tstr_external(const Dataset& real, const Dataset& synthetic, std::span<const ClassifierSpec> classifiers,
                             std::size_t k, RngSeed seed, const EvalObserver& observer = {});

// Mean TSTR recall and F1 over classifiers, per fold.
struct FoldUtility {
  double recall = 0.0;
  double f1 = 0.0;
};
std::vector<FoldUtility> mean_tstr_utility(const std::vector<UtilityReport>& reports, std::size_t k);

}  // namespace synthmetric
