#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "synthmetric/dataset.hpp"
#include "synthmetric/rng.hpp"

namespace synthmetric {

enum class ClassifierKind { Logistic, BernoulliNB, Knn, DecisionTree };

std::string_view to_string(ClassifierKind kind);
ClassifierKind classifier_kind_from_string(std::string_view name);

struct ClassifierSpec {
  ClassifierKind kind = ClassifierKind::Logistic;
  // Logistic
  double learning_rate = 0.1;
  std::size_t epochs = 200;
  double l2 = 1e-3;
  // BernoulliNB
  double alpha = 1.0;
  // Knn
  std::size_t k = 5;
  // DecisionTree (Gini)
  std::size_t max_depth = 4;
  std::size_t min_leaf = 5;

  static ClassifierSpec defaults(ClassifierKind kind) {
    ClassifierSpec spec;
    spec.kind = kind;
    return spec;
  }

  // The hyperparameters relevant to `kind`, for persisting next to results.
  std::vector<std::pair<std::string, double>> hyperparameters() const;
};

struct LogisticModel {
  std::vector<double> weights;
  double bias = 0.0;
};

struct NaiveBayesModel {
  double log_prior[2] = {0.0, 0.0};
  std::vector<double> theta[2];  // P(x_j = 1 | class)
};

struct KnnModel {
  Dataset train;
  std::size_t k = 5;
};

struct TreeNode {
  bool leaf = true;
  std::size_t feature = 0;
  double threshold = 0.0;  // x <= threshold goes left
  std::size_t left = 0;
  std::size_t right = 0;
  double probability = 0.0;  // fraction of class 1 among training rows in the node
  std::size_t samples = 0;
};

struct TreeModel {
  std::vector<TreeNode> nodes;  // nodes[0] is the root
};

struct FittedClassifier {
  ClassifierSpec spec;
  FeatureSchema schema;
  std::variant<LogisticModel, NaiveBayesModel, KnnModel, TreeModel> model;
};

// Deterministic fit; seed is accepted for interface uniformity but none of the four
// learners consumes randomness.
FittedClassifier train(const ClassifierSpec& spec, const Dataset& data, RngSeed seed = {});

std::vector<double> predict_proba(const FittedClassifier& model, const Dataset& rows);

// Probability > 0.5 is class 1; exact ties go to class 0.
inline int decide(double probability) { return probability > 0.5 ? 1 : 0; }

struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  std::size_t total() const { return tp + fp + fn + tn; }
};

ConfusionCounts confusion(std::span<const double> probabilities, std::span<const int> labels);

struct ConfusionMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Any 0/0 ratio is reported as 0.
ConfusionMetrics confusion_metrics(const ConfusionCounts& counts);

// Mann-Whitney AUC with average ranks for ties.
double auc_roc(std::span<const double> scores, std::span<const int> labels);

}  // namespace synthmetric
