#include "synthmetric/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "synthmetric/kernels.hpp"

namespace synthmetric {

std::string_view to_string(ClassifierKind kind) {
  switch (kind) {
    case ClassifierKind::Logistic:
      return "Logistic";
    case ClassifierKind::BernoulliNB:
      return "BernoulliNB";
    case ClassifierKind::Knn:
      return "Knn";
    case ClassifierKind::DecisionTree:
      return "DecisionTree";
  }
  return "Unknown";
}

ClassifierKind classifier_kind_from_string(std::string_view name) {
  for (auto kind :
       {ClassifierKind::Logistic, ClassifierKind::BernoulliNB, ClassifierKind::Knn, ClassifierKind::DecisionTree})
    if (to_string(kind) == name) return kind;
  throw Error(ErrorCode::InvalidArgument, "unknown classifier kind '" + std::string(name) + "'");
}

std::vector<std::pair<std::string, double>> ClassifierSpec::hyperparameters() const {
  switch (kind) {
    case ClassifierKind::Logistic:
      return {{"epochs", static_cast<double>(epochs)}, {"l2", l2}, {"learning_rate", learning_rate}};
    case ClassifierKind::BernoulliNB:
      return {{"alpha", alpha}};
    case ClassifierKind::Knn:
      return {{"k", static_cast<double>(k)}};
    case ClassifierKind::DecisionTree:
      return {{"max_depth", static_cast<double>(max_depth)}, {"min_leaf", static_cast<double>(min_leaf)}};
  }
  return {};
}

namespace {

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

LogisticModel fit_logistic(const ClassifierSpec& spec, const Dataset& data) {
  const std::size_t d = data.cols();
  LogisticModel model;
  model.weights.assign(d, 0.0);
  std::vector<double> targets(data.labels().begin(), data.labels().end());
  std::vector<double> grad(d + 1);
  const auto x = kernels::view_of(data);
  for (std::size_t epoch = 0; epoch < spec.epochs; ++epoch) {
    kernels::omp::logistic_gradient(x, targets, model.weights, model.bias, spec.l2, grad);
    for (std::size_t j = 0; j < d; ++j) model.weights[j] -= spec.learning_rate * grad[j];
    model.bias -= spec.learning_rate * grad[d];
  }
  return model;
}

NaiveBayesModel fit_naive_bayes(const ClassifierSpec& spec, const Dataset& data) {
  const std::size_t d = data.cols();
  NaiveBayesModel model;
  double counts[2] = {0.0, 0.0};
  std::vector<double> ones[2] = {std::vector<double>(d, 0.0), std::vector<double>(d, 0.0)};
  for (std::size_t i = 0; i < data.rows(); ++i) {
    const int c = data.label(i);
    counts[c] += 1.0;
    auto r = data.row(i);
    for (std::size_t j = 0; j < d; ++j) ones[c][j] += r[j];
  }
  const double n = counts[0] + counts[1];
  for (int c = 0; c < 2; ++c) {
    model.log_prior[c] = std::log(counts[c] / n);
    model.theta[c].resize(d);
    for (std::size_t j = 0; j < d; ++j) model.theta[c][j] = (ones[c][j] + spec.alpha) / (counts[c] + 2.0 * spec.alpha);
  }
  return model;
}

double gini(double positives, double total) {
  if (total <= 0.0) return 0.0;
  const double p = positives / total;
  return 2.0 * p * (1.0 - p);
}

struct TreeBuilder {
  const ClassifierSpec& spec;
  const Dataset& data;
  TreeModel tree;

  std::size_t build(std::vector<std::size_t> rows, std::size_t depth) {
    const std::size_t node_index = tree.nodes.size();
    tree.nodes.emplace_back();
    double positives = 0.0;
    for (std::size_t i : rows) positives += data.label(i);
    const double n = static_cast<double>(rows.size());
    tree.nodes[node_index].probability = positives / n;
    tree.nodes[node_index].samples = rows.size();

    if (depth >= spec.max_depth || rows.size() < 2 * spec.min_leaf || positives == 0.0 || positives == n)
      return node_index;

    const double parent_impurity = gini(positives, n);
    double best_gain = 1e-12;
    bool found = false;
    std::size_t best_feature = 0;
    double best_threshold = 0.0;
    std::vector<std::pair<double, int>> column(rows.size());
    for (std::size_t j = 0; j < data.cols(); ++j) {
      for (std::size_t r = 0; r < rows.size(); ++r) column[r] = {data.at(rows[r], j), data.label(rows[r])};
      std::sort(column.begin(), column.end());
      double left_pos = 0.0;
      for (std::size_t r = 0; r + 1 < column.size(); ++r) {
        left_pos += column[r].second;
        if (column[r].first == column[r + 1].first) continue;
        const std::size_t left_n = r + 1;
        const std::size_t right_n = column.size() - left_n;
        if (left_n < spec.min_leaf || right_n < spec.min_leaf) continue;
        const double ln = static_cast<double>(left_n);
        const double rn = static_cast<double>(right_n);
        const double child = (ln * gini(left_pos, ln) + rn * gini(positives - left_pos, rn)) / n;
        const double gain = parent_impurity - child;
        if (gain > best_gain) {
          best_gain = gain;
          found = true;
          best_feature = j;
          best_threshold = 0.5 * (column[r].first + column[r + 1].first);
        }
      }
    }
    if (!found) return node_index;

    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
    for (std::size_t i : rows) (data.at(i, best_feature) <= best_threshold ? left : right).push_back(i);
    rows.clear();
    rows.shrink_to_fit();
    const std::size_t l = build(std::move(left), depth + 1);
    const std::size_t r = build(std::move(right), depth + 1);
    TreeNode& node = tree.nodes[node_index];
    node.leaf = false;
    node.feature = best_feature;
    node.threshold = best_threshold;
    node.left = l;
    node.right = r;
    return node_index;
  }
};

struct ProbaVisitor {
  const Dataset& rows;

  std::vector<double> operator()(const LogisticModel& m) const {
    std::vector<double> out(rows.rows());
    for (std::size_t i = 0; i < rows.rows(); ++i) {
      auto r = rows.row(i);
      out[i] = sigmoid(std::inner_product(r.begin(), r.end(), m.weights.begin(), m.bias));
    }
    return out;
  }

  std::vector<double> operator()(const NaiveBayesModel& m) const {
    std::vector<double> out(rows.rows());
    for (std::size_t i = 0; i < rows.rows(); ++i) {
      auto r = rows.row(i);
      double ll[2];
      for (int c = 0; c < 2; ++c) {
        double s = m.log_prior[c];
        for (std::size_t j = 0; j < r.size(); ++j)
          s += r[j] * std::log(m.theta[c][j]) + (1.0 - r[j]) * std::log1p(-m.theta[c][j]);
        ll[c] = s;
      }
      out[i] = sigmoid(ll[1] - ll[0]);
    }
    return out;
  }

  std::vector<double> operator()(const KnnModel& m) const {
    const std::size_t k = std::min(m.k, m.train.rows());
    const auto idx = kernels::omp::nearest_neighbors(kernels::view_of(m.train), kernels::view_of(rows), k, false);
    std::vector<double> out(rows.rows());
    for (std::size_t i = 0; i < rows.rows(); ++i) {
      double pos = 0.0;
      for (std::size_t t = 0; t < k; ++t) pos += m.train.label(idx[i * k + t]);
      out[i] = pos / static_cast<double>(k);
    }
    return out;
  }

  std::vector<double> operator()(const TreeModel& m) const {
    std::vector<double> out(rows.rows());
    for (std::size_t i = 0; i < rows.rows(); ++i) {
      std::size_t node = 0;
      while (!m.nodes[node].leaf)
        node = rows.at(i, m.nodes[node].feature) <= m.nodes[node].threshold ? m.nodes[node].left : m.nodes[node].right;
      out[i] = m.nodes[node].probability;
    }
    return out;
  }
};

}  // namespace

FittedClassifier train(const ClassifierSpec& spec, const Dataset& data, RngSeed /*seed*/) {
  const ClassCounts counts = class_counts(data);
  if (counts.n_benign == 0 || counts.n_malware == 0)
    throw Error(ErrorCode::DegenerateClass, "classifier training data must contain both classes");
  FittedClassifier fitted{spec, data.schema(), LogisticModel{}};
  switch (spec.kind) {
    case ClassifierKind::Logistic:
      fitted.model = fit_logistic(spec, data);
      break;
    case ClassifierKind::BernoulliNB:
      fitted.model = fit_naive_bayes(spec, data);
      break;
    case ClassifierKind::Knn:
      if (spec.k < 1) throw Error(ErrorCode::InvalidArgument, "Knn needs k >= 1");
      fitted.model = KnnModel{data, spec.k};
      break;
    case ClassifierKind::DecisionTree: {
      TreeBuilder builder{spec, data, {}};
      std::vector<std::size_t> all(data.rows());
      std::iota(all.begin(), all.end(), std::size_t{0});
      builder.build(std::move(all), 0);
      fitted.model = std::move(builder.tree);
      break;
    }
  }
  return fitted;
}

std::vector<double> predict_proba(const FittedClassifier& model, const Dataset& rows) {
  if (rows.schema().feature_names != model.schema.feature_names)
    throw Error(ErrorCode::SchemaMismatch, "prediction rows do not match the training schema");
  return std::visit(ProbaVisitor{rows}, model.model);
}

ConfusionCounts confusion(std::span<const double> probabilities, std::span<const int> labels) {
  if (probabilities.size() != labels.size())
    throw Error(ErrorCode::LengthMismatch, "probabilities and labels differ in length");
  ConfusionCounts c;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int predicted = decide(probabilities[i]);
    if (predicted == 1 && labels[i] == 1)
      ++c.tp;
    else if (predicted == 1)
      ++c.fp;
    else if (labels[i] == 1)
      ++c.fn;
    else
      ++c.tn;
  }
  return c;
}

ConfusionMetrics confusion_metrics(const ConfusionCounts& counts) {
  auto ratio = [](double num, double den) { return den > 0.0 ? num / den : 0.0; };
  const double tp = static_cast<double>(counts.tp);
  ConfusionMetrics m;
  m.precision = ratio(tp, tp + static_cast<double>(counts.fp));
  m.recall = ratio(tp, tp + static_cast<double>(counts.fn));
  m.f1 = ratio(2.0 * tp, 2.0 * tp + static_cast<double>(counts.fp + counts.fn));
  return m;
}

double auc_roc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw Error(ErrorCode::LengthMismatch, "scores and labels differ in length");
  const ClassCounts counts = class_counts(labels);
  if (counts.n_benign == 0 || counts.n_malware == 0) throw Error(ErrorCode::SingleClass, "AUC needs both classes");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  double positive_rank_sum = 0.0;
  for (std::size_t start = 0; start < order.size();) {
    std::size_t end = start;
    while (end < order.size() && scores[order[end]] == scores[order[start]]) ++end;
    // ranks start+1 .. end share their average
    const double avg_rank = 0.5 * static_cast<double>(start + 1 + end);
    for (std::size_t t = start; t < end; ++t)
      if (labels[order[t]] == 1) positive_rank_sum += avg_rank;
    start = end;
  }
  const double n_pos = static_cast<double>(counts.n_malware);
  const double n_neg = static_cast<double>(counts.n_benign);
  return (positive_rank_sum - n_pos * (n_pos + 1.0) / 2.0) / (n_pos * n_neg);
}

}  // namespace synthmetric
