#include "synthmetric/config.hpp"

#include <cctype>
#include <fstream>
#include <set>

namespace synthmetric {

using nlohmann::json;

namespace {

[[noreturn]] void invalid(const std::string& message) { throw Error(ErrorCode::ConfigInvalid, message); }

bool safe_id(const std::string& id) {
  if (id.empty() || id == "." || id == "..") return false;
  for (char c : id)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.')) return false;
  return true;
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception& e) {
    invalid(std::string("field '") + key + "': " + e.what());
  }
}

json builtin_to_json(const BuiltinSpec& b) {
  return json{{"n", b.n},
              {"d", b.d},
              {"seed", b.seed},
              {"block_size", b.block_size},
              {"block_rho", b.block_rho},
              {"min_rate", b.min_rate},
              {"max_rate", b.max_rate},
              {"informative", b.informative},
              {"label_noise", b.label_noise}};
}

BuiltinSpec builtin_from_json(const json& j) {
  if (!j.is_object()) invalid("builtin must be an object");
  BuiltinSpec b;
  b.n = get_or<std::size_t>(j, "n", b.n);
  b.d = get_or<std::size_t>(j, "d", b.d);
  b.seed = get_or<std::uint64_t>(j, "seed", b.seed);
  b.block_size = get_or<std::size_t>(j, "block_size", b.block_size);
  b.block_rho = get_or<double>(j, "block_rho", b.block_rho);
  b.min_rate = get_or<double>(j, "min_rate", b.min_rate);
  b.max_rate = get_or<double>(j, "max_rate", b.max_rate);
  b.informative = get_or<std::size_t>(j, "informative", b.informative);
  b.label_noise = get_or<double>(j, "label_noise", b.label_noise);
  return b;
}

ClassifierSpec classifier_from_json(const json& j) {
  if (j.is_string()) return ClassifierSpec::defaults(classifier_kind_from_string(j.get<std::string>()));
  if (!j.is_object() || !j.contains("kind")) invalid("classifier entries need a kind");
  ClassifierSpec c = ClassifierSpec::defaults(classifier_kind_from_string(j.at("kind").get<std::string>()));
  c.learning_rate = get_or<double>(j, "learning_rate", c.learning_rate);
  c.epochs = get_or<std::size_t>(j, "epochs", c.epochs);
  c.l2 = get_or<double>(j, "l2", c.l2);
  c.alpha = get_or<double>(j, "alpha", c.alpha);
  c.k = get_or<std::size_t>(j, "k", c.k);
  c.max_depth = get_or<std::size_t>(j, "max_depth", c.max_depth);
  c.min_leaf = get_or<std::size_t>(j, "min_leaf", c.min_leaf);
  return c;
}

json classifier_to_json(const ClassifierSpec& c) {
  json j{{"kind", std::string(to_string(c.kind))}};
  for (const auto& [name, value] : c.hyperparameters()) j[name] = value;
  return j;
}

}  // namespace

void RunConfig::validate() const {
  if (!safe_id(run_id)) invalid("run_id '" + run_id + "' must be non-empty [A-Za-z0-9._-]");
  if (datasets.empty()) invalid("at least one dataset is required");
  if (generators.empty()) invalid("at least one generator is required");
  if (classifiers.empty()) invalid("at least one classifier is required");
  if (k_folds < 2) invalid("k_folds must be >= 2");
  std::set<std::string> ids;
  for (const auto& d : datasets) {
    if (!safe_id(d.id)) invalid("dataset id '" + d.id + "' must be non-empty [A-Za-z0-9._-]");
    if (!ids.insert(d.id).second) invalid("duplicate dataset id '" + d.id + "'");
    if (d.path.has_value() == d.builtin.has_value())
      invalid("dataset '" + d.id + "' needs exactly one of path/builtin");
    if (d.path && !std::filesystem::exists(*d.path)) invalid("dataset file not found: " + d.path->string());
    if (d.builtin) {
      try {
        d.builtin->validate();
      } catch (const Error& e) {
        invalid("dataset '" + d.id + "': " + e.what());
      }
    }
  }
  ids.clear();
  for (const auto& g : generators) {
    if (!safe_id(g.id)) invalid("generator id '" + g.id + "' must be non-empty [A-Za-z0-9._-]");
    if (!ids.insert(g.id).second) invalid("duplicate generator id '" + g.id + "'");
    try {
      g.validate();
    } catch (const Error& e) {
      invalid("generator '" + g.id + "': " + e.what());
    }
  }
  std::set<ClassifierKind> kinds;
  for (const auto& c : classifiers)
    if (!kinds.insert(c.kind).second) invalid("duplicate classifier '" + std::string(to_string(c.kind)) + "'");
  try {
    fit.validate();
  } catch (const Error& e) {
    invalid(std::string("fit: ") + e.what());
  }
}

json RunConfig::to_json() const {
  json ds = json::array();
  for (const auto& d : datasets) {
    json e{{"id", d.id}, {"label", d.label_name}};
    if (d.path) e["path"] = d.path->string();
    if (d.builtin) e["builtin"] = builtin_to_json(*d.builtin);
    ds.push_back(std::move(e));
  }
  json gens = json::array();
  for (const auto& g : generators) {
    json e{{"id", g.id}, {"kind", std::string(to_string(g.kind))}, {"family", g.family}};
    if (g.kind == GeneratorKind::Smote) e["k_neighbors"] = g.k_neighbors;
    if (g.kind == GeneratorKind::NoisyCopy) e["flip_rate"] = g.flip_rate;
    gens.push_back(std::move(e));
  }
  json clfs = json::array();
  for (const auto& c : classifiers) clfs.push_back(classifier_to_json(c));
  return json{{"run_id", run_id},
              {"seed", seed.value},
              {"k_folds", k_folds},
              {"out_dir", out_dir.string()},
              {"correlation", spearman ? "spearman" : "pearson"},
              {"datasets", std::move(ds)},
              {"generators", std::move(gens)},
              {"classifiers", std::move(clfs)},
              {"fit",
               {{"lambda_gap", fit.lambda_gap},
                {"n_random", fit.n_random},
                {"refine_passes", fit.refine_passes},
                {"refine_step", fit.refine_step}}}};
}

RunConfig RunConfig::from_json(const json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) invalid("config must be a JSON object");
  RunConfig cfg;
  cfg.run_id = get_or<std::string>(doc, "run_id", cfg.run_id);
  cfg.seed.value = get_or<std::uint64_t>(doc, "seed", cfg.seed.value);
  cfg.k_folds = get_or<std::size_t>(doc, "k_folds", cfg.k_folds);
  cfg.out_dir = get_or<std::string>(doc, "out_dir", cfg.out_dir.string());
  const std::string corr = get_or<std::string>(doc, "correlation", "pearson");
  if (corr != "pearson" && corr != "spearman") invalid("correlation must be pearson or spearman");
  cfg.spearman = corr == "spearman";
  try {
    for (const auto& d : doc.value("datasets", json::array())) {
      DatasetEntry e;
      e.id = d.at("id").get<std::string>();
      e.label_name = d.value("label", std::string("label"));
      if (d.contains("path")) {
        std::filesystem::path p = d.at("path").get<std::string>();
        if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
        e.path = p.lexically_normal();
      }
      if (d.contains("builtin")) e.builtin = builtin_from_json(d.at("builtin"));
      if (e.builtin) e.builtin->label_name = e.label_name;
      cfg.datasets.push_back(std::move(e));
    }
    for (const auto& g : doc.value("generators", json::array())) {
      GeneratorSpec spec;
      spec.id = g.at("id").get<std::string>();
      spec.kind = generator_kind_from_string(g.at("kind").get<std::string>());
      spec.k_neighbors = g.value("k_neighbors", spec.k_neighbors);
      spec.flip_rate = g.value("flip_rate", spec.flip_rate);
      spec.family = g.value("family", std::string(to_string(spec.kind)));
      cfg.generators.push_back(std::move(spec));
    }
    for (const auto& c : doc.value("classifiers", json::array())) cfg.classifiers.push_back(classifier_from_json(c));
    if (doc.contains("fit")) {
      const json& f = doc.at("fit");
      cfg.fit.lambda_gap = f.value("lambda_gap", cfg.fit.lambda_gap);
      cfg.fit.n_random = f.value("n_random", cfg.fit.n_random);
      cfg.fit.refine_passes = f.value("refine_passes", cfg.fit.refine_passes);
      cfg.fit.refine_step = f.value("refine_step", cfg.fit.refine_step);
    }
  } catch (const json::exception& e) {
    invalid(e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigInvalid) throw;
    invalid(e.what());
  }
  return cfg;
}

RunConfig RunConfig::load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) invalid("cannot open config " + file.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    invalid(std::string("config is not valid JSON: ") + e.what());
  }
  return from_json(doc, std::filesystem::absolute(file).parent_path());
}

RunConfig RunConfig::default_config() {
  RunConfig cfg;
  cfg.run_id = "default";
  struct Planted {
    const char* id;
    std::uint64_t seed;
    double rho;
    double min_rate;
    double max_rate;
    std::size_t informative;
    double noise;
  };
  const Planted planted[] = {
      {"planted_a", 11, 0.5, 0.05, 0.5, 6, 0.5},  {"planted_b", 12, 0.3, 0.05, 0.5, 10, 1.0},
      {"planted_c", 13, 0.7, 0.1, 0.6, 4, 0.3},   {"planted_d", 14, 0.4, 0.02, 0.3, 8, 1.5},
      {"planted_e", 15, 0.6, 0.05, 0.4, 12, 0.8},
  };
  for (const auto& p : planted) {
    BuiltinSpec b;
    b.seed = p.seed;
    b.block_rho = p.rho;
    b.min_rate = p.min_rate;
    b.max_rate = p.max_rate;
    b.informative = p.informative;
    b.label_noise = p.noise;
    cfg.datasets.push_back({p.id, std::nullopt, b, "label"});
  }
  auto gen = [](std::string id, GeneratorKind kind, std::string family, std::size_t k = 5, double flip = 0.0) {
    GeneratorSpec g;
    g.id = std::move(id);
    g.kind = kind;
    g.family = std::move(family);
    g.k_neighbors = k;
    g.flip_rate = flip;
    return g;
  };
  cfg.generators = {
      gen("independent", GeneratorKind::IndependentMarginals, "statistical"),
      gen("copula", GeneratorKind::GaussianCopula, "statistical"),
      gen("smote_k3", GeneratorKind::Smote, "oversampling", 3),
      gen("smote_k5", GeneratorKind::Smote, "oversampling", 5),
      gen("noisy_0.00", GeneratorKind::NoisyCopy, "noise", 5, 0.0),
      gen("noisy_0.05", GeneratorKind::NoisyCopy, "noise", 5, 0.05),
      gen("noisy_0.10", GeneratorKind::NoisyCopy, "noise", 5, 0.1),
      gen("noisy_0.20", GeneratorKind::NoisyCopy, "noise", 5, 0.2),
      gen("noisy_0.30", GeneratorKind::NoisyCopy, "noise", 5, 0.3),
      gen("noisy_0.40", GeneratorKind::NoisyCopy, "noise", 5, 0.4),
  };
  for (auto kind :
       {ClassifierKind::Logistic, ClassifierKind::BernoulliNB, ClassifierKind::Knn, ClassifierKind::DecisionTree})
    cfg.classifiers.push_back(ClassifierSpec::defaults(kind));
  return cfg;
}

Dataset load_dataset(const DatasetEntry& entry) {
  if (entry.builtin) return make_builtin_dataset(*entry.builtin);
  if (entry.path) return load_csv(*entry.path, entry.label_name);
  throw Error(ErrorCode::ConfigInvalid, "dataset '" + entry.id + "' has no source");
}

}  // namespace synthmetric
