#include "graphomic/io/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "graphomic/errors.hpp"

namespace graphomic::io {

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
}

Json load_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return Json::parse(buf.str());
  } catch (const Json::parse_error& e) {
    throw ConfigError(path.string() + ": invalid JSON: " + e.what());
  }
}

std::string canonical_text(const Json& j) { return j.dump(2) + "\n"; }

void save_json(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out << canonical_text(j);
}

namespace {

/// Reads keys out of one JSON object and rejects the ones nobody asked for.
class Reader {
 public:
  Reader(const Json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j.is_object()) throw ConfigError(where_ + ": expected a JSON object");
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key) && !j_.at(key).is_null();
  }

  template <typename T>
  T get(const std::string& key, T fallback) {
    if (!has(key)) return fallback;
    return convert<T>(key);
  }

  template <typename T>
  T require(const std::string& key) {
    if (!has(key)) throw ConfigError(where_ + ": missing required key '" + key + "'");
    return convert<T>(key);
  }

  const Json& object(const std::string& key) {
    seen_.insert(key);
    static const Json empty = Json::object();
    if (!j_.contains(key) || j_.at(key).is_null()) return empty;
    return j_.at(key);
  }

  std::string path(const std::string& key) const { return where_ + "." + key; }

  void finish() const {
    std::string unknown;
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.count(key)) unknown += (unknown.empty() ? "'" : ", '") + key + "'";
    }
    if (!unknown.empty()) throw ConfigError(where_ + ": unknown key(s) " + unknown);
  }

 private:
  template <typename T>
  T convert(const std::string& key) {
    const Json& v = j_.at(key);
    try {
      if constexpr (std::is_same_v<T, double>) {
        if (!v.is_number()) throw ConfigError("");
      } else if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>) {
        if (!v.is_number_integer()) throw ConfigError("");
        if constexpr (std::is_unsigned_v<T>) {
          if (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0) {
            throw ConfigError("");
          }
        }
      }
      return v.get<T>();
    } catch (const std::exception&) {
      throw ConfigError(path(key) + ": wrong type (" + std::string(v.type_name()) + ")");
    }
  }

  const Json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

}  // namespace

Json to_json(const SynthConfig& c) {
  return {{"n_per_class", c.n_per_class}, {"dim_alpha", c.dim_alpha},
          {"dim_beta", c.dim_beta},       {"mu_alpha_lo", c.mu_alpha_lo},
          {"mu_alpha_hi", c.mu_alpha_hi}, {"mu_beta_lo", c.mu_beta_lo},
          {"mu_beta_hi", c.mu_beta_hi},   {"theta_alpha", c.theta_alpha},
          {"theta_beta", c.theta_beta},   {"sigma", c.sigma},
          {"sigma_alpha", c.sigma_alpha}, {"sigma_beta", c.sigma_beta},
          {"seed", c.seed}};
}

SynthConfig synth_config_from_json(const Json& j) {
  Reader r(j, "synthetic");
  SynthConfig c;
  c.n_per_class = r.get<Index>("n_per_class", c.n_per_class);
  c.dim_alpha = r.get<Index>("dim_alpha", c.dim_alpha);
  c.dim_beta = r.get<Index>("dim_beta", c.dim_beta);
  c.mu_alpha_lo = r.get<double>("mu_alpha_lo", c.mu_alpha_lo);
  c.mu_alpha_hi = r.get<double>("mu_alpha_hi", c.mu_alpha_hi);
  c.mu_beta_lo = r.get<double>("mu_beta_lo", c.mu_beta_lo);
  c.mu_beta_hi = r.get<double>("mu_beta_hi", c.mu_beta_hi);
  c.theta_alpha = r.get<double>("theta_alpha", c.theta_alpha);
  c.theta_beta = r.get<double>("theta_beta", c.theta_beta);
  c.sigma = r.get<double>("sigma", c.sigma);
  c.sigma_alpha = r.get<std::vector<double>>("sigma_alpha", c.sigma_alpha);
  c.sigma_beta = r.get<std::vector<double>>("sigma_beta", c.sigma_beta);
  c.seed = r.require<std::uint64_t>("seed");
  r.finish();
  try {
    c.validate();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("synthetic: ") + e.what());
  }
  return c;
}

Json to_json(const nn::Regularizer& reg) {
  return {{"kind", reg.kind == nn::Regularizer::Kind::kl ? "kl" : "mmd"},
          {"bandwidth", reg.bandwidth},
          {"estimator", reg.estimator == nn::MmdEstimator::biased ? "biased" : "unbiased"}};
}

nn::Regularizer regularizer_from_json(const Json& j, nn::Regularizer defaults) {
  Reader r(j, "regularizer");
  nn::Regularizer reg = defaults;
  const std::string kind = r.get<std::string>("kind", reg.kind == nn::Regularizer::Kind::kl ? "kl" : "mmd");
  if (kind == "kl") {
    reg.kind = nn::Regularizer::Kind::kl;
  } else if (kind == "mmd") {
    reg.kind = nn::Regularizer::Kind::mmd;
  } else {
    throw ConfigError("regularizer.kind: expected kl or mmd, got '" + kind + "'");
  }
  reg.bandwidth = r.get<double>("bandwidth", reg.bandwidth);
  const std::string est = r.get<std::string>(
      "estimator", reg.estimator == nn::MmdEstimator::biased ? "biased" : "unbiased");
  if (est == "biased") {
    reg.estimator = nn::MmdEstimator::biased;
  } else if (est == "unbiased") {
    reg.estimator = nn::MmdEstimator::unbiased;
  } else {
    throw ConfigError("regularizer.estimator: expected biased or unbiased, got '" + est + "'");
  }
  r.finish();
  return reg;
}

Json to_json(const VaeSpec& s) {
  return {{"ds", s.ds},
          {"ls", s.ls},
          {"beta", s.beta},
          {"regularizer", to_json(s.reg)},
          {"epochs", s.epochs},
          {"batch_size", s.batch_size},
          {"learning_rate", s.learning_rate}};
}

VaeSpec vae_spec_from_json(const Json& j) {
  Reader r(j, "vae");
  VaeSpec s;
  s.ds = r.get<Index>("ds", s.ds);
  s.ls = r.get<Index>("ls", s.ls);
  s.beta = r.get<double>("beta", s.beta);
  s.reg = regularizer_from_json(r.object("regularizer"), s.reg);
  s.epochs = r.get<int>("epochs", s.epochs);
  s.batch_size = r.get<Index>("batch_size", s.batch_size);
  s.learning_rate = r.get<double>("learning_rate", s.learning_rate);
  r.finish();
  s.validate();
  return s;
}

Json to_json(const GraphModelSpec& s) {
  Json integration = nullptr;
  if (s.integration) integration = *s.integration == Integration::avg ? "avg" : "dense";
  return {{"conv_layers", s.conv_layers},
          {"ls", s.ls},
          {"ds", s.ds},
          {"integration", integration},
          {"regularizer", to_json(s.reg)},
          {"epochs", s.epochs},
          {"learning_rate", s.learning_rate}};
}

GraphModelSpec graph_model_spec_from_json(const Json& j) {
  Reader r(j, "graph_model");
  GraphModelSpec s;
  s.conv_layers = r.get<int>("conv_layers", s.conv_layers);
  s.ls = r.get<Index>("ls", s.ls);
  s.ds = r.get<Index>("ds", s.ds);
  if (r.has("integration")) {
    const std::string v = r.require<std::string>("integration");
    if (v == "avg") {
      s.integration = Integration::avg;
    } else if (v == "dense") {
      s.integration = Integration::dense;
    } else {
      throw ConfigError("graph_model.integration: expected avg, dense or null, got '" + v + "'");
    }
  }
  s.reg = regularizer_from_json(r.object("regularizer"), s.reg);
  s.epochs = r.get<int>("epochs", s.epochs);
  s.learning_rate = r.get<double>("learning_rate", s.learning_rate);
  r.finish();
  s.validate();
  return s;
}

Json to_json(const GraphParams& p) {
  return {{"method", to_string(p.method)},
          {"k", p.k},
          {"r", p.r},
          {"exp_weights", p.exp_weights},
          {"homophily", p.homophily},
          {"total_edges", p.total_edges},
          {"independent_graphs", p.independent_graphs}};
}

GraphParams graph_params_from_json(const Json& j) {
  Reader r(j, "graph");
  GraphParams p;
  p.method = parse_graph_method(r.get<std::string>("method", to_string(p.method)));
  p.k = r.get<int>("k", p.k);
  p.r = r.get<double>("r", p.r);
  p.exp_weights = r.get<bool>("exp_weights", p.exp_weights);
  p.homophily = r.get<double>("homophily", p.homophily);
  p.total_edges = r.get<std::size_t>("total_edges", p.total_edges);
  p.independent_graphs = r.get<bool>("independent_graphs", p.independent_graphs);
  r.finish();
  p.validate();
  return p;
}

Json to_json(const PipelineConfig& c) {
  return {{"model", to_string(c.model)},
          {"vae", to_json(c.vae)},
          {"graph_model", to_json(c.graph_model)},
          {"graph", to_json(c.graph)},
          {"modalities", c.modalities},
          {"label_class", c.label_class},
          {"split", c.split == SplitKind::holdout ? "holdout" : "kfold"},
          {"folds", c.folds},
          {"seed", c.seed},
          {"record_runtime", c.record_runtime}};
}

PipelineConfig pipeline_config_from_json(const Json& j, bool require_seed) {
  Reader r(j, "config");
  PipelineConfig c;
  c.model = parse_model_kind(r.get<std::string>("model", to_string(c.model)));
  c.vae = vae_spec_from_json(r.object("vae"));
  c.graph_model = graph_model_spec_from_json(r.object("graph_model"));
  c.graph = graph_params_from_json(r.object("graph"));
  c.modalities = r.get<std::vector<std::string>>("modalities", c.modalities);
  c.label_class = r.get<std::string>("label_class", c.label_class);
  const std::string split = r.get<std::string>("split", "holdout");
  if (split == "holdout") {
    c.split = SplitKind::holdout;
  } else if (split == "kfold") {
    c.split = SplitKind::kfold;
  } else {
    throw ConfigError("config.split: expected holdout or kfold, got '" + split + "'");
  }
  c.folds = r.get<int>("folds", c.folds);
  c.seed = require_seed ? r.require<std::uint64_t>("seed") : r.get<std::uint64_t>("seed", c.seed);
  c.record_runtime = r.get<bool>("record_runtime", c.record_runtime);
  r.finish();
  c.validate();
  return c;
}

Json to_json(const SweepConfig& c) {
  Json models = Json::array();
  for (ModelKind m : c.models) models.push_back(to_string(m));
  return {{"base", to_json(c.base)},
          {"models", models},
          {"label_classes", c.label_classes},
          {"k", c.k_values},
          {"r", c.r_values},
          {"homophily", c.homophily_values},
          {"seeds", c.seeds},
          {"data", c.data_dir},
          {"synthetic", to_json(c.synthetic)}};
}

SweepConfig sweep_config_from_json(const Json& j) {
  Reader r(j, "sweep");
  SweepConfig c;
  c.base = pipeline_config_from_json(r.object("base"), false);
  for (const auto& name : r.get<std::vector<std::string>>("models", {})) {
    c.models.push_back(parse_model_kind(name));
  }
  c.label_classes = r.get<std::vector<std::string>>("label_classes", {});
  c.k_values = r.get<std::vector<int>>("k", {});
  c.r_values = r.get<std::vector<double>>("r", {});
  c.homophily_values = r.get<std::vector<double>>("homophily", {});
  c.seeds = r.require<std::vector<std::uint64_t>>("seeds");
  c.data_dir = r.get<std::string>("data", "");
  if (r.has("synthetic")) {
    c.synthetic = synth_config_from_json(r.object("synthetic"));
  } else {
    c.synthetic.seed = 0;
  }
  r.finish();
  c.validate();
  return c;
}

}  // namespace graphomic::io
