#include "graphomic/eval/pipeline.hpp"

#include <chrono>
#include <utility>

#include "graphomic/errors.hpp"
#include "graphomic/eval/naive_bayes.hpp"
#include "graphomic/graphbuild.hpp"
#include "graphomic/io/csv.hpp"
#include "graphomic/numcore/rng.hpp"

namespace graphomic {

namespace {

constexpr std::pair<ModelKind, const char*> kModelNames[] = {
    {ModelKind::cnc_vae, "cnc-vae"},   {ModelKind::h_vae, "h-vae"},
    {ModelKind::cnc_vgae, "cnc-vgae"}, {ModelKind::cnc_dgi, "cnc-dgi"},
    {ModelKind::two_graph_dgi, "2g-dgi"}, {ModelKind::hetero_dgi, "hetero-dgi"},
};

constexpr std::pair<GraphMethod, const char*> kMethodNames[] = {
    {GraphMethod::knn, "knn"},
    {GraphMethod::radius, "radius"},
    {GraphMethod::hybrid, "hybrid"},
    {GraphMethod::homophily, "homophily"},
};

// Salts for seeds derived from PipelineConfig::seed.
constexpr std::uint64_t kGraphSalt = 101;
constexpr std::uint64_t kSecondGraphSalt = 102;
constexpr std::uint64_t kModelSalt = 201;
constexpr std::uint64_t kSplitSalt = 301;

template <typename F>
auto stage(const char* name, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

std::vector<int> take(std::span<const int> y, const std::vector<Index>& idx) {
  std::vector<int> out;
  out.reserve(idx.size());
  for (Index i : idx) out.push_back(y[static_cast<std::size_t>(i)]);
  return out;
}

Matrix take_rows(const Matrix& H, const std::vector<Index>& idx) {
  Matrix out(static_cast<Index>(idx.size()), H.cols());
  for (std::size_t r = 0; r < idx.size(); ++r) out.row(static_cast<Index>(r)) = H.row(idx[r]);
  return out;
}

std::vector<const Modality*> selected_modalities(const MultiModalDataset& ds,
                                                 const PipelineConfig& cfg) {
  std::vector<const Modality*> out;
  if (cfg.modalities.empty()) {
    const std::size_t limit = cfg.model == ModelKind::h_vae ? ds.modalities.size() : 2;
    for (std::size_t m = 0; m < ds.modalities.size() && m < limit; ++m) {
      out.push_back(&ds.modalities[m]);
    }
  } else {
    for (const auto& name : cfg.modalities) out.push_back(&ds.modality(name));
  }
  if (out.size() < 2) throw DataError("the model needs at least two modalities");
  if (cfg.model != ModelKind::h_vae && out.size() != 2) {
    throw ConfigError(to_string(cfg.model) + " integrates exactly two modalities");
  }
  return out;
}

const LabelClass& selected_label(const MultiModalDataset& ds, const PipelineConfig& cfg) {
  if (cfg.label_class.empty()) {
    if (ds.labels.empty()) throw DataError("dataset has no label classes");
    return ds.labels.front();
  }
  return ds.label(cfg.label_class);
}

Graph feature_graph(const Matrix& X, const GraphParams& p) {
  const Matrix d = euclidean_distances(X);
  Graph g;
  switch (p.method) {
    case GraphMethod::knn: g = knn_edges_from_distances(d, p.k); break;
    case GraphMethod::radius: g = radius_edges_from_distances(d, p.r); break;
    case GraphMethod::hybrid: g = hybrid_edges_from_distances(d, p.k, p.r); break;
    case GraphMethod::homophily: throw ContractError("label-sampled graph requested as feature graph");
  }
  return p.exp_weights ? exp_edge_weight(g, d) : g;
}

}  // namespace

std::string to_string(ModelKind kind) {
  for (const auto& [k, name] : kModelNames) {
    if (k == kind) return name;
  }
  throw ContractError("unknown model kind");
}

ModelKind parse_model_kind(const std::string& name) {
  for (const auto& [k, n] : kModelNames) {
    if (name == n) return k;
  }
  throw ConfigError("unknown model '" + name +
                    "' (expected cnc-vae, h-vae, cnc-vgae, cnc-dgi, 2g-dgi or hetero-dgi)");
}

bool is_graph_model(ModelKind kind) noexcept {
  return kind != ModelKind::cnc_vae && kind != ModelKind::h_vae;
}

bool uses_two_graphs(ModelKind kind) noexcept {
  return kind == ModelKind::two_graph_dgi || kind == ModelKind::hetero_dgi;
}

std::string to_string(GraphMethod method) {
  for (const auto& [m, name] : kMethodNames) {
    if (m == method) return name;
  }
  throw ContractError("unknown graph method");
}

GraphMethod parse_graph_method(const std::string& name) {
  for (const auto& [m, n] : kMethodNames) {
    if (name == n) return m;
  }
  throw ConfigError("unknown graph method '" + name + "' (expected knn, radius, hybrid or homophily)");
}

void GraphParams::validate() const {
  if ((method == GraphMethod::knn || method == GraphMethod::hybrid) && k < 1) {
    throw ConfigError("graph k must be >= 1");
  }
  if ((method == GraphMethod::radius || method == GraphMethod::hybrid) && !(r > 0.0)) {
    throw ConfigError("graph r must be > 0");
  }
  if (method == GraphMethod::homophily) {
    if (!(homophily >= 0.0 && homophily <= 1.0)) throw ConfigError("homophily must be in [0, 1]");
    if (total_edges == 0) throw ConfigError("total_edges must be positive");
  }
}

void PipelineConfig::validate() const {
  vae.validate();
  graph_model.validate();
  graph.validate();
  if (split == SplitKind::kfold && folds < 2) throw ConfigError("folds must be >= 2");
  if (model != ModelKind::h_vae && !modalities.empty() && modalities.size() != 2) {
    throw ConfigError(to_string(model) + " integrates exactly two modalities");
  }
}

const std::vector<std::string>& report_columns() {
  static const std::vector<std::string> cols{
      "model", "modalities", "label_class", "k",        "r",        "homophily", "edges",
      "isolated", "seed",    "train_acc",   "test_acc", "epochs", "runtime_s"};
  return cols;
}

std::string report_header() { return io::join_csv(report_columns()); }

std::string format_report_row(const ReportRow& row) {
  auto opt = [](const auto& v, auto fmt) { return v ? fmt(*v) : std::string(); };
  return io::join_csv({
      row.model,
      row.modalities,
      row.label_class,
      opt(row.k, [](int v) { return std::to_string(v); }),
      opt(row.r, [](double v) { return io::format_shortest(v); }),
      opt(row.homophily, [](double v) { return io::format_fixed(v, 3); }),
      opt(row.edges, [](std::size_t v) { return std::to_string(v); }),
      opt(row.isolated, [](Index v) { return std::to_string(v); }),
      std::to_string(row.seed),
      io::format_fixed(row.train_acc, 3),
      io::format_fixed(row.test_acc, 3),
      std::to_string(row.epochs),
      opt(row.runtime_s, [](double v) { return io::format_fixed(v, 3); }),
  });
}

ReportRow parse_report_row(const std::string& line) {
  const auto f = io::split_csv_line(line);
  if (f.size() != report_columns().size()) {
    throw DataError("report row has " + std::to_string(f.size()) + " fields, expected " +
                    std::to_string(report_columns().size()));
  }
  ReportRow row;
  row.model = f[0];
  row.modalities = f[1];
  row.label_class = f[2];
  if (!f[3].empty()) row.k = static_cast<int>(io::parse_integer(f[3], "k"));
  if (!f[4].empty()) row.r = io::parse_double(f[4], "r");
  if (!f[5].empty()) row.homophily = io::parse_double(f[5], "homophily");
  if (!f[6].empty()) row.edges = static_cast<std::size_t>(io::parse_integer(f[6], "edges"));
  if (!f[7].empty()) row.isolated = static_cast<Index>(io::parse_integer(f[7], "isolated"));
  row.seed = static_cast<std::uint64_t>(std::stoull(f[8]));
  row.train_acc = io::parse_double(f[9], "train_acc");
  row.test_acc = io::parse_double(f[10], "test_acc");
  row.epochs = static_cast<int>(io::parse_integer(f[11], "epochs"));
  if (!f[12].empty()) row.runtime_s = io::parse_double(f[12], "runtime_s");
  return row;
}

BuiltGraphs build_pipeline_graphs(const MultiModalDataset& dataset, const PipelineConfig& cfg) {
  BuiltGraphs out;
  if (!is_graph_model(cfg.model)) return out;
  const auto mods = selected_modalities(dataset, cfg);
  const LabelClass& label = selected_label(dataset, cfg);
  const Rng root(cfg.seed);

  if (cfg.graph.method == GraphMethod::homophily) {
    out.graphs.push_back(sample_graph_with_homophily(
        label.y, cfg.graph.homophily, cfg.graph.total_edges, root.derive(kGraphSalt).seed()));
    if (uses_two_graphs(cfg.model)) {
      out.graphs.push_back(cfg.graph.independent_graphs
                               ? sample_graph_with_homophily(label.y, cfg.graph.homophily,
                                                             cfg.graph.total_edges,
                                                             root.derive(kSecondGraphSalt).seed())
                               : out.graphs.front());
    }
  } else if (uses_two_graphs(cfg.model)) {
    out.graphs.push_back(feature_graph(mods[0]->X, cfg.graph));
    out.graphs.push_back(feature_graph(mods[1]->X, cfg.graph));
  } else {
    out.graphs.push_back(feature_graph(hconcat(mods[0]->X, mods[1]->X), cfg.graph));
  }

  double h_sum = 0.0;
  bool h_defined = true;
  for (const Graph& g : out.graphs) {
    const GraphStats s = graph_stats(g);
    out.edges += s.edges;
    out.isolated += s.isolated;
    try {
      h_sum += edge_homophily(g, label.y);
    } catch (const UndefinedMetricError&) {
      h_defined = false;
    }
  }
  if (h_defined) out.homophily = h_sum / static_cast<double>(out.graphs.size());
  return out;
}

PipelineResult run_pipeline(const MultiModalDataset& dataset, const PipelineConfig& cfg,
                            const FoldPlan* precomputed) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  const Rng root(cfg.seed);

  const auto mods = stage("ingest", [&] {
    dataset.validate();
    return selected_modalities(dataset, cfg);
  });
  const LabelClass& label = stage("ingest", [&]() -> const LabelClass& {
    return selected_label(dataset, cfg);
  });

  const BuiltGraphs graphs = stage("graph", [&] { return build_pipeline_graphs(dataset, cfg); });

  const std::uint64_t model_seed = root.derive(kModelSalt).seed();
  auto recon = [](const Modality* m) {
    return m->categorical ? nn::ReconKind::bce : nn::ReconKind::mse;
  };
  Embedding emb = stage("train", [&] {
    const Matrix& x1 = mods[0]->X;
    const Matrix& x2 = mods[1]->X;
    switch (cfg.model) {
      case ModelKind::cnc_vae:
        return train_cnc_vae(x1, x2, cfg.vae, model_seed, recon(mods[0]), recon(mods[1]));
      case ModelKind::h_vae: {
        std::vector<Matrix> xs;
        std::vector<nn::ReconKind> kinds;
        for (const Modality* m : mods) {
          xs.push_back(m->X);
          kinds.push_back(recon(m));
        }
        return train_h_vae(xs, kinds, cfg.vae, model_seed);
      }
      case ModelKind::cnc_vgae:
        return train_cnc_vgae(x1, x2, graphs.graphs.at(0), cfg.graph_model, model_seed);
      case ModelKind::cnc_dgi:
        return train_cnc_dgi(x1, x2, graphs.graphs.at(0), cfg.graph_model, model_seed);
      case ModelKind::two_graph_dgi:
        return train_2g_dgi(x1, graphs.graphs.at(0), x2, graphs.graphs.at(1), cfg.graph_model,
                            model_seed);
      case ModelKind::hetero_dgi:
        return train_hetero_dgi(x1, graphs.graphs.at(0), x2, graphs.graphs.at(1),
                                cfg.graph_model, model_seed);
    }
    throw ContractError("unhandled model kind");
  });

  ReportRow row;
  stage("evaluate", [&] {
    require_finite(emb.H, "embedding");
    FoldPlan plan;
    if (precomputed) {
      if (precomputed->assignment.size() != label.y.size()) {
        throw DataError("fold plan covers " + std::to_string(precomputed->assignment.size()) +
                        " samples, dataset has " + std::to_string(label.y.size()));
      }
      plan = *precomputed;
    } else if (cfg.split == SplitKind::holdout) {
      plan = split_75_25(label.y, root.derive(kSplitSalt).seed(), label.name);
    } else {
      plan = stratified_kfold(label.y, cfg.folds, root.derive(kSplitSalt).seed(), label.name);
    }
    double train_sum = 0.0;
    double test_sum = 0.0;
    const auto folds = plan.evaluation_folds();
    for (int f : folds) {
      const auto train_idx = plan.train_indices(f);
      const auto test_idx = plan.test_indices(f);
      const auto y_train = take(label.y, train_idx);
      const auto y_test = take(label.y, test_idx);
      GaussianNb nb;
      nb.fit(take_rows(emb.H, train_idx), y_train);
      train_sum += accuracy(nb.predict(take_rows(emb.H, train_idx)), y_train);
      test_sum += accuracy(nb.predict(take_rows(emb.H, test_idx)), y_test);
    }
    row.train_acc = train_sum / static_cast<double>(folds.size());
    row.test_acc = test_sum / static_cast<double>(folds.size());
  });

  row.model = to_string(cfg.model);
  for (std::size_t m = 0; m < mods.size(); ++m) row.modalities += (m ? "+" : "") + mods[m]->name;
  row.label_class = label.name;
  if (is_graph_model(cfg.model)) {
    const GraphMethod method = cfg.graph.method;
    if (method == GraphMethod::knn || method == GraphMethod::hybrid) row.k = cfg.graph.k;
    if (method == GraphMethod::radius || method == GraphMethod::hybrid) row.r = cfg.graph.r;
    row.homophily = graphs.homophily;
    row.edges = graphs.edges;
    row.isolated = graphs.isolated;
  }
  row.seed = cfg.seed;
  row.epochs = is_graph_model(cfg.model) ? cfg.graph_model.epochs : cfg.vae.epochs;
  if (cfg.record_runtime) {
    row.runtime_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  return {std::move(row), std::move(emb)};
}

}  // namespace graphomic
