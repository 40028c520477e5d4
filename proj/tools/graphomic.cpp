// graphomic command-line entry point.
//
// Exit codes: 0 success, 2 configuration error, 3 data error.

#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <map>
#include <sstream>

#include "CLI11.hpp"

#include "graphomic/errors.hpp"
#include "graphomic/eval/pipeline.hpp"
#include "graphomic/eval/sweep.hpp"
#include "graphomic/graphbuild.hpp"
#include "graphomic/io/config.hpp"
#include "graphomic/io/csv.hpp"
#include "graphomic/io/dataset_io.hpp"
#include "graphomic/io/plots.hpp"
#include "graphomic/synthgen.hpp"

namespace fs = std::filesystem;
using namespace graphomic;

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kDataError = 3;

io::Json stats_json(const GraphStats& s) {
  io::Json hist = io::Json::object();
  for (const auto& [deg, count] : s.degree_histogram) hist[std::to_string(deg)] = count;
  return {{"edges", s.edges}, {"isolated", s.isolated}, {"degree_histogram", hist},
          {"homophily", s.homophily}};
}

std::map<std::string, std::vector<int>> label_map(const MultiModalDataset& ds) {
  std::map<std::string, std::vector<int>> out;
  for (const auto& l : ds.labels) out[l.name] = l.y;
  return out;
}

struct FeatureFile {
  std::vector<std::string> ids;
  Matrix X;
};

FeatureFile read_feature_csv(const fs::path& path) {
  const io::CsvTable t = io::read_csv(path);
  if (t.header.size() < 2) throw DataError(path.string() + ": expected an id column and features");
  FeatureFile f{{}, Matrix(static_cast<Index>(t.rows.size()), static_cast<Index>(t.header.size() - 1))};
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    f.ids.push_back(t.rows[r][0]);
    for (std::size_t c = 1; c < t.header.size(); ++c) {
      f.X(static_cast<Index>(r), static_cast<Index>(c - 1)) = io::parse_double(
          t.rows[r][c], path.string() + ":" + std::to_string(t.line_numbers[r]));
    }
  }
  return f;
}

// Label classes from a labels CSV, rows in `order` (file order when empty).
// Label strings map to ids in sorted order, as in ingest.
std::map<std::string, std::vector<int>> read_labels_csv(const fs::path& path,
                                                        const std::vector<std::string>& order) {
  const io::CsvTable t = io::read_csv(path);
  std::map<std::string, std::size_t> row_of;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    if (!row_of.emplace(t.rows[r][0], r).second) {
      throw DataError(path.string() + ": duplicate sample id " + t.rows[r][0]);
    }
  }
  std::vector<std::size_t> rows;
  if (order.empty()) {
    for (std::size_t r = 0; r < t.rows.size(); ++r) rows.push_back(r);
  } else {
    for (const auto& id : order) {
      const auto it = row_of.find(id);
      if (it == row_of.end()) throw DataError(path.string() + ": no label for sample id " + id);
      rows.push_back(it->second);
    }
  }
  std::map<std::string, std::vector<int>> out;
  for (std::size_t c = 1; c < t.header.size(); ++c) {
    std::set<std::string> values;
    for (const auto& row : t.rows) values.insert(row[c]);
    std::map<std::string, int> id_of;
    for (const auto& v : values) id_of.emplace(v, static_cast<int>(id_of.size()));
    auto& y = out[t.header[c]];
    for (std::size_t r : rows) y.push_back(id_of.at(t.rows[r][c]));
  }
  return out;
}

// ---- gen-synth ----

struct GenSynthArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
};

int gen_synth(const GenSynthArgs& a) {
  SynthConfig cfg;
  if (!a.config.empty()) {
    io::Json j = io::load_json(a.config);
    if (a.seed && j.is_object()) j["seed"] = *a.seed;
    cfg = io::synth_config_from_json(j);
  } else {
    if (!a.seed) throw ConfigError("gen-synth needs --seed or --config");
    cfg.seed = *a.seed;
    cfg.validate();
  }
  const MultiModalDataset ds = sample_synthetic_dataset(cfg);
  io::export_dataset(ds, a.out);
  const fs::path meta_path = fs::path(a.out) / "meta.json";
  io::Json meta = io::load_json(meta_path);
  meta["generator"] = io::to_json(cfg);
  meta["seed"] = cfg.seed;
  io::save_json(meta_path, meta);
  io::save_json(fs::path(a.out) / "synth_config.json", io::to_json(cfg));
  std::cout << "wrote " << ds.n() << " samples to " << a.out << '\n';
  return kOk;
}

// ---- build-graph ----

struct BuildGraphArgs {
  std::string data;
  std::string features;
  std::string labels;
  std::string method = "hybrid";
  int k = 4;
  double r = 1.0;
  double homophily = 0.51;
  std::size_t edges = 5000;
  std::string label;
  std::vector<std::string> modalities;
  bool no_weights = false;
  std::uint64_t seed = 0;
  std::string out;
};

int build_graph(const BuildGraphArgs& a) {
  if (a.data.empty() == a.features.empty()) {
    throw ConfigError("build-graph needs exactly one of --data or --features");
  }
  GraphParams p;
  p.method = parse_graph_method(a.method);
  p.k = a.k;
  p.r = a.r;
  p.homophily = a.homophily;
  p.total_edges = a.edges;
  p.exp_weights = !a.no_weights;
  p.validate();

  Matrix X;
  std::map<std::string, std::vector<int>> labels;
  if (!a.features.empty()) {
    FeatureFile f = read_feature_csv(a.features);
    if (!a.labels.empty()) labels = read_labels_csv(a.labels, f.ids);
    X = std::move(f.X);
  } else {
    const MultiModalDataset ds = io::ingest(a.data).dataset;
    labels = label_map(ds);
    std::vector<std::string> names = a.modalities;
    if (names.empty()) {
      for (const auto& m : ds.modalities) names.push_back(m.name);
    }
    X = ds.modality(names.at(0)).X;
    for (std::size_t m = 1; m < names.size(); ++m) X = hconcat(X, ds.modality(names[m]).X);
  }

  Graph g;
  if (p.method == GraphMethod::homophily) {
    if (labels.empty()) throw ConfigError("label-sampled graphs need labels");
    const auto it = a.label.empty() ? labels.begin() : labels.find(a.label);
    if (it == labels.end()) throw ConfigError("unknown label class '" + a.label + "'");
    g = sample_graph_with_homophily(it->second, p.homophily, p.total_edges, a.seed);
  } else {
    const Matrix d = euclidean_distances(X);
    if (p.method == GraphMethod::knn) g = knn_edges_from_distances(d, p.k);
    if (p.method == GraphMethod::radius) g = radius_edges_from_distances(d, p.r);
    if (p.method == GraphMethod::hybrid) g = hybrid_edges_from_distances(d, p.k, p.r);
    if (p.exp_weights) g = exp_edge_weight(g, d);
  }
  io::write_graph_csv(g, a.out);
  io::Json report = stats_json(graph_stats(g, &labels));
  report["graph"] = io::to_json(p);
  report["seed"] = a.seed;
  io::save_json(a.out + ".json", report);
  std::cout << report.dump(2) << '\n';
  return kOk;
}

// ---- homophily ----

struct HomophilyArgs {
  std::string data;
  std::string labels;
  std::string graph;
  std::string label;
  std::string out;
  std::vector<std::size_t> counts;
  Index n_per_class = 500;
  std::uint64_t seed = 0;
};

int homophily(const HomophilyArgs& a) {
  double h = 0.0;
  io::Json stats;
  if (!a.counts.empty()) {
    if (a.counts.size() != 3) throw ConfigError("--counts takes three values: same-A,cross,same-B");
    if (!a.data.empty() || !a.graph.empty()) throw ConfigError("--counts excludes --data/--graph");
    std::vector<int> labels(static_cast<std::size_t>(2 * a.n_per_class), 0);
    std::fill(labels.begin() + a.n_per_class, labels.end(), 1);
    const ClassPairCounts c{a.counts[0], a.counts[1], a.counts[2]};
    const Graph g = sample_class_pair_edges(labels, c, a.seed);
    h = edge_homophily(g, labels);
    stats = stats_json(graph_stats(g));
    stats["homophily"] = {{"synthetic", h}};
  } else {
    if (a.graph.empty() || a.data.empty() == a.labels.empty()) {
      throw ConfigError("homophily needs --graph with one of --data or --labels, or --counts");
    }
    const auto labels =
        a.data.empty() ? read_labels_csv(a.labels, {}) : label_map(io::ingest(a.data).dataset);
    if (labels.empty()) throw DataError("no label classes found");
    const auto it = a.label.empty() ? labels.begin() : labels.find(a.label);
    if (it == labels.end()) throw ConfigError("unknown label class '" + a.label + "'");
    const Graph g = io::read_graph_csv(a.graph, static_cast<Index>(it->second.size()));
    h = edge_homophily(g, it->second);
    stats = stats_json(graph_stats(g, &labels));
  }
  if (!a.out.empty()) io::save_json(a.out, stats);
  std::cout << io::format_fixed(h, 3) << '\n';
  return kOk;
}

// ---- train ----

struct TrainArgs {
  std::string model;
  std::string spec;
  std::string data;
  std::string out;
};

int train(const TrainArgs& a) {
  io::Json j = io::load_json(a.spec);
  if (!a.model.empty() && j.is_object()) j["model"] = a.model;
  const PipelineConfig cfg = io::pipeline_config_from_json(j);
  const auto in = io::ingest(a.data);

  const PipelineResult result =
      run_pipeline(in.dataset, cfg, in.folds ? &*in.folds : nullptr);

  const fs::path out(a.out);
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  const fs::path emb_path = out.parent_path() / (out.stem().string() + "_embedding.csv");
  std::vector<std::string> cols;
  for (Index c = 0; c < result.embedding.H.cols(); ++c) cols.push_back("h" + std::to_string(c));
  io::write_matrix_csv(emb_path, in.dataset.sample_ids, cols, result.embedding.H);

  io::Json graph = nullptr;
  if (is_graph_model(cfg.model)) {
    const BuiltGraphs g = build_pipeline_graphs(in.dataset, cfg);
    graph = {{"edges", g.edges}, {"isolated", g.isolated},
             {"homophily", g.homophily ? io::Json(*g.homophily) : io::Json(nullptr)}};
  }
  const auto& losses = result.embedding.loss_history;
  const io::Json run = {
      {"spec", io::to_json(cfg)},
      {"seed", cfg.seed},
      {"graph_stats", graph},
      {"final_loss", losses.empty() ? io::Json(nullptr) : io::Json(losses.back())},
      {"first_loss", losses.empty() ? io::Json(nullptr) : io::Json(losses.front())},
      {"networks_trained", result.embedding.networks_trained},
      {"embedding", emb_path.filename().string()},
      {"report_header", report_header()},
      {"report_row", format_report_row(result.row)},
  };
  io::save_json(out, run);
  std::cout << report_header() << '\n' << format_report_row(result.row) << '\n';
  return kOk;
}

// ---- sweep ----

struct SweepArgs {
  std::string config;
  std::string out;
  std::string data;
  int threads = 0;
};

int sweep(const SweepArgs& a) {
  const io::Json j = io::load_json(a.config);
  SweepConfig cfg = io::sweep_config_from_json(j);
  if (!a.data.empty()) cfg.data_dir = a.data;

  MultiModalDataset ds;
  std::optional<FoldPlan> folds;
  if (cfg.data_dir.empty()) {
    ds = sample_synthetic_dataset(cfg.synthetic);
  } else {
    auto in = io::ingest(cfg.data_dir);
    ds = std::move(in.dataset);
    folds = std::move(in.folds);
  }
  const fs::path out(a.out);
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  io::save_json(out.string() + ".config.json", io::to_json(cfg));

  const SweepOutcome outcome = run_sweep(ds, cfg, out, a.threads, folds ? &*folds : nullptr);
  std::cerr << outcome.cells << " cells, " << outcome.skipped << " already done, "
            << outcome.rows.size() << " run\n";
  for (const auto& s : summarize(outcome.rows)) {
    std::cerr << s.model << ' ' << s.label_class << " k=" << (s.k.empty() ? "-" : s.k)
              << " r=" << (s.r.empty() ? "-" : s.r)
              << " h=" << (s.homophily.empty() ? "-" : s.homophily) << "  test_acc "
              << io::format_fixed(s.mean_test_acc, 3) << " +- " << io::format_fixed(s.std_test_acc, 3)
              << " (n=" << s.runs << ")\n";
  }
  return kOk;
}

// ---- plot ----

struct PlotArgs {
  std::string report;
  std::string data;
  std::string modality;
  std::string label;
  std::string out;
};

int plot(const PlotArgs& a) {
  if (a.report.empty() == a.data.empty()) throw ConfigError("plot needs exactly one of --report or --data");
  if (!a.report.empty()) {
    const io::PlotOutput res = io::emit_heatmaps(io::read_report(a.report), a.out);
    for (const auto& w : res.warnings) std::cerr << "warning: " << w << '\n';
    for (const auto& f : res.files) std::cout << f.string() << '\n';
    return kOk;
  }
  const auto in = io::ingest(a.data);
  const MultiModalDataset& ds = in.dataset;
  const LabelClass& lc = a.label.empty() ? ds.labels.at(0) : ds.label(a.label);
  fs::create_directories(a.out);
  std::vector<std::string> names;
  if (a.modality.empty()) {
    for (const auto& m : ds.modalities) names.push_back(m.name);
  } else {
    names.push_back(a.modality);
  }
  for (const auto& name : names) {
    const PcaProjection proj = pca_separation_check(ds.modality(name).X, lc.y);
    const fs::path path = fs::path(a.out) / ("pca_" + name + ".svg");
    io::write_text(path, io::pca_scatter_svg(proj, lc.y, name + " PCA by " + lc.name));
    std::cout << path.string() << '\n';
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"graphomic: graph construction, embedding models and evaluation for multi-modal data"};
  app.require_subcommand(1);

  GenSynthArgs gs;
  auto* gen = app.add_subcommand("gen-synth", "Generate the two-modality synthetic dataset");
  gen->add_option("--config", gs.config, "Synthetic generator JSON");
  gen->add_option("--seed", gs.seed, "Seed (overrides the config)");
  gen->add_option("--out", gs.out, "Output directory")->required();

  BuildGraphArgs bg;
  auto* build = app.add_subcommand("build-graph", "Build a graph over a dataset");
  build->add_option("--data", bg.data, "Dataset directory");
  build->add_option("--features", bg.features, "Single feature CSV (id column first)");
  build->add_option("--labels", bg.labels, "Labels CSV for stats with --features");
  build->add_option("--method", bg.method, "knn, radius, hybrid or homophily");
  build->add_option("--k", bg.k, "Neighbours for knn/hybrid");
  build->add_option("--r", bg.r, "Radius for radius/hybrid");
  build->add_option("--homophily", bg.homophily, "Target homophily for label-sampled graphs");
  build->add_option("--edges", bg.edges, "Edge count for label-sampled graphs");
  build->add_option("--label", bg.label, "Label class");
  build->add_option("--modality", bg.modalities, "Modalities to concatenate (default: all)");
  build->add_flag("--no-weights", bg.no_weights, "Keep unit edge weights");
  build->add_option("--seed", bg.seed, "Seed for label-sampled graphs");
  build->add_option("--out", bg.out, "Edge list CSV")->required();

  HomophilyArgs ha;
  auto* homo = app.add_subcommand("homophily", "Print the edge homophily of a graph");
  homo->add_option("--data", ha.data, "Dataset directory");
  homo->add_option("--labels", ha.labels, "Labels CSV (node i = row i)");
  homo->add_option("--graph", ha.graph, "Edge list CSV");
  homo->add_option("--out", ha.out, "Stats JSON");
  homo->add_option("--label", ha.label, "Label class");
  homo->add_option("--counts", ha.counts, "Sample a two-class graph with same-A,cross,same-B edge counts")
      ->delimiter(',')
      ->expected(3);
  homo->add_option("--n-per-class", ha.n_per_class, "Nodes per class for --counts");
  homo->add_option("--seed", ha.seed, "Seed for --counts");

  TrainArgs ta;
  auto* tr = app.add_subcommand("train", "Train one model and evaluate its embedding");
  tr->add_option("--model", ta.model, "cnc-vae, h-vae, cnc-vgae, cnc-dgi, 2g-dgi or hetero-dgi");
  tr->add_option("--spec", ta.spec, "Run config JSON")->required();
  tr->add_option("--data", ta.data, "Dataset directory")->required();
  tr->add_option("--out", ta.out, "run.json path")->required();

  SweepArgs sa;
  auto* sw = app.add_subcommand("sweep", "Run a resumable grid of pipeline runs");
  sw->add_option("--config", sa.config, "Sweep config JSON")->required();
  sw->add_option("--out", sa.out, "Report CSV")->required();
  sw->add_option("--data", sa.data, "Dataset directory (overrides the config)");
  sw->add_option("--threads", sa.threads, "Worker threads (default GRAPHOMIC_THREADS or cores)");

  PlotArgs pa;
  auto* pl = app.add_subcommand("plot", "Write SVG heatmaps from a report or PCA scatters from a dataset");
  pl->add_option("--report", pa.report, "Report CSV");
  pl->add_option("--data", pa.data, "Dataset directory");
  pl->add_option("--modality", pa.modality, "Modality for the PCA scatter (default: all)");
  pl->add_option("--label", pa.label, "Label class for colouring");
  pl->add_option("--out", pa.out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*gen) return gen_synth(gs);
    if (*build) return build_graph(bg);
    if (*homo) return homophily(ha);
    if (*tr) return train(ta);
    if (*sw) return sweep(sa);
    if (*pl) return plot(pa);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  }
  return kOk;
}
