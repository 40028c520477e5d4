#include "graphomic/io/dataset_io.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "graphomic/errors.hpp"
#include "graphomic/io/config.hpp"
#include "graphomic/io/csv.hpp"

namespace graphomic::io {

namespace fs = std::filesystem;

namespace {

constexpr const char* kLabelsFile = "labels.csv";
constexpr const char* kFoldsFile = "folds.csv";
constexpr const char* kMetaFile = "meta.json";

std::string list_ids(const std::vector<std::string>& ids) {
  std::string out;
  const std::size_t shown = std::min<std::size_t>(ids.size(), 10);
  for (std::size_t i = 0; i < shown; ++i) out += (i ? ", " : "") + ids[i];
  if (ids.size() > shown) out += ", ... (" + std::to_string(ids.size()) + " total)";
  return out;
}

/// id -> row index; rejects duplicates.
std::map<std::string, std::size_t> index_ids(const CsvTable& t, const fs::path& file) {
  std::map<std::string, std::size_t> out;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    if (!out.emplace(t.rows[r][0], r).second) {
      throw DataError(file.string() + ":" + std::to_string(t.line_numbers[r]) +
                      ": duplicate sample id '" + t.rows[r][0] + "'");
    }
  }
  return out;
}

/// Row order of `t` realigned to `order`; names missing and extra ids.
std::vector<std::size_t> align(const CsvTable& t, const fs::path& file,
                               const std::vector<std::string>& order) {
  const auto index = index_ids(t, file);
  std::vector<std::string> missing;
  std::vector<std::size_t> rows;
  rows.reserve(order.size());
  for (const auto& id : order) {
    auto it = index.find(id);
    if (it == index.end()) {
      missing.push_back(id);
    } else {
      rows.push_back(it->second);
    }
  }
  if (!missing.empty()) {
    throw DataError(file.filename().string() + " lacks sample id(s): " + list_ids(missing));
  }
  if (index.size() != order.size()) {
    const std::set<std::string> known(order.begin(), order.end());
    std::vector<std::string> extra;
    for (const auto& [id, r] : index) {
      if (!known.count(id)) extra.push_back(id);
    }
    throw DataError(file.filename().string() + " has sample id(s) absent from labels.csv: " +
                    list_ids(extra));
  }
  return rows;
}

struct ModalityFile {
  std::string name;
  fs::path file;
  std::optional<bool> categorical;
};

std::vector<ModalityFile> discover(const fs::path& dir) {
  std::vector<ModalityFile> out;
  const fs::path meta = dir / kMetaFile;
  if (fs::exists(meta)) {
    const Json j = load_json(meta);
    if (!j.contains("modalities") || !j.at("modalities").is_array()) {
      throw DataError(meta.string() + ": missing 'modalities' array");
    }
    for (const auto& m : j.at("modalities")) {
      try {
        out.push_back({m.at("name").get<std::string>(), dir / m.at("file").get<std::string>(),
                       m.contains("categorical") ? std::optional(m.at("categorical").get<bool>())
                                                 : std::nullopt});
      } catch (const Json::exception& e) {
        throw DataError(meta.string() + ": bad modality entry: " + e.what());
      }
    }
    return out;
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const fs::path p = entry.path();
    const std::string name = p.filename().string();
    if (p.extension() == ".csv" && name != kLabelsFile && name != kFoldsFile) files.push_back(p);
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) out.push_back({f.stem().string(), f, std::nullopt});
  return out;
}

}  // namespace

IngestedDataset ingest(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw DataError("dataset directory not found: " + dir.string());
  const fs::path labels_path = dir / kLabelsFile;
  if (!fs::exists(labels_path)) throw DataError("missing " + labels_path.string());

  IngestedDataset out;
  MultiModalDataset& ds = out.dataset;

  const CsvTable labels = read_csv(labels_path);
  if (labels.header.size() < 2) throw DataError(labels_path.string() + ": no label columns");
  index_ids(labels, labels_path);
  for (const auto& row : labels.rows) ds.sample_ids.push_back(row[0]);
  for (std::size_t c = 1; c < labels.header.size(); ++c) {
    LabelClass lc;
    lc.name = labels.header[c];
    std::set<std::string> distinct;
    for (const auto& row : labels.rows) distinct.insert(row[c]);
    lc.class_names.assign(distinct.begin(), distinct.end());
    lc.class_count = static_cast<int>(lc.class_names.size());
    for (const auto& row : labels.rows) {
      lc.y.push_back(static_cast<int>(
          std::lower_bound(lc.class_names.begin(), lc.class_names.end(), row[c]) -
          lc.class_names.begin()));
    }
    ds.labels.push_back(std::move(lc));
  }

  const auto files = discover(dir);
  if (files.empty()) throw DataError(dir.string() + ": no modality files");
  for (const auto& mf : files) {
    const CsvTable t = read_csv(mf.file);
    const auto rows = align(t, mf.file, ds.sample_ids);
    Modality m;
    m.name = mf.name;
    m.feature_names.assign(t.header.begin() + 1, t.header.end());
    m.X.resize(static_cast<Index>(rows.size()), static_cast<Index>(m.feature_names.size()));
    bool binary = true;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const auto& fields = t.rows[rows[r]];
      const std::string where =
          mf.file.filename().string() + ":" + std::to_string(t.line_numbers[rows[r]]);
      for (std::size_t f = 1; f < fields.size(); ++f) {
        const double v = parse_double(fields[f], where);
        binary = binary && (v == 0.0 || v == 1.0);
        m.X(static_cast<Index>(r), static_cast<Index>(f - 1)) = v;
      }
    }
    m.categorical = mf.categorical.value_or(binary && m.X.size() > 0);
    ds.modalities.push_back(std::move(m));
  }

  const fs::path folds_path = dir / kFoldsFile;
  if (fs::exists(folds_path)) {
    const CsvTable t = read_csv(folds_path);
    if (t.header.size() != 2) throw DataError(folds_path.string() + ": expected columns id,fold");
    const auto rows = align(t, folds_path, ds.sample_ids);
    FoldPlan plan;
    int max_fold = -1;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const auto fold = parse_integer(t.rows[rows[r]][1],
                                      folds_path.filename().string() + ":" +
                                          std::to_string(t.line_numbers[rows[r]]));
      if (fold < 0) throw DataError(folds_path.string() + ": negative fold index");
      plan.assignment.push_back(static_cast<int>(fold));
      max_fold = std::max(max_fold, static_cast<int>(fold));
    }
    plan.n_folds = max_fold + 1;
    if (plan.n_folds < 2) throw DataError(folds_path.string() + ": needs at least two folds");
    out.folds = std::move(plan);
  }
  ds.validate();
  return out;
}

void export_dataset(const MultiModalDataset& ds, const fs::path& dir,
                    const std::optional<FoldPlan>& folds) {
  ds.validate();
  fs::create_directories(dir);
  Json meta = {{"modalities", Json::array()}};
  for (const auto& m : ds.modalities) {
    std::vector<std::string> names = m.feature_names;
    if (names.empty()) {
      for (Index f = 0; f < m.X.cols(); ++f) names.push_back("f" + std::to_string(f));
    }
    write_matrix_csv(dir / (m.name + ".csv"), ds.sample_ids, names, m.X);
    meta["modalities"].push_back({{"name", m.name}, {"file", m.name + ".csv"},
                                  {"categorical", m.categorical}});
  }
  std::vector<std::string> header{"id"};
  for (const auto& lc : ds.labels) header.push_back(lc.name);
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < ds.sample_ids.size(); ++i) {
    std::vector<std::string> row{ds.sample_ids[i]};
    for (const auto& lc : ds.labels) {
      const int y = lc.y[i];
      row.push_back(lc.class_names.empty() ? std::to_string(y)
                                           : lc.class_names.at(static_cast<std::size_t>(y)));
    }
    rows.push_back(std::move(row));
  }
  write_csv(dir / kLabelsFile, header, rows);
  if (folds) {
    std::vector<std::vector<std::string>> frows;
    for (std::size_t i = 0; i < ds.sample_ids.size(); ++i) {
      frows.push_back({ds.sample_ids[i], std::to_string(folds->assignment.at(i))});
    }
    write_csv(dir / kFoldsFile, {"id", "fold"}, frows);
  }
  save_json(dir / kMetaFile, meta);
}

void write_graph_csv(const Graph& graph, const fs::path& path) {
  std::vector<std::vector<std::string>> rows;
  for (std::size_t e = 0; e < graph.n_edges(); ++e) {
    rows.push_back({std::to_string(graph.edges()[e].i), std::to_string(graph.edges()[e].j),
                    format_shortest(graph.weights()[e]), std::to_string(graph.edge_types()[e])});
  }
  write_csv(path, {"i", "j", "weight", "type"}, rows);
  if (!graph.node_types().empty()) {
    std::vector<std::vector<std::string>> nodes;
    for (std::size_t v = 0; v < graph.node_types().size(); ++v) {
      nodes.push_back({std::to_string(v), std::to_string(graph.node_types()[v])});
    }
    write_csv(path.string() + ".nodes", {"node", "type"}, nodes);
  }
}

Graph read_graph_csv(const fs::path& path, Index n_nodes) {
  const CsvTable t = read_csv(path);
  if (t.header != std::vector<std::string>{"i", "j", "weight", "type"}) {
    throw DataError(path.string() + ": expected header i,j,weight,type");
  }
  Graph g(n_nodes);
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const std::string where = path.filename().string() + ":" + std::to_string(t.line_numbers[r]);
    const auto i = static_cast<Index>(parse_integer(t.rows[r][0], where));
    const auto j = static_cast<Index>(parse_integer(t.rows[r][1], where));
    try {
      g.add_edge(i, j, parse_double(t.rows[r][2], where),
                 static_cast<int>(parse_integer(t.rows[r][3], where)));
    } catch (const ContractError& e) {
      throw DataError(where + ": " + e.what());
    }
  }
  const fs::path nodes_path = path.string() + ".nodes";
  if (fs::exists(nodes_path)) {
    const CsvTable nt = read_csv(nodes_path);
    if (nt.header != std::vector<std::string>{"node", "type"}) {
      throw DataError(nodes_path.string() + ": expected header node,type");
    }
    std::vector<int> types(static_cast<std::size_t>(n_nodes), 0);
    std::vector<bool> seen(types.size(), false);
    for (std::size_t r = 0; r < nt.rows.size(); ++r) {
      const std::string where = nodes_path.filename().string() + ":" + std::to_string(nt.line_numbers[r]);
      const auto v = parse_integer(nt.rows[r][0], where);
      if (v < 0 || v >= n_nodes || seen[static_cast<std::size_t>(v)]) {
        throw DataError(where + ": bad or repeated node " + nt.rows[r][0]);
      }
      seen[static_cast<std::size_t>(v)] = true;
      types[static_cast<std::size_t>(v)] = static_cast<int>(parse_integer(nt.rows[r][1], where));
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
      throw DataError(nodes_path.string() + ": missing node types");
    }
    g.set_node_types(std::move(types));
  }
  return g;
}

}  // namespace graphomic::io
