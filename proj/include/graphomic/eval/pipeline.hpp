#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "graphomic/eval/splits.hpp"
#include "graphomic/models/graph_models.hpp"
#include "graphomic/models/vae.hpp"
#include "graphomic/synthgen.hpp"

namespace graphomic {

enum class ModelKind { cnc_vae, h_vae, cnc_vgae, cnc_dgi, two_graph_dgi, hetero_dgi };

/// CLI spelling: cnc-vae, h-vae, cnc-vgae, cnc-dgi, 2g-dgi, hetero-dgi.
std::string to_string(ModelKind kind);
/// Throws ConfigError on an unknown name.
ModelKind parse_model_kind(const std::string& name);
bool is_graph_model(ModelKind kind) noexcept;
/// 2G-DGI and Hetero-DGI build one graph per modality.
bool uses_two_graphs(ModelKind kind) noexcept;

enum class GraphMethod { knn, radius, hybrid, homophily };

std::string to_string(GraphMethod method);
GraphMethod parse_graph_method(const std::string& name);

struct GraphParams {
  GraphMethod method = GraphMethod::hybrid;
  int k = 4;
  double r = 1.0;
  /// Weight each edge by exp(-distance) (feature-built graphs only).
  bool exp_weights = true;
  /// Label-sampled graphs: target edge homophily and edge count.
  double homophily = 0.51;
  std::size_t total_edges = 5000;
  /// Two-graph models reuse one label-sampled graph for both modalities
  /// unless this is set, in which case each modality gets its own draw.
  bool independent_graphs = false;

  void validate() const;
};

enum class SplitKind { holdout, kfold };

struct PipelineConfig {
  ModelKind model = ModelKind::cnc_dgi;
  VaeSpec vae{};
  GraphModelSpec graph_model{};
  GraphParams graph{};
  /// Empty selects the dataset's first two modalities.
  std::vector<std::string> modalities;
  /// Empty selects the dataset's first label class.
  std::string label_class;
  SplitKind split = SplitKind::holdout;
  int folds = 5;
  std::uint64_t seed = 0;
  /// When false the runtime_s column is left empty, making rows byte-stable.
  bool record_runtime = true;

  void validate() const;
};

/// One report line. Optional fields are written as empty CSV cells.
struct ReportRow {
  std::string model;
  std::string modalities;
  std::string label_class;
  std::optional<int> k;
  std::optional<double> r;
  std::optional<double> homophily;
  std::optional<std::size_t> edges;
  std::optional<Index> isolated;
  std::uint64_t seed = 0;
  double train_acc = 0.0;
  double test_acc = 0.0;
  int epochs = 0;
  std::optional<double> runtime_s;
};

const std::vector<std::string>& report_columns();
std::string report_header();
std::string format_report_row(const ReportRow& row);
/// Parses a line written by format_report_row.
ReportRow parse_report_row(const std::string& line);

/// Graphs the pipeline would train on, with their stats.
struct BuiltGraphs {
  std::vector<Graph> graphs;
  std::optional<double> homophily;
  std::size_t edges = 0;
  Index isolated = 0;
};

/// Builds the model's graph(s): one over [X1 | X2] for CNC models, one per
/// modality for 2G-DGI / Hetero-DGI.
BuiltGraphs build_pipeline_graphs(const MultiModalDataset& dataset, const PipelineConfig& cfg);

struct PipelineResult {
  ReportRow row;
  Embedding embedding;
};

/// build graph(s) -> train -> encode -> fit NB on the train part of every
/// evaluation fold -> mean train/test accuracy. Stage failures are rethrown
/// as StageError tagged with the stage name; config problems as ConfigError.
PipelineResult run_pipeline(const MultiModalDataset& dataset, const PipelineConfig& cfg,
                            const FoldPlan* precomputed = nullptr);

}  // namespace graphomic
