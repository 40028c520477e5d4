#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "graphomic/eval/pipeline.hpp"

namespace graphomic {

/// Cartesian grid around a base pipeline config. Graph axes apply to graph
/// models only and follow base.graph.method: k for knn, r for radius, k x r
/// for hybrid, homophily for label-sampled graphs. Empty axes keep the base value.
struct SweepConfig {
  PipelineConfig base{};
  std::vector<ModelKind> models;
  std::vector<std::string> label_classes;
  std::vector<int> k_values;
  std::vector<double> r_values;
  std::vector<double> homophily_values;
  std::vector<std::uint64_t> seeds;
  /// Dataset directory; when empty the synthetic generator is used.
  std::string data_dir;
  SynthConfig synthetic{};

  void validate() const;
};

/// Every cell of the grid in a fixed order (model, label, graph axes, seed).
std::vector<PipelineConfig> expand_grid(const SweepConfig& cfg);

/// FNV-1a 64-bit hash of the cell's canonical JSON, as 16 hex digits.
std::string cell_key(const PipelineConfig& cell);

std::uint64_t fnv1a64(std::string_view bytes) noexcept;

/// GRAPHOMIC_THREADS when set and positive, else the hardware concurrency (>= 1).
int worker_threads();

struct SweepOutcome {
  std::size_t cells = 0;
  std::size_t skipped = 0;
  /// Rows produced by this invocation, in grid order.
  std::vector<ReportRow> rows;
};

/// Runs every cell not yet recorded in `report`. Rows are appended to the
/// report CSV in grid order and their keys to "<report>.keys"; a resumed sweep
/// first trims report rows that lack a journal key. `threads` <= 0 uses
/// worker_threads(). The first cell failure stops scheduling and is rethrown
/// once running cells finish.
SweepOutcome run_sweep(const MultiModalDataset& dataset, const SweepConfig& cfg,
                       const std::filesystem::path& report, int threads = 0,
                       const FoldPlan* folds = nullptr);

/// Mean and population standard deviation of test accuracy over seeds.
struct CellSummary {
  std::string model;
  std::string label_class;
  std::string k;
  std::string r;
  std::string homophily;
  std::size_t runs = 0;
  double mean_test_acc = 0.0;
  double std_test_acc = 0.0;
};

std::vector<CellSummary> summarize(const std::vector<ReportRow>& rows);

}  // namespace graphomic
