#pragma once

#include <filesystem>
#include <optional>

#include "graphomic/eval/splits.hpp"
#include "graphomic/graph.hpp"
#include "graphomic/synthgen.hpp"

namespace graphomic::io {

struct IngestedDataset {
  MultiModalDataset dataset;
  std::optional<FoldPlan> folds;
};

/// Reads a dataset directory:
///   labels.csv      id + one column per label class; fixes the sample order
///   <name>.csv      one per modality, id in column 0
///   folds.csv       optional, id + fold index
///   meta.json       optional, {"modalities": [{"name", "file", "categorical"}]}
/// Without meta.json every other *.csv is a modality (sorted by file name)
/// and is flagged categorical when all its values are 0 or 1.
/// Label classes map their distinct strings to ids in sorted order.
/// Throws DataError naming missing/extra ids, duplicate ids and ragged lines.
IngestedDataset ingest(const std::filesystem::path& dir);

/// Writes the layout read by ingest, including meta.json.
void export_dataset(const MultiModalDataset& dataset, const std::filesystem::path& dir,
                    const std::optional<FoldPlan>& folds = std::nullopt);

/// i,j,weight,type per edge; node types, when present, go to "<path>.nodes".
void write_graph_csv(const Graph& graph, const std::filesystem::path& path);
Graph read_graph_csv(const std::filesystem::path& path, Index n_nodes);

}  // namespace graphomic::io
