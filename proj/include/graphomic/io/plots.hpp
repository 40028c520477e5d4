#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "graphomic/eval/pipeline.hpp"
#include "graphomic/synthgen.hpp"

namespace graphomic::io {

/// Reads a report CSV written by the sweep (header checked).
std::vector<ReportRow> read_report(const std::filesystem::path& path);

struct PlotOutput {
  std::vector<std::filesystem::path> files;
  std::vector<std::string> warnings;
};

/// One accuracy heatmap per (model, label class): rows are k values, columns
/// r values (or homophily for label-sampled graphs); each cell is the mean
/// test accuracy over seeds. An empty report writes nothing and warns.
PlotOutput emit_heatmaps(const std::vector<ReportRow>& rows, const std::filesystem::path& out_dir);

/// Standalone SVG text for one heatmap; `rows` must share model and label.
std::string heatmap_svg(const std::vector<ReportRow>& rows, const std::string& title);

/// 2-D PCA scatter, one colour per class.
std::string pca_scatter_svg(const PcaProjection& projection, std::span<const int> labels,
                            const std::string& title);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace graphomic::io
