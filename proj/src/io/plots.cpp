#include "graphomic/io/plots.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "graphomic/errors.hpp"
#include "graphomic/io/csv.hpp"

namespace graphomic::io {

namespace fs = std::filesystem;

std::vector<ReportRow> read_report(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open report " + path.string());
  std::string line;
  std::vector<ReportRow> rows;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1) {
      if (line != report_header()) throw DataError(path.string() + ": not a report (bad header)");
      continue;
    }
    try {
      rows.push_back(parse_report_row(line));
    } catch (const std::exception& e) {
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return rows;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
}

namespace {

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) { return format_fixed(v, 2); }

/// Accuracy 0.5 -> pale, 1.0 -> dark blue.
std::string shade(double acc) {
  const double t = std::clamp((acc - 0.5) / 0.5, 0.0, 1.0);
  auto channel = [t](double lo, double hi) {
    return static_cast<int>(std::lround(lo + (hi - lo) * t));
  };
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", channel(239, 8), channel(243, 48),
                channel(255, 107));
  return buf;
}

std::string safe_name(std::string s) {
  for (char& c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_') c = '_';
  }
  return s;
}

/// Sort key for axis labels: numeric when possible, blanks last.
struct AxisLess {
  bool operator()(const std::string& a, const std::string& b) const {
    if (a.empty() || b.empty()) return !a.empty() && b.empty();
    try {
      return parse_double(a) < parse_double(b);
    } catch (const DataError&) {
      return a < b;
    }
  }
};

}  // namespace

std::string heatmap_svg(const std::vector<ReportRow>& rows, const std::string& title) {
  const bool by_homophily = std::all_of(rows.begin(), rows.end(), [](const ReportRow& r) {
    return !r.k && !r.r && r.homophily;
  });
  std::map<std::pair<std::string, std::string>, std::vector<double>> cells;
  std::set<std::string, AxisLess> row_keys;
  std::set<std::string, AxisLess> col_keys;
  for (const auto& r : rows) {
    const std::string rk = r.k ? std::to_string(*r.k) : "";
    const std::string ck = by_homophily ? format_fixed(*r.homophily, 3)
                                        : (r.r ? format_shortest(*r.r) : "");
    row_keys.insert(rk);
    col_keys.insert(ck);
    cells[{rk, ck}].push_back(r.test_acc);
  }
  const std::vector<std::string> ks(row_keys.begin(), row_keys.end());
  const std::vector<std::string> cs(col_keys.begin(), col_keys.end());

  const int cell = 56;
  const int left = 70;
  const int top = 60;
  const int width = left + cell * static_cast<int>(cs.size()) + 20;
  const int height = top + cell * static_cast<int>(ks.size()) + 50;
  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\" font-size=\"11\">\n"
      << "  <title>" << escape(title) << "</title>\n"
      << "  <text x=\"" << left << "\" y=\"20\" font-size=\"13\">" << escape(title) << "</text>\n"
      << "  <text x=\"" << left << "\" y=\"" << top - 22 << "\">"
      << (by_homophily ? "homophily" : "r") << "</text>\n"
      << "  <text x=\"8\" y=\"" << top + 14 << "\">k</text>\n";
  for (std::size_t c = 0; c < cs.size(); ++c) {
    svg << "  <text x=\"" << left + cell * static_cast<int>(c) + 6 << "\" y=\"" << top - 6
        << "\">" << escape(cs[c].empty() ? "-" : cs[c]) << "</text>\n";
  }
  for (std::size_t r = 0; r < ks.size(); ++r) {
    const int y = top + cell * static_cast<int>(r);
    svg << "  <text x=\"30\" y=\"" << y + cell / 2 + 4 << "\">" << escape(ks[r].empty() ? "-" : ks[r])
        << "</text>\n";
    for (std::size_t c = 0; c < cs.size(); ++c) {
      auto it = cells.find({ks[r], cs[c]});
      if (it == cells.end()) continue;
      double mean = 0.0;
      for (double a : it->second) mean += a;
      mean /= static_cast<double>(it->second.size());
      const int x = left + cell * static_cast<int>(c);
      svg << "  <rect class=\"cell\" x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell - 2
          << "\" height=\"" << cell - 2 << "\" fill=\"" << shade(mean) << "\"/>\n"
          << "  <text x=\"" << x + 12 << "\" y=\"" << y + cell / 2 + 4 << "\" fill=\""
          << (mean > 0.75 ? "#ffffff" : "#000000") << "\">" << format_fixed(mean, 3) << "</text>\n";
    }
  }
  svg << "</svg>\n";
  return svg.str();
}

PlotOutput emit_heatmaps(const std::vector<ReportRow>& rows, const fs::path& out_dir) {
  PlotOutput out;
  if (rows.empty()) {
    out.warnings.push_back("report has no rows; no heatmap written");
    return out;
  }
  std::map<std::pair<std::string, std::string>, std::vector<ReportRow>> groups;
  for (const auto& r : rows) groups[{r.model, r.label_class}].push_back(r);
  fs::create_directories(out_dir);
  for (const auto& [key, group] : groups) {
    const fs::path path = out_dir / ("heatmap_" + safe_name(key.first) + "_" +
                                     safe_name(key.second) + ".svg");
    write_text(path, heatmap_svg(group, key.first + " / " + key.second + " test accuracy"));
    out.files.push_back(path);
  }
  return out;
}

std::string pca_scatter_svg(const PcaProjection& projection, std::span<const int> labels,
                            const std::string& title) {
  const Matrix& p = projection.projection;
  if (static_cast<Index>(labels.size()) != p.rows()) {
    throw DimensionError("scatter: " + std::to_string(labels.size()) + " labels for " +
                         shape_string(p));
  }
  static const char* palette[] = {"#7b3294", "#e6b800", "#1b9e77", "#d95f02", "#386cb0", "#e7298a"};
  const double size = 400.0;
  const double pad = 40.0;
  const double x0 = p.rows() ? p.col(0).minCoeff() : 0.0;
  const double x1 = p.rows() ? p.col(0).maxCoeff() : 1.0;
  const double y0 = p.rows() ? p.col(1).minCoeff() : 0.0;
  const double y1 = p.rows() ? p.col(1).maxCoeff() : 1.0;
  auto sx = [&](double v) { return pad + (x1 > x0 ? (v - x0) / (x1 - x0) : 0.5) * size; };
  auto sy = [&](double v) { return pad + size - (y1 > y0 ? (v - y0) / (y1 - y0) : 0.5) * size; };
  std::ostringstream svg;
  const int dim = static_cast<int>(size + 2 * pad);
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << dim << "\" height=\"" << dim
      << "\" viewBox=\"0 0 " << dim << ' ' << dim << "\" font-family=\"sans-serif\" font-size=\"11\">\n"
      << "  <title>" << escape(title) << "</title>\n"
      << "  <text x=\"" << pad << "\" y=\"20\" font-size=\"13\">" << escape(title)
      << " (overlap " << format_fixed(projection.overlap, 3) << ")</text>\n";
  for (Index i = 0; i < p.rows(); ++i) {
    const int cls = labels[static_cast<std::size_t>(i)];
    const char* colour = palette[static_cast<std::size_t>(std::abs(cls)) % std::size(palette)];
    svg << "  <circle cx=\"" << num(sx(p(i, 0))) << "\" cy=\"" << num(sy(p(i, 1)))
        << "\" r=\"2.5\" fill=\"" << colour << "\" fill-opacity=\"0.7\"/>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace graphomic::io
