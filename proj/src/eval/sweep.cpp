#include "graphomic/eval/sweep.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include "graphomic/errors.hpp"
#include "graphomic/io/config.hpp"
#include "graphomic/io/csv.hpp"

namespace graphomic {

void SweepConfig::validate() const {
  base.validate();
  if (seeds.empty()) throw ConfigError("sweep needs at least one seed");
  for (double h : homophily_values) {
    if (!(h >= 0.0 && h <= 1.0)) throw ConfigError("sweep homophily values must be in [0, 1]");
  }
  for (int k : k_values) {
    if (k < 1) throw ConfigError("sweep k values must be >= 1");
  }
  for (double r : r_values) {
    if (!(r > 0.0)) throw ConfigError("sweep r values must be > 0");
  }
}

std::vector<PipelineConfig> expand_grid(const SweepConfig& cfg) {
  const std::vector<ModelKind> models = cfg.models.empty() ? std::vector{cfg.base.model} : cfg.models;
  const std::vector<std::string> labels =
      cfg.label_classes.empty() ? std::vector{cfg.base.label_class} : cfg.label_classes;

  std::vector<GraphParams> graph_cells;
  const GraphParams& g = cfg.base.graph;
  const std::vector<int> ks = cfg.k_values.empty() ? std::vector{g.k} : cfg.k_values;
  const std::vector<double> rs = cfg.r_values.empty() ? std::vector{g.r} : cfg.r_values;
  switch (g.method) {
    case GraphMethod::knn:
      for (int k : ks) graph_cells.push_back(g), graph_cells.back().k = k;
      break;
    case GraphMethod::radius:
      for (double r : rs) graph_cells.push_back(g), graph_cells.back().r = r;
      break;
    case GraphMethod::hybrid:
      for (int k : ks) {
        for (double r : rs) {
          graph_cells.push_back(g);
          graph_cells.back().k = k;
          graph_cells.back().r = r;
        }
      }
      break;
    case GraphMethod::homophily:
      if (cfg.homophily_values.empty()) graph_cells.push_back(g);
      for (double h : cfg.homophily_values) graph_cells.push_back(g), graph_cells.back().homophily = h;
      break;
  }

  std::vector<PipelineConfig> cells;
  for (ModelKind m : models) {
    for (const auto& label : labels) {
      const std::vector<GraphParams> gs = is_graph_model(m) ? graph_cells : std::vector{g};
      for (const auto& gp : gs) {
        for (std::uint64_t seed : cfg.seeds) {
          PipelineConfig c = cfg.base;
          c.model = m;
          c.label_class = label;
          c.graph = gp;
          c.seed = seed;
          cells.push_back(std::move(c));
        }
      }
    }
  }
  return cells;
}

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string cell_key(const PipelineConfig& cell) {
  io::Json j = io::to_json(cell);
  // Recording the runtime does not change a cell's result.
  j.erase("record_runtime");
  const std::uint64_t h = fnv1a64(j.dump());
  static const char* hex = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) out[static_cast<std::size_t>(15 - i)] = hex[(h >> (4 * i)) & 0xF];
  return out;
}

int worker_threads() {
  if (const char* env = std::getenv("GRAPHOMIC_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (const std::exception&) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

namespace {

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::vector<std::string> lines;
  std::ifstream in(path, std::ios::binary);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

void write_lines(const std::filesystem::path& path, const std::vector<std::string>& lines) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  for (const auto& l : lines) out << l << '\n';
}

/// Brings report and journal into agreement and returns the completed keys.
std::set<std::string> recover(const std::filesystem::path& report,
                              const std::filesystem::path& journal) {
  std::vector<std::string> keys = std::filesystem::exists(journal) ? read_lines(journal)
                                                                  : std::vector<std::string>{};
  std::vector<std::string> rows;
  if (std::filesystem::exists(report)) {
    rows = read_lines(report);
    if (!rows.empty() && rows.front() != report_header()) {
      throw DataError(report.string() + " exists but does not carry the report header");
    }
  }
  if (rows.empty()) rows.push_back(report_header());
  const std::size_t have = rows.size() - 1;
  // A crash between the row append and the key append leaves an unkeyed row.
  if (have > keys.size()) rows.resize(keys.size() + 1);
  if (keys.size() > have) keys.resize(have);
  write_lines(report, rows);
  write_lines(journal, keys);
  return {keys.begin(), keys.end()};
}

}  // namespace

SweepOutcome run_sweep(const MultiModalDataset& dataset, const SweepConfig& cfg,
                       const std::filesystem::path& report, int threads, const FoldPlan* folds) {
  cfg.validate();
  const std::vector<PipelineConfig> cells = expand_grid(cfg);
  const std::filesystem::path journal = report.string() + ".keys";
  const std::set<std::string> done = recover(report, journal);

  std::vector<std::size_t> todo;
  std::vector<std::string> keys(cells.size());
  SweepOutcome outcome;
  outcome.cells = cells.size();
  std::set<std::string> scheduled;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    keys[i] = cell_key(cells[i]);
    if (done.count(keys[i]) || !scheduled.insert(keys[i]).second) {
      ++outcome.skipped;
    } else {
      todo.push_back(i);
    }
  }

  std::vector<std::optional<ReportRow>> results(todo.size());
  std::size_t next_to_write = 0;
  std::mutex sink;
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;

  std::ofstream report_out(report, std::ios::binary | std::ios::app);
  std::ofstream journal_out(journal, std::ios::binary | std::ios::app);
  if (!report_out || !journal_out) throw DataError("cannot append to " + report.string());

  auto worker = [&] {
    while (!failed.load()) {
      const std::size_t slot = next.fetch_add(1);
      if (slot >= todo.size()) return;
      try {
        ReportRow row = run_pipeline(dataset, cells[todo[slot]], folds).row;
        std::lock_guard lock(sink);
        results[slot] = std::move(row);
        // Rows are flushed in grid order so the report does not depend on scheduling.
        while (next_to_write < results.size() && results[next_to_write]) {
          report_out << format_report_row(*results[next_to_write]) << '\n' << std::flush;
          journal_out << keys[todo[next_to_write]] << '\n' << std::flush;
          ++next_to_write;
        }
      } catch (...) {
        std::lock_guard lock(sink);
        if (!first_error) first_error = std::current_exception();
        failed.store(true);
      }
    }
  };

  const int n_threads =
      std::max(1, std::min(threads > 0 ? threads : worker_threads(), static_cast<int>(todo.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);

  for (auto& r : results) outcome.rows.push_back(std::move(*r));
  return outcome;
}

std::vector<CellSummary> summarize(const std::vector<ReportRow>& rows) {
  std::map<std::vector<std::string>, std::vector<double>> groups;
  std::vector<std::vector<std::string>> order;
  for (const auto& row : rows) {
    const auto fields = io::split_csv_line(format_report_row(row));
    std::vector<std::string> key{fields[0], fields[2], fields[3], fields[4], fields[5]};
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.push_back(row.test_acc);
  }
  std::vector<CellSummary> out;
  for (const auto& key : order) {
    const auto& acc = groups.at(key);
    double mean = 0.0;
    for (double a : acc) mean += a;
    mean /= static_cast<double>(acc.size());
    double var = 0.0;
    for (double a : acc) var += (a - mean) * (a - mean);
    var /= static_cast<double>(acc.size());
    out.push_back({key[0], key[1], key[2], key[3], key[4], acc.size(), mean, std::sqrt(var)});
  }
  return out;
}

}  // namespace graphomic
