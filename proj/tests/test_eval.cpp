#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>

#include "graphomic/errors.hpp"
#include "graphomic/eval/naive_bayes.hpp"
#include "graphomic/eval/pipeline.hpp"
#include "graphomic/eval/splits.hpp"
#include "graphomic/eval/sweep.hpp"
#include "graphomic/graphbuild.hpp"
#include "graphomic/io/csv.hpp"
#include "graphomic/numcore/rng.hpp"
#include "graphomic/synthgen.hpp"

using namespace graphomic;
namespace fs = std::filesystem;

namespace {

std::vector<int> labels_with(std::initializer_list<std::pair<int, int>> class_counts) {
  std::vector<int> y;
  for (auto [c, n] : class_counts) y.insert(y.end(), static_cast<std::size_t>(n), c);
  return y;
}

std::vector<std::string> read_lines(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

fs::path temp_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("graphomic_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

MultiModalDataset small_synthetic(Index per_class = 40, double theta = 0.3) {
  SynthConfig cfg;
  cfg.n_per_class = per_class;
  cfg.dim_alpha = 10;
  cfg.dim_beta = 6;
  cfg.theta_alpha = cfg.theta_beta = theta;
  return sample_synthetic_dataset(cfg);
}

PipelineConfig quick(ModelKind model) {
  PipelineConfig c;
  c.model = model;
  c.graph_model.epochs = 3;
  c.graph_model.ls = 8;
  c.graph_model.ds = 16;
  c.vae.epochs = 3;
  c.vae.ls = 4;
  c.vae.ds = 16;
  c.graph.total_edges = 300;
  c.graph.method = GraphMethod::homophily;
  c.record_runtime = false;
  c.seed = 5;
  return c;
}

}  // namespace

// ---- splits ----

TEST(Split7525, BalancedThousand) {
  const auto y = labels_with({{0, 500}, {1, 500}});
  const auto plan = split_75_25(y, 1);
  EXPECT_TRUE(plan.holdout);
  EXPECT_EQ(plan.evaluation_folds(), std::vector<int>{1});
  EXPECT_EQ(plan.test_indices(1).size(), 250u);
  EXPECT_EQ(plan.train_indices(1).size(), 750u);
  EXPECT_EQ(plan.assignment, split_75_25(y, 1).assignment);
  EXPECT_NE(plan.assignment, split_75_25(y, 2).assignment);
}

TEST(Split7525, PerClassTrainFractionStratified) {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const int a = 100 + static_cast<int>(rng.below(400)), b = 100 + static_cast<int>(rng.below(400));
    const auto y = labels_with({{0, a}, {1, b}});
    const auto plan = split_75_25(y, static_cast<std::uint64_t>(trial));
    int train_a = 0, train_b = 0;
    for (Index i : plan.train_indices(1)) (y[static_cast<std::size_t>(i)] == 0 ? train_a : train_b)++;
    EXPECT_GE(train_a / static_cast<double>(a), 0.74);
    EXPECT_LE(train_a / static_cast<double>(a), 0.76);
    EXPECT_GE(train_b / static_cast<double>(b), 0.74);
    EXPECT_LE(train_b / static_cast<double>(b), 0.76);
  }
}

TEST(Split7525, TinyClassIsDataError) {
  EXPECT_THROW(split_75_25(labels_with({{0, 10}, {1, 3}}), 1), DataError);
}

TEST(KFold, CoversEveryIndexOnceWithBalancedSizes) {
  const auto y = labels_with({{0, 53}, {1, 31}, {2, 17}});
  const auto plan = stratified_kfold(y, 5, 4);
  EXPECT_EQ(plan.n_folds, 5);
  std::multiset<Index> seen;
  std::size_t lo = 1000, hi = 0;
  for (int f : plan.evaluation_folds()) {
    const auto test = plan.test_indices(f);
    lo = std::min(lo, test.size());
    hi = std::max(hi, test.size());
    seen.insert(test.begin(), test.end());
    EXPECT_EQ(test.size() + plan.train_indices(f).size(), y.size());
  }
  EXPECT_LE(hi - lo, 1u);
  EXPECT_EQ(seen.size(), y.size());
  for (Index i = 0; i < static_cast<Index>(y.size()); ++i) EXPECT_EQ(seen.count(i), 1u);
}

TEST(KFold, SixtyFortyFoldsKeepRatio) {
  const auto y = labels_with({{0, 60}, {1, 40}});
  const auto plan = stratified_kfold(y, 5, 1);
  for (int f = 0; f < 5; ++f) {
    int zeros = 0;
    const auto test = plan.test_indices(f);
    for (Index i : test) zeros += y[static_cast<std::size_t>(i)] == 0;
    EXPECT_NEAR(zeros, 12, 1);
    EXPECT_NEAR(static_cast<int>(test.size()) - zeros, 8, 1);
  }
}

TEST(KFold, PerFoldCountsWithinOneOfProportionalShare) {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const int classes = 2 + static_cast<int>(rng.below(4));
    std::vector<int> y;
    for (int c = 0; c < classes; ++c) y.insert(y.end(), 5 + rng.below(80), c);
    std::vector<int> shuffled(y.size());
    const auto perm = rng.permutation(static_cast<Index>(y.size()));
    for (std::size_t i = 0; i < y.size(); ++i) shuffled[i] = y[static_cast<std::size_t>(perm[i])];
    const auto plan = stratified_kfold(shuffled, 5, static_cast<std::uint64_t>(trial));
    for (int c = 0; c < classes; ++c) {
      const double n_c = static_cast<double>(std::count(y.begin(), y.end(), c));
      for (int f = 0; f < 5; ++f) {
        int count = 0;
        for (Index i : plan.test_indices(f)) count += shuffled[static_cast<std::size_t>(i)] == c;
        EXPECT_LT(std::abs(count - n_c / 5.0), 1.0) << "trial " << trial;
      }
    }
  }
}

TEST(KFold, Errors) {
  EXPECT_THROW(stratified_kfold(labels_with({{0, 10}, {1, 4}}), 5, 1), DataError);
  EXPECT_THROW(stratified_kfold(labels_with({{0, 10}, {1, 10}}), 1, 1), ContractError);
}

// ---- naive bayes ----

TEST(NaiveBayes, SeparatedClassesArePerfect) {
  Rng rng(1);
  Matrix train(200, 1), test(100, 1);
  std::vector<int> ytr, yte;
  for (Index i = 0; i < 200; ++i) {
    const int c = static_cast<int>(i % 2);
    train(i, 0) = rng.normal(c ? 10.0 : -10.0, 1.0);
    ytr.push_back(c);
  }
  for (Index i = 0; i < 100; ++i) {
    const int c = static_cast<int>(i % 2);
    test(i, 0) = rng.normal(c ? 10.0 : -10.0, 1.0);
    yte.push_back(c);
  }
  EXPECT_EQ(accuracy(gaussian_nb(train, ytr, test), yte), 1.0);
}

TEST(NaiveBayes, ShuffledLabelsGiveChance) {
  Rng rng(2);
  const Matrix X = rng.normal_matrix(1000, 5);
  std::vector<int> y(1000);
  for (auto& v : y) v = rng.bernoulli(0.5) ? 1 : 0;
  const auto plan = split_75_25(y, 3);
  const auto tr = plan.train_indices(1), te = plan.test_indices(1);
  std::vector<int> ytr, yte;
  for (Index i : tr) ytr.push_back(y[static_cast<std::size_t>(i)]);
  for (Index i : te) yte.push_back(y[static_cast<std::size_t>(i)]);
  EXPECT_NEAR(accuracy(gaussian_nb(X(tr, Eigen::all), ytr, X(te, Eigen::all)), yte), 0.5, 0.05);
}

TEST(NaiveBayes, MatchesPerRowDensityOracle) {
  // Three-class, four-feature toy table in the spirit of iris.
  Rng rng(3);
  const double centres[3][4] = {{5.0, 3.4, 1.5, 0.2}, {5.9, 2.8, 4.3, 1.3}, {6.6, 3.0, 5.5, 2.0}};
  Matrix X(45, 4);
  std::vector<int> y;
  for (Index i = 0; i < 45; ++i) {
    const int c = static_cast<int>(i / 15);
    for (Index f = 0; f < 4; ++f) X(i, f) = rng.normal(centres[c][f], 0.3 + 0.1 * f);
    y.push_back(c);
  }
  GaussianNb nb;
  nb.fit(X, y);
  const Matrix Q = rng.normal_matrix(20, 4).array() + 4.0;
  const Matrix lj = nb.log_joint(Q);
  for (Index r = 0; r < Q.rows(); ++r) {
    int best = -1;
    double best_v = -1e300;
    for (int c = 0; c < 3; ++c) {
      double logp = std::log(15.0 / 45.0);
      for (Index f = 0; f < 4; ++f) {
        double mean = 0, var = 0;
        for (Index i = c * 15; i < c * 15 + 15; ++i) mean += X(i, f);
        mean /= 15.0;
        for (Index i = c * 15; i < c * 15 + 15; ++i) var += (X(i, f) - mean) * (X(i, f) - mean);
        var = var / 15.0 + 0.0;
        var = std::max(var, GaussianNb::kVarianceFloor);
        logp += -0.5 * std::log(2 * std::numbers::pi * var) - (Q(r, f) - mean) * (Q(r, f) - mean) / (2 * var);
      }
      EXPECT_NEAR(lj(r, c), logp, 1e-10);
      if (logp > best_v) best_v = logp, best = c;
    }
    EXPECT_EQ(nb.predict(Q.row(r))[0], best);
  }
}

TEST(NaiveBayes, MonotoneRelabelingInvariance) {
  Rng rng(4);
  const Matrix X = rng.normal_matrix(90, 3);
  std::vector<int> y(90), relabeled(90);
  const int map[3] = {3, 7, 20};
  for (std::size_t i = 0; i < 90; ++i) {
    y[i] = static_cast<int>(i % 3);
    relabeled[i] = map[y[i]];
  }
  const Matrix Q = rng.normal_matrix(30, 3);
  const auto a = gaussian_nb(X, y, Q), b = gaussian_nb(X, relabeled, Q);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(map[a[i]], b[i]);
}

TEST(NaiveBayes, ConstantFeatureAndErrors) {
  Matrix X(6, 2);
  X << 1, 0, 2, 0, 3, 0, 7, 0, 8, 0, 9, 0;
  const std::vector<int> y{0, 0, 0, 1, 1, 1};
  GaussianNb nb;
  nb.fit(X, y);
  EXPECT_TRUE(nb.log_joint(X).allFinite());
  EXPECT_EQ(nb.predict(X), y);
  EXPECT_THROW(nb.fit(X, std::vector<int>(6, 0)), DataError);
  EXPECT_THROW(accuracy(std::vector<int>{1}, std::vector<int>{1, 0}), DimensionError);
}

// ---- report rows ----

TEST(Report, HeaderIsExact) {
  EXPECT_EQ(report_header(),
            "model,modalities,label_class,k,r,homophily,edges,isolated,seed,train_acc,test_acc,epochs,runtime_s");
}

TEST(Report, FormatAndParseRoundTrip) {
  ReportRow row;
  row.model = "cnc-dgi";
  row.modalities = "alpha+beta";
  row.label_class = "synthetic";
  row.k = 4;
  row.r = 0.05;
  row.homophily = 0.73456;
  row.edges = 5000;
  row.isolated = 0;
  row.seed = 2;
  row.train_acc = 0.91234;
  row.test_acc = 0.8;
  row.epochs = 150;
  const std::string line = format_report_row(row);
  EXPECT_EQ(line, "cnc-dgi,alpha+beta,synthetic,4,0.05,0.735,5000,0,2,0.912,0.800,150,");
  EXPECT_EQ(format_report_row(parse_report_row(line)), line);
}

// ---- pipeline ----

TEST(Pipeline, SameSeedGivesIdenticalRows) {
  const auto ds = small_synthetic();
  for (ModelKind m : {ModelKind::cnc_vae, ModelKind::h_vae, ModelKind::cnc_vgae, ModelKind::cnc_dgi,
                      ModelKind::two_graph_dgi, ModelKind::hetero_dgi}) {
    const PipelineConfig cfg = quick(m);
    const std::string a = format_report_row(run_pipeline(ds, cfg).row);
    const std::string b = format_report_row(run_pipeline(ds, cfg).row);
    EXPECT_EQ(a, b) << to_string(m);
    const auto r = run_pipeline(ds, cfg).row;
    EXPECT_GE(r.test_acc, 0.0);
    EXPECT_LE(r.test_acc, 1.0);
    EXPECT_EQ(r.model, to_string(m));
    EXPECT_EQ(r.modalities, "alpha+beta");
    EXPECT_EQ(r.homophily.has_value(), is_graph_model(m));
  }
}

TEST(Pipeline, RuntimeColumnFollowsFlag) {
  const auto ds = small_synthetic();
  PipelineConfig cfg = quick(ModelKind::cnc_dgi);
  EXPECT_FALSE(run_pipeline(ds, cfg).row.runtime_s.has_value());
  cfg.record_runtime = true;
  EXPECT_TRUE(run_pipeline(ds, cfg).row.runtime_s.has_value());
}

TEST(Pipeline, KFoldUsesAllFolds) {
  const auto ds = small_synthetic();
  PipelineConfig cfg = quick(ModelKind::cnc_dgi);
  cfg.split = SplitKind::kfold;
  const auto row = run_pipeline(ds, cfg).row;
  EXPECT_GE(row.test_acc, 0.0);
  const FoldPlan plan = stratified_kfold(ds.labels[0].y, 5, 99);
  const auto with_plan = run_pipeline(ds, cfg, &plan).row;
  EXPECT_GE(with_plan.train_acc, 0.0);
}

TEST(Pipeline, StageErrorsAreTagged) {
  const auto ds = small_synthetic();
  PipelineConfig cfg = quick(ModelKind::cnc_dgi);
  cfg.graph.method = GraphMethod::knn;
  cfg.graph.k = 500;
  try {
    run_pipeline(ds, cfg);
    FAIL() << "expected StageError";
  } catch (const StageError& e) {
    EXPECT_EQ(e.stage(), "graph");
    EXPECT_NE(std::string(e.what()).find("[graph]"), std::string::npos);
  }
  cfg = quick(ModelKind::cnc_dgi);
  cfg.label_class = "nope";
  try {
    run_pipeline(ds, cfg);
    FAIL() << "expected StageError";
  } catch (const StageError& e) {
    EXPECT_EQ(e.stage(), "ingest");
  }
  cfg = quick(ModelKind::cnc_dgi);
  cfg.graph_model.conv_layers = 7;
  EXPECT_THROW(run_pipeline(ds, cfg), ConfigError);
}

TEST(Pipeline, FeatureGraphHomophilyMatchesDirectBuild) {
  const auto ds = small_synthetic();
  PipelineConfig cfg = quick(ModelKind::cnc_dgi);
  cfg.graph.method = GraphMethod::hybrid;
  cfg.graph.k = 2;
  cfg.graph.r = 3.0;
  const auto built = build_pipeline_graphs(ds, cfg);
  const Graph direct = hybrid_edges(hconcat(ds.modalities[0].X, ds.modalities[1].X), 2, 3.0);
  ASSERT_EQ(built.graphs.size(), 1u);
  EXPECT_EQ(built.edges, direct.n_edges());
  EXPECT_DOUBLE_EQ(*built.homophily, edge_homophily(direct, ds.labels[0].y));
  cfg.model = ModelKind::two_graph_dgi;
  EXPECT_EQ(build_pipeline_graphs(ds, cfg).graphs.size(), 2u);
}

TEST(Pipeline, LabelSampledGraphsShareOrDrawIndependently) {
  const auto ds = small_synthetic();
  PipelineConfig cfg = quick(ModelKind::two_graph_dgi);
  cfg.graph.homophily = 0.8;
  const auto shared = build_pipeline_graphs(ds, cfg);
  ASSERT_EQ(shared.graphs.size(), 2u);
  EXPECT_EQ(shared.graphs[0].edges(), shared.graphs[1].edges());
  EXPECT_DOUBLE_EQ(*shared.homophily, 0.8);
  cfg.graph.independent_graphs = true;
  const auto indep = build_pipeline_graphs(ds, cfg);
  EXPECT_NE(indep.graphs[0].edges(), indep.graphs[1].edges());
  EXPECT_DOUBLE_EQ(*indep.homophily, 0.8);
}

TEST(Pipeline, NoSignalGivesChanceAccuracy) {
  const auto ds = small_synthetic(500, 0.0);
  PipelineConfig cfg = quick(ModelKind::cnc_dgi);
  cfg.graph.method = GraphMethod::knn;
  cfg.graph.k = 4;
  cfg.graph_model.epochs = 20;
  EXPECT_NEAR(run_pipeline(ds, cfg).row.test_acc, 0.5, 0.07);
}

TEST(Pipeline, CncDgiHighHomophilyAccuracy) {
  const auto ds = sample_synthetic_dataset(SynthConfig{});
  PipelineConfig cfg;
  cfg.model = ModelKind::cnc_dgi;
  cfg.graph.method = GraphMethod::homophily;
  cfg.graph.homophily = 0.87;
  cfg.seed = 0;
  EXPECT_GE(run_pipeline(ds, cfg).row.test_acc, 0.85);
}

// ---- sweep ----

TEST(Sweep, GridExpansionAndKeys) {
  SweepConfig cfg;
  cfg.base = quick(ModelKind::cnc_dgi);
  cfg.base.graph.method = GraphMethod::hybrid;
  cfg.k_values = {2, 4, 16, 64};
  cfg.r_values = {0.005, 0.05, 0.5, 1, 5};
  cfg.seeds = {1};
  const auto cells = expand_grid(cfg);
  ASSERT_EQ(cells.size(), 20u);
  std::set<std::string> keys;
  for (const auto& c : cells) keys.insert(cell_key(c));
  EXPECT_EQ(keys.size(), 20u);
  PipelineConfig flipped = cells[0];
  flipped.record_runtime = !flipped.record_runtime;
  EXPECT_EQ(cell_key(flipped), cell_key(cells[0]));
  EXPECT_EQ(cell_key(cells[0]).size(), 16u);
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  // non-graph models ignore graph axes
  cfg.models = {ModelKind::cnc_vae, ModelKind::cnc_dgi};
  cfg.seeds = {1, 2, 3};
  EXPECT_EQ(expand_grid(cfg).size(), 3u + 60u);
}

TEST(Sweep, WorkerThreadsFromEnvironment) {
  ::setenv("GRAPHOMIC_THREADS", "3", 1);
  EXPECT_EQ(worker_threads(), 3);
  ::setenv("GRAPHOMIC_THREADS", "0", 1);
  EXPECT_GE(worker_threads(), 1);
  ::unsetenv("GRAPHOMIC_THREADS");
  EXPECT_GE(worker_threads(), 1);
}

TEST(Sweep, TwentyCellsResumeWithoutDuplicates) {
  const auto ds = small_synthetic(30);
  SweepConfig cfg;
  cfg.base = quick(ModelKind::cnc_dgi);
  cfg.base.graph_model.epochs = 1;
  cfg.base.graph.method = GraphMethod::hybrid;
  cfg.k_values = {2, 4, 16, 29};
  cfg.r_values = {0.005, 0.05, 0.5, 1, 5};
  cfg.seeds = {1};
  const fs::path dir = temp_dir("sweep");
  const fs::path report = dir / "report.csv";

  const auto first = run_sweep(ds, cfg, report, 2);
  EXPECT_EQ(first.cells, 20u);
  EXPECT_EQ(first.skipped, 0u);
  auto lines = read_lines(report);
  ASSERT_EQ(lines.size(), 21u);
  EXPECT_EQ(lines[0], report_header());
  const auto full = lines;

  // Homophily per row equals a direct rebuild of that cell's graph.
  const Matrix x = hconcat(ds.modalities[0].X, ds.modalities[1].X);
  std::set<std::string> homophilies;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto row = parse_report_row(lines[i]);
    const Graph g = hybrid_edges(x, *row.k, *row.r);
    EXPECT_EQ(io::format_fixed(edge_homophily(g, ds.labels[0].y), 3), io::format_fixed(*row.homophily, 3));
    EXPECT_EQ(*row.edges, g.n_edges());
    homophilies.insert(io::format_fixed(*row.homophily, 3));
  }
  EXPECT_GT(homophilies.size(), 1u);

  // Simulate an interruption: keep 7 journaled rows plus one row written
  // without its key, then resume.
  const auto keys = read_lines(fs::path(report.string() + ".keys"));
  ASSERT_EQ(keys.size(), 20u);
  {
    std::ofstream out(report, std::ios::trunc);
    for (std::size_t i = 0; i < 9; ++i) out << lines[i] << '\n';
    std::ofstream k(report.string() + ".keys", std::ios::trunc);
    for (std::size_t i = 0; i < 7; ++i) k << keys[i] << '\n';
  }
  const auto resumed = run_sweep(ds, cfg, report, 1);
  EXPECT_EQ(resumed.skipped, 7u);
  EXPECT_EQ(resumed.rows.size(), 13u);
  lines = read_lines(report);
  EXPECT_EQ(lines.size(), 21u);
  const auto new_keys = read_lines(fs::path(report.string() + ".keys"));
  EXPECT_EQ(std::set<std::string>(new_keys.begin(), new_keys.end()).size(), 20u);
  EXPECT_EQ(new_keys.size(), 20u);
  // resumed output is byte-identical to the uninterrupted run
  EXPECT_EQ(lines, full);

  const auto again = run_sweep(ds, cfg, report, 1);
  EXPECT_EQ(again.skipped, 20u);
  EXPECT_TRUE(again.rows.empty());
  EXPECT_EQ(read_lines(report).size(), 21u);
  fs::remove_all(dir);
}

TEST(Sweep, SummaryMeanAndStd) {
  std::vector<ReportRow> rows(3);
  const double acc[] = {0.7, 0.8, 0.9};
  for (int i = 0; i < 3; ++i) {
    rows[static_cast<std::size_t>(i)].model = "cnc-dgi";
    rows[static_cast<std::size_t>(i)].label_class = "synthetic";
    rows[static_cast<std::size_t>(i)].homophily = 0.51;
    rows[static_cast<std::size_t>(i)].seed = static_cast<std::uint64_t>(i);
    rows[static_cast<std::size_t>(i)].test_acc = acc[i];
  }
  const auto s = summarize(rows);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].runs, 3u);
  EXPECT_NEAR(s[0].mean_test_acc, 0.8, 1e-12);
  EXPECT_NEAR(s[0].std_test_acc, std::sqrt(0.02 / 3.0), 1e-12);
}
