#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "graphomic/errors.hpp"
#include "graphomic/eval/naive_bayes.hpp"
#include "graphomic/eval/splits.hpp"
#include "graphomic/numcore/rng.hpp"
#include "graphomic/synthgen.hpp"

using namespace graphomic;

namespace {

std::vector<int> two_classes(int per_class) {
  std::vector<int> y(static_cast<std::size_t>(2 * per_class), 0);
  for (int i = per_class; i < 2 * per_class; ++i) y[static_cast<std::size_t>(i)] = 1;
  return y;
}

void expect_simple(const Graph& g) {
  std::set<std::pair<Index, Index>> seen;
  for (const auto& e : g.edges()) {
    EXPECT_LT(e.i, e.j);
    EXPECT_TRUE(seen.insert({e.i, e.j}).second) << e.i << "," << e.j;
  }
}

ClassPairCounts realized(const Graph& g, std::span<const int> y) {
  ClassPairCounts c;
  for (const auto& e : g.edges()) {
    const int a = y[static_cast<std::size_t>(e.i)], b = y[static_cast<std::size_t>(e.j)];
    if (a != b) ++c.purple_yellow;
    else if (a == 0) ++c.purple_purple;
    else ++c.yellow_yellow;
  }
  return c;
}

}  // namespace

TEST(SynthConfig, RejectsInvalidSettings) {
  SynthConfig cfg;
  cfg.sigma = 0.0;
  EXPECT_THROW(cfg.validate(), ContractError);
  cfg = SynthConfig{};
  cfg.theta_alpha = -0.1;
  EXPECT_THROW(cfg.validate(), ContractError);
  cfg = SynthConfig{};
  cfg.dim_beta = 1;
  EXPECT_THROW(cfg.validate(), ContractError);
  EXPECT_NO_THROW(SynthConfig{}.validate());
}

TEST(SampleSynthetic, ShapesAndBalance) {
  const auto ds = sample_synthetic_dataset(SynthConfig{});
  EXPECT_EQ(ds.n(), 1000);
  ASSERT_EQ(ds.modalities.size(), 2u);
  EXPECT_EQ(ds.modality("alpha").X.rows(), 1000);
  EXPECT_EQ(ds.modality("alpha").X.cols(), 50);
  EXPECT_EQ(ds.modality("beta").X.cols(), 30);
  const auto& y = ds.label("synthetic").y;
  EXPECT_EQ(std::count(y.begin(), y.end(), 0), 500);
  EXPECT_EQ(std::count(y.begin(), y.end(), 1), 500);
  EXPECT_NO_THROW(ds.validate());
}

TEST(SampleSynthetic, SameSeedSameData) {
  SynthConfig cfg;
  cfg.seed = 17;
  const auto a = sample_synthetic_dataset(cfg);
  const auto b = sample_synthetic_dataset(cfg);
  EXPECT_EQ(a.modality("alpha").X, b.modality("alpha").X);
  EXPECT_EQ(a.modality("beta").X, b.modality("beta").X);
  cfg.seed = 18;
  EXPECT_NE(sample_synthetic_dataset(cfg).modality("alpha").X, a.modality("alpha").X);
}

TEST(SampleSynthetic, TinySigmaReproducesClassMeans) {
  SynthConfig cfg;
  cfg.n_per_class = 20;
  cfg.sigma = 1e-12;
  const auto ds = sample_synthetic_dataset(cfg);
  const auto means = synthetic_means(cfg);
  const Matrix& X = ds.modality("alpha").X;
  const Matrix a = X.topRows(20).colwise().mean();
  const Matrix b = X.bottomRows(20).colwise().mean();
  EXPECT_LT((a - means.alpha.row(0)).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_LT((b - means.alpha.row(1)).cwiseAbs().maxCoeff(), 1e-9);
  // class means sit at mu -/+ theta
  EXPECT_LT(((means.alpha.row(1) - means.alpha.row(0)).array() - 0.6).abs().maxCoeff(), 1e-12);
  EXPECT_LT(((means.beta.row(1) - means.beta.row(0)).array() - 0.6).abs().maxCoeff(), 1e-12);
}

TEST(SampleSynthetic, MeansDrawnFromConfiguredRanges) {
  const auto means = synthetic_means(SynthConfig{});
  const Matrix centre_a = (means.alpha.row(0) + means.alpha.row(1)) / 2.0;
  const Matrix centre_b = (means.beta.row(0) + means.beta.row(1)) / 2.0;
  EXPECT_LE(centre_a.cwiseAbs().maxCoeff(), 1.0);
  EXPECT_LE(centre_b.cwiseAbs().maxCoeff(), 0.5);
}

TEST(SampleSynthetic, EmpiricalMeansWithinThreeStandardErrors) {
  const SynthConfig cfg;
  const auto ds = sample_synthetic_dataset(cfg);
  const auto means = synthetic_means(cfg);
  const double bound = 3.0 * cfg.sigma / std::sqrt(static_cast<double>(cfg.n_per_class));
  for (const auto& [name, target] :
       {std::pair{"alpha", means.alpha}, std::pair{"beta", means.beta}}) {
    const Matrix& X = ds.modality(name).X;
    for (int cls = 0; cls < 2; ++cls) {
      const Matrix m = X.middleRows(cls * cfg.n_per_class, cfg.n_per_class).colwise().mean();
      const double worst = (m - target.row(cls)).cwiseAbs().maxCoeff();
      EXPECT_LT(worst, bound) << name << " class " << cls;
    }
  }
}

TEST(SampleSynthetic, ZeroOffsetGivesChanceLevelNaiveBayes) {
  SynthConfig cfg;
  cfg.theta_alpha = cfg.theta_beta = 0.0;
  cfg.seed = 3;
  const auto ds = sample_synthetic_dataset(cfg);
  Matrix X(ds.n(), 80);
  X << ds.modality("alpha").X, ds.modality("beta").X;
  const auto& y = ds.label("synthetic").y;
  const auto plan = split_75_25(y, 1);
  const auto tr = plan.train_indices(1), te = plan.test_indices(1);
  std::vector<int> ytr, yte;
  for (Index i : tr) ytr.push_back(y[static_cast<std::size_t>(i)]);
  for (Index i : te) yte.push_back(y[static_cast<std::size_t>(i)]);
  const auto pred = gaussian_nb(X(tr, Eigen::all), ytr, X(te, Eigen::all));
  EXPECT_NEAR(accuracy(pred, yte), 0.5, 0.05);
}

TEST(Pca, SeparatedBlobsHaveNoOverlap) {
  SynthConfig cfg;
  cfg.theta_alpha = 5.0;
  cfg.sigma = 0.5;
  const auto ds = sample_synthetic_dataset(cfg);
  const auto p = pca_separation_check(ds, "alpha");
  EXPECT_LT(p.overlap, 0.05);
  EXPECT_EQ(p.projection.rows(), 1000);
  EXPECT_EQ(p.projection.cols(), 2);
}

TEST(Pca, ZeroOffsetOverlapsCompletely) {
  SynthConfig cfg;
  cfg.theta_alpha = 0.0;
  const auto p = pca_separation_check(sample_synthetic_dataset(cfg), "alpha");
  EXPECT_NEAR(p.overlap, 0.5, 0.05);
}

TEST(Pca, ComponentsOrthonormal) {
  const auto p = pca_separation_check(sample_synthetic_dataset(SynthConfig{}), "beta");
  EXPECT_LT(std::abs(p.components.col(0).dot(p.components.col(1))), 1e-8);
  EXPECT_NEAR(p.components.col(0).norm(), 1.0, 1e-10);
  EXPECT_NEAR(p.components.col(1).norm(), 1.0, 1e-10);
  EXPECT_GE(p.explained_variance(0), p.explained_variance(1));
}

TEST(Pca, MatchesEigenDecomposition) {
  Rng rng(4);
  Matrix X = rng.normal_matrix(200, 5);
  X.col(0) *= 4.0;
  X.col(3) *= 2.0;
  const auto p = pca_separation_check(X, two_classes(100));
  const Matrix centered = X.rowwise() - X.colwise().mean();
  const Matrix cov = centered.transpose() * centered / static_cast<double>(X.rows() - 1);
  Eigen::SelfAdjointEigenSolver<Matrix> es(cov);
  const auto top = es.eigenvectors().col(4);
  const auto second = es.eigenvectors().col(3);
  EXPECT_NEAR(std::abs(p.components.col(0).dot(top)), 1.0, 1e-6);
  EXPECT_NEAR(std::abs(p.components.col(1).dot(second)), 1.0, 1e-6);
}

TEST(Pca, SingleFeatureIsContractError) {
  EXPECT_THROW(pca_separation_check(Matrix::Ones(10, 1), two_classes(5)), ContractError);
}

TEST(ClassPairEdges, IntraOnlyGivesPerfectHomophily) {
  const auto y = two_classes(500);
  const Graph g = sample_class_pair_edges(y, {2000, 0, 2000}, 1);
  EXPECT_EQ(g.n_edges(), 4000u);
  EXPECT_EQ(edge_homophily(g, y), 1.0);
  for (const auto& e : g.edges()) {
    EXPECT_EQ(y[static_cast<std::size_t>(e.i)], y[static_cast<std::size_t>(e.j)]);
  }
}

TEST(ClassPairEdges, EqualCountsGiveTwoThirds) {
  const auto y = two_classes(500);
  const Graph g = sample_class_pair_edges(y, {1000, 1000, 1000}, 2);
  EXPECT_DOUBLE_EQ(edge_homophily(g, y), 2000.0 / 3000.0);
}

TEST(ClassPairEdges, InfeasibleCountsAreCapacityError) {
  const auto y = two_classes(5);
  EXPECT_THROW(sample_class_pair_edges(y, {11, 0, 0}, 1), CapacityError);
  EXPECT_THROW(sample_class_pair_edges(y, {0, 26, 0}, 1), CapacityError);
  EXPECT_NO_THROW(sample_class_pair_edges(y, {10, 25, 10}, 1));
}

TEST(ClassPairEdges, CountsAndHomophilyExactOverRandomTriples) {
  const auto y = two_classes(60);
  Rng rng(99);
  for (int trial = 0; trial < 25; ++trial) {
    ClassPairCounts c;
    c.purple_purple = rng.below(1771);
    c.purple_yellow = rng.below(3601);
    c.yellow_yellow = rng.below(1771);
    if (c.total() == 0) continue;
    const Graph g = sample_class_pair_edges(y, c, static_cast<std::uint64_t>(trial));
    expect_simple(g);
    const auto r = realized(g, y);
    EXPECT_EQ(r.purple_purple, c.purple_purple);
    EXPECT_EQ(r.purple_yellow, c.purple_yellow);
    EXPECT_EQ(r.yellow_yellow, c.yellow_yellow);
    EXPECT_DOUBLE_EQ(edge_homophily(g, y),
                     static_cast<double>(c.purple_purple + c.yellow_yellow) /
                         static_cast<double>(c.total()));
  }
}

TEST(ClassPairEdges, DerivedProbabilitiesSumToOne) {
  const ClassPairCounts c{1000, 1000, 1000};
  EXPECT_DOUBLE_EQ(c.p_purple_purple(), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(c.p_purple_yellow(), 1.0 / 3.0);
  EXPECT_NEAR(c.p_purple_purple() + c.p_purple_yellow() + c.p_yellow_yellow(), 1.0, 1e-15);
}

TEST(HomophilySampler, HitsLevelsExactly) {
  const auto y = two_classes(500);
  for (double h : {0.51, 0.61, 0.73, 0.87, 0.98}) {
    const Graph g = sample_graph_with_homophily(y, h, 5000, 7);
    EXPECT_EQ(g.n_edges(), 5000u);
    expect_simple(g);
    EXPECT_DOUBLE_EQ(edge_homophily(g, y), std::round(h * 5000.0) / 5000.0) << h;
    const auto r = realized(g, y);
    EXPECT_LE(std::max(r.purple_purple, r.yellow_yellow) - std::min(r.purple_purple, r.yellow_yellow),
              1u);
  }
}

TEST(HomophilySampler, OddTotalsStayWithinOneEdge) {
  const auto y = two_classes(100);
  const Graph g = sample_graph_with_homophily(y, 0.51, 333, 1);
  EXPECT_LE(std::abs(edge_homophily(g, y) - 0.51), 1.0 / 333.0);
}

TEST(HomophilySampler, InfeasibleIsCapacityError) {
  const auto y = two_classes(5);
  EXPECT_THROW(sample_graph_with_homophily(y, 1.0, 21, 1), CapacityError);
}
