#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "graphomic/errors.hpp"
#include "graphomic/nn/layers.hpp"
#include "graphomic/nn/losses.hpp"
#include "graphomic/numcore/gradcheck.hpp"
#include "graphomic/numcore/ops.hpp"

using namespace graphomic;
using namespace graphomic::nn;

namespace {

double scalar(const Var& v) { return v.value()(0, 0); }

double kernel(const Matrix& a, Index i, const Matrix& b, Index j, double bw) {
  return std::exp(-(a.row(i) - b.row(j)).squaredNorm() / (2.0 * bw * bw));
}

// Direct pair loop; unbiased drops i == j in same-set terms and in the cross term.
double mmd_loop(const Matrix& p, const Matrix& q, double bw, bool unbiased) {
  const Index n = p.rows(), m = q.rows();
  double pp = 0, qq = 0, pq = 0;
  double npp = 0, nqq = 0, npq = 0;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (!unbiased || i != j) pp += kernel(p, i, p, j, bw), ++npp;
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < m; ++j)
      if (!unbiased || i != j) qq += kernel(q, i, q, j, bw), ++nqq;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < m; ++j)
      if (!unbiased || n != m || i != j) pq += kernel(p, i, q, j, bw), ++npq;
  return pp / npp + qq / nqq - 2.0 * pq / npq;
}

// 1-D KL(N(mu, e^lv) || N(0,1)) by composite Simpson over +-12 sd.
double kl_quadrature(double mu, double logvar) {
  const double sd = std::exp(0.5 * logvar);
  const double lo = mu - 12 * sd, hi = mu + 12 * sd;
  const int n = 20000;
  const double h = (hi - lo) / n;
  auto f = [&](double x) {
    const double lq = -0.5 * std::log(2 * std::numbers::pi) - 0.5 * logvar -
                      (x - mu) * (x - mu) / (2 * sd * sd);
    const double lp = -0.5 * std::log(2 * std::numbers::pi) - 0.5 * x * x;
    return std::exp(lq) * (lq - lp);
  };
  double s = f(lo) + f(hi);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(lo + i * h);
  return s * h / 3.0;
}

Matrix binary(Rng& rng, Index r, Index c, double p) {
  Matrix m(r, c);
  for (Index i = 0; i < m.size(); ++i) m.data()[i] = rng.bernoulli(p) ? 1.0 : 0.0;
  return m;
}

Matrix permute(const Matrix& m, const std::vector<Index>& perm) {
  return m(perm, Eigen::all);
}

}  // namespace

TEST(Mse, Examples) {
  Tape t;
  Rng rng(1);
  const Matrix x = rng.normal_matrix(4, 3);
  EXPECT_EQ(scalar(mse(t.constant(x), t.constant(x))), 0.0);
  EXPECT_EQ(scalar(mse(t.constant(Matrix::Zero(1, 1)), t.constant(Matrix::Constant(1, 1, 2.0)))), 4.0);
  EXPECT_THROW(mse(t.constant(x), t.constant(Matrix::Zero(3, 4))), DimensionError);
}

TEST(Mse, MatchesLoop) {
  Rng rng(2);
  const Matrix a = rng.normal_matrix(7, 5), b = rng.normal_matrix(7, 5);
  double s = 0;
  for (Index i = 0; i < 7; ++i)
    for (Index j = 0; j < 5; ++j) s += (a(i, j) - b(i, j)) * (a(i, j) - b(i, j));
  Tape t;
  EXPECT_NEAR(scalar(mse(t.constant(a), t.constant(b))), s / 35.0, 1e-14);
}

TEST(Bce, Examples) {
  Tape t;
  EXPECT_NEAR(scalar(bce(t.constant(Matrix::Constant(2, 2, 0.5)), t.constant(Matrix::Constant(2, 2, 0.5)))),
              std::log(2.0), 1e-15);
  EXPECT_LT(scalar(bce(t.constant(Matrix::Ones(1, 1)), t.constant(Matrix::Ones(1, 1)))), 1e-6);
  EXPECT_THROW(bce(t.constant(Matrix::Constant(1, 1, 1.5)), t.constant(Matrix::Constant(1, 1, 0.5))),
               ContractError);
}

TEST(Bce, MatchesLoopWithClamp) {
  Rng rng(3);
  const Matrix x = binary(rng, 6, 4, 0.4);
  Matrix xh = rng.uniform_matrix(6, 4, 0.0, 1.0);
  xh(0, 0) = 0.0;
  xh(1, 1) = 1.0;
  double s = 0;
  for (Index i = 0; i < x.size(); ++i) {
    const double p = std::clamp(xh.data()[i], 1e-7, 1.0 - 1e-7);
    s -= x.data()[i] * std::log(p) + (1 - x.data()[i]) * std::log(1 - p);
  }
  Tape t;
  EXPECT_NEAR(scalar(bce(t.constant(x), t.constant(xh))), s / 24.0, 1e-12);
}

TEST(Kl, Examples) {
  Tape t;
  EXPECT_EQ(scalar(kl_diag_gaussian(t.constant(Matrix::Zero(3, 2)), t.constant(Matrix::Zero(3, 2)))), 0.0);
  EXPECT_DOUBLE_EQ(scalar(kl_diag_gaussian(t.constant(Matrix::Ones(1, 1)), t.constant(Matrix::Zero(1, 1)))),
                   0.5);
}

TEST(Kl, MatchesQuadratureIn1D) {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const double mu = rng.uniform(-2, 2), lv = rng.uniform(-2, 1.5);
    Tape t;
    const double got = scalar(kl_diag_gaussian(t.constant(Matrix::Constant(1, 1, mu)),
                                               t.constant(Matrix::Constant(1, 1, lv))));
    EXPECT_NEAR(got, kl_quadrature(mu, lv), 1e-6) << mu << " " << lv;
  }
}

TEST(Kl, NonNegative) {
  Rng rng(5);
  for (int s = 0; s < 20; ++s) {
    Tape t;
    EXPECT_GE(scalar(kl_diag_gaussian(t.constant(rng.normal_matrix(5, 3)),
                                      t.constant(rng.normal_matrix(5, 3)))),
              0.0);
  }
}

TEST(Mmd, IdenticalSetsGiveZero) {
  Rng rng(6);
  const Matrix p = rng.normal_matrix(10, 3);
  Tape t;
  EXPECT_LT(std::abs(scalar(mmd(t.constant(p), t.constant(p), 1.0, MmdEstimator::biased))), 1e-10);
  EXPECT_LT(std::abs(scalar(mmd(t.constant(p), t.constant(p), 1.0, MmdEstimator::unbiased))), 1e-10);
}

TEST(Mmd, PointMassesClosedForm) {
  const double d = 1.3, bw = 0.8;
  const double expected = 2.0 * (1.0 - std::exp(-d * d / (2 * bw * bw)));
  Tape t;
  Matrix a = Matrix::Zero(1, 2), b = Matrix::Zero(1, 2);
  b(0, 0) = d;
  EXPECT_NEAR(scalar(mmd(t.constant(a), t.constant(b), bw)), expected, 1e-14);
  const Matrix a4 = a.replicate(4, 1), b4 = b.replicate(4, 1);
  EXPECT_NEAR(scalar(mmd(t.constant(a4), t.constant(b4), bw, MmdEstimator::unbiased)), expected, 1e-14);
}

TEST(Mmd, MatchesPairLoop) {
  Rng rng(7);
  for (int s = 0; s < 20; ++s) {
    const Matrix p = rng.normal_matrix(9, 4), q = rng.normal_matrix(9, 4) * 1.5;
    const Matrix r = rng.normal_matrix(6, 4);
    Tape t;
    EXPECT_NEAR(scalar(mmd(t.constant(p), t.constant(q), 1.7)), mmd_loop(p, q, 1.7, false), 1e-12);
    EXPECT_NEAR(scalar(mmd(t.constant(p), t.constant(q), 1.7, MmdEstimator::unbiased)),
                mmd_loop(p, q, 1.7, true), 1e-12);
    EXPECT_NEAR(scalar(mmd(t.constant(p), t.constant(r), 1.7, MmdEstimator::unbiased)),
                mmd_loop(p, r, 1.7, true), 1e-12);
  }
}

TEST(Mmd, BiasedEstimatorNonNegative) {
  Rng rng(8);
  for (int s = 0; s < 20; ++s) {
    Tape t;
    EXPECT_GE(scalar(mmd(t.constant(rng.normal_matrix(8, 3)), t.constant(rng.normal_matrix(8, 3)), 1.2)),
              -1e-10);
  }
}

TEST(Mmd, DefaultBandwidth) { EXPECT_DOUBLE_EQ(default_mmd_bandwidth(32), 4.0); }

TEST(VaeLoss, BetaZeroIsReconstructionAndBetaScalesLinearly) {
  Rng rng(9);
  const Matrix x = rng.normal_matrix(8, 4), xh = rng.normal_matrix(8, 4);
  const Matrix mu = rng.normal_matrix(8, 2), lv = rng.normal_matrix(8, 2) * 0.3;
  const Matrix z = rng.normal_matrix(8, 2);
  for (auto kind : {Regularizer::Kind::kl, Regularizer::Kind::mmd}) {
    Regularizer reg;
    reg.kind = kind;
    Tape t;
    Rng r0(1), r1(1);
    const auto zero = vae_loss(t.constant(x), t.constant(xh), t.constant(mu), t.constant(lv),
                               t.constant(z), 0.0, ReconKind::mse, reg, r0);
    const auto full = vae_loss(t.constant(x), t.constant(xh), t.constant(mu), t.constant(lv),
                               t.constant(z), 25.0, ReconKind::mse, reg, r1);
    EXPECT_DOUBLE_EQ(scalar(zero.total), scalar(mse(t.constant(x), t.constant(xh))));
    EXPECT_NEAR(scalar(full.total), scalar(full.reconstruction) + 25.0 * scalar(full.regularization),
                1e-12);
    EXPECT_DOUBLE_EQ(scalar(zero.regularization), scalar(full.regularization));
  }
}

TEST(VgaeLoss, ZeroEmbeddingGivesWeightedLog2) {
  Rng rng(10);
  const Index n = 6;
  Matrix a = binary(rng, n, n, 0.3);
  a = ((a + a.transpose()).array() > 0).cast<double>().matrix();
  a.diagonal().setOnes();
  const double pos = a.sum();
  const double w = (n * n - pos) / pos;
  Tape t;
  const double got = scalar(vgae_reconstruction(t.constant(Matrix::Zero(n, 3)), a));
  EXPECT_NEAR(got, std::log(2.0) * (w * pos + (n * n - pos)) / (n * n), 1e-14);
}

TEST(VgaeLoss, MatchesLoopAndPerfectLimit) {
  Rng rng(11);
  const Index n = 10;
  Matrix a = binary(rng, n, n, 0.25);
  a = ((a + a.transpose()).array() > 0).cast<double>().matrix();
  a.diagonal().setOnes();
  const Matrix z = rng.normal_matrix(n, 3);
  const double pos = a.sum(), w = (n * n - pos) / pos;
  double s = 0;
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      const double p = 1.0 / (1.0 + std::exp(-z.row(i).dot(z.row(j))));
      s -= w * a(i, j) * std::log(p) + (1 - a(i, j)) * std::log(1 - p);
    }
  }
  Tape t;
  EXPECT_NEAR(scalar(vgae_reconstruction(t.constant(z), a)), s / (n * n), 1e-12);

  const Matrix mu = rng.normal_matrix(n, 3), lv = rng.normal_matrix(n, 3) * 0.2;
  EXPECT_NEAR(scalar(vgae_loss(t.constant(z), a, t.constant(mu), t.constant(lv))),
              s / (n * n) + scalar(kl_diag_gaussian(t.constant(mu), t.constant(lv))) / n, 1e-12);

  // Orthogonal rows leave off-diagonal logits at 0 (probability 0.5), so the
  // limit needs negative pairwise products: centred simplex vertices.
  const Matrix big = 20.0 * (Matrix::Identity(4, 4).array() - 0.25).matrix();
  EXPECT_LT(scalar(vgae_reconstruction(t.constant(big), Matrix::Identity(4, 4))), 1e-6);
}

TEST(DgiLoss, Examples) {
  Tape t;
  EXPECT_NEAR(scalar(dgi_loss(t.constant(Matrix::Constant(5, 1, 0.5)), t.constant(Matrix::Constant(5, 1, 0.5)))),
              std::log(2.0), 1e-15);
  EXPECT_LT(scalar(dgi_loss(t.constant(Matrix::Constant(5, 1, 1 - 1e-9)),
                            t.constant(Matrix::Constant(3, 1, 1e-9)))),
            1e-8);
}

TEST(DgiLoss, LogitFormMatchesProbabilityForm) {
  Rng rng(12);
  const Matrix pl = rng.normal_matrix(7, 1) * 2, nl = rng.normal_matrix(4, 1) * 2;
  const Matrix pp = (1.0 + (-pl.array()).exp()).inverse().matrix();
  const Matrix np = (1.0 + (-nl.array()).exp()).inverse().matrix();
  double s = 0;
  for (Index i = 0; i < 7; ++i) s += std::log(pp(i, 0));
  for (Index i = 0; i < 4; ++i) s += std::log(1 - np(i, 0));
  Tape t;
  EXPECT_NEAR(scalar(dgi_loss_from_logits(t.constant(pl), t.constant(nl))), -s / 11.0, 1e-12);
  EXPECT_NEAR(scalar(dgi_loss(t.constant(pp), t.constant(np))), -s / 11.0, 1e-12);
}

// Gradient checks over 20 seeds for every loss.
TEST(LossGradients, FiniteDifferencesOverTwentySeeds) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    const Matrix x = rng.normal_matrix(8, 4);
    const Matrix xb = binary(rng, 8, 4, 0.5);
    Matrix adj = binary(rng, 10, 10, 0.3);
    adj = ((adj + adj.transpose()).array() > 0).cast<double>().matrix();
    adj.diagonal().setOnes();
    const Matrix prior = rng.normal_matrix(8, 2);
    const Matrix perm_rows = permute(Matrix::Identity(6, 6), rng.permutation(6));

    struct Case {
      const char* name;
      std::vector<Matrix> inputs;
      ScalarFunction f;
    };
    const std::vector<Case> cases{
        {"mse", {rng.normal_matrix(8, 4)},
         [&](Tape& t, std::span<const Var> p) { return mse(t.constant(x), p[0]); }},
        {"bce", {rng.normal_matrix(8, 4)},
         [&](Tape& t, std::span<const Var> p) { return bce(t.constant(xb), ad::sigmoid(p[0])); }},
        {"kl", {rng.normal_matrix(8, 2), rng.normal_matrix(8, 2) * 0.5},
         [](Tape&, std::span<const Var> p) { return kl_diag_gaussian(p[0], p[1]); }},
        {"mmd_biased", {rng.normal_matrix(8, 2)},
         [&](Tape& t, std::span<const Var> p) { return mmd(p[0], t.constant(prior), 1.0); }},
        {"mmd_unbiased", {rng.normal_matrix(8, 2)},
         [&](Tape& t, std::span<const Var> p) {
           return mmd(p[0], t.constant(prior), 1.0, MmdEstimator::unbiased);
         }},
        {"vae_kl", {rng.normal_matrix(8, 4), rng.normal_matrix(8, 2), rng.normal_matrix(8, 2) * 0.3},
         [&](Tape& t, std::span<const Var> p) {
           Rng r(seed);
           const Var z = reparameterize(t, p[1], p[2], r);
           return vae_loss(t.constant(x), p[0], p[1], p[2], z, 25.0, ReconKind::mse,
                           Regularizer{Regularizer::Kind::kl}, r)
               .total;
         }},
        {"vae_mmd_bce", {rng.normal_matrix(8, 4), rng.normal_matrix(8, 2), rng.normal_matrix(8, 2) * 0.3},
         [&](Tape& t, std::span<const Var> p) {
           Rng r(seed);
           const Var z = reparameterize(t, p[1], p[2], r);
           return vae_loss(t.constant(xb), ad::sigmoid(p[0]), p[1], p[2], z, 25.0, ReconKind::bce,
                           Regularizer{Regularizer::Kind::mmd, 1.0}, r)
               .total;
         }},
        {"vgae", {rng.normal_matrix(10, 3), rng.normal_matrix(10, 3) * 0.3},
         [&](Tape& t, std::span<const Var> p) {
           Rng r(seed);
           const Var z = reparameterize(t, p[0], p[1], r);
           return vgae_loss(z, adj, p[0], p[1]);
         }},
        {"dgi_bilinear", {rng.normal_matrix(6, 3), rng.normal_matrix(3, 3) * 0.5},
         [&](Tape& t, std::span<const Var> p) {
           const Var s = ad::transpose(ad::sigmoid(ad::col_mean(p[0])));
           const Var shuffled = ad::matmul(t.constant(perm_rows), p[0]);
           const Var pos = ad::matmul(ad::matmul(p[0], p[1]), s);
           const Var neg = ad::matmul(ad::matmul(shuffled, p[1]), s);
           return dgi_loss(ad::sigmoid(pos), ad::sigmoid(neg));
         }},
        {"dgi_logits", {rng.normal_matrix(6, 1), rng.normal_matrix(6, 1)},
         [](Tape&, std::span<const Var> p) { return dgi_loss_from_logits(p[0], p[1]); }},
    };
    for (const auto& c : cases) {
      EXPECT_LT(finite_diff_check(c.f, c.inputs), 1e-4) << c.name << " seed " << seed;
    }
  }
}

TEST(LossInvariance, RowPermutationAppliedToAllInputs) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed + 100);
    const Matrix a = rng.normal_matrix(9, 3), b = rng.normal_matrix(9, 3);
    const Matrix pa = rng.uniform_matrix(9, 3, 0.05, 0.95);
    const Matrix ta = binary(rng, 9, 3, 0.5);
    const auto perm = rng.permutation(9);
    auto same = [&](auto loss) {
      Tape t;
      EXPECT_NEAR(scalar(loss(t, a, b, pa, ta)),
                  scalar(loss(t, permute(a, perm), permute(b, perm), permute(pa, perm), permute(ta, perm))),
                  1e-12);
    };
    same([](Tape& t, const Matrix& x, const Matrix& y, const Matrix&, const Matrix&) {
      return mse(t.constant(x), t.constant(y));
    });
    same([](Tape& t, const Matrix&, const Matrix&, const Matrix& p, const Matrix& y) {
      return bce(t.constant(y), t.constant(p));
    });
    same([](Tape& t, const Matrix& x, const Matrix& y, const Matrix&, const Matrix&) {
      return kl_diag_gaussian(t.constant(x), t.constant(y));
    });
    same([](Tape& t, const Matrix& x, const Matrix& y, const Matrix&, const Matrix&) {
      return mmd(t.constant(x), t.constant(y), 1.3);
    });
    same([](Tape& t, const Matrix& x, const Matrix& y, const Matrix&, const Matrix&) {
      return mmd(t.constant(x), t.constant(y), 1.3, MmdEstimator::unbiased);
    });
    same([](Tape& t, const Matrix&, const Matrix&, const Matrix& p, const Matrix& y) {
      return dgi_loss(t.constant(p.col(0)), t.constant(p.col(1)));
    });
    // VGAE: permuting nodes permutes A on both axes.
    Matrix adj = ta * ta.transpose();
    adj = (adj.array() > 0).cast<double>().matrix();
    adj.diagonal().setOnes();
    Tape t;
    Matrix padj = permute(adj, perm);
    padj = permute(Matrix(padj.transpose()), perm);
    EXPECT_NEAR(scalar(vgae_loss(t.constant(a), adj, t.constant(a), t.constant(b * 0.1))),
                scalar(vgae_loss(t.constant(permute(a, perm)), padj, t.constant(permute(a, perm)),
                                 t.constant(permute(b, perm) * 0.1))),
                1e-12);
  }
}

TEST(Dense, ComputesAffineActivation) {
  Rng rng(13);
  Dense d(4, 3, Activation::sigmoid, rng);
  d.bias().value = rng.normal_matrix(1, 3);
  const Matrix x = rng.normal_matrix(5, 4);
  Tape t;
  const Matrix got = d.forward(t, t.constant(x)).value();
  const Matrix pre = (x * d.weight().value).rowwise() + RowVector(d.bias().value);
  EXPECT_TRUE(got.isApprox((1.0 + (-pre.array()).exp()).inverse().matrix(), 1e-14));
  EXPECT_THROW(d.forward(t, t.constant(rng.normal_matrix(5, 3))), DimensionError);
}

TEST(Dense, GlorotRange) {
  Rng rng(14);
  const Matrix w = glorot_uniform(30, 20, rng);
  EXPECT_LE(w.cwiseAbs().maxCoeff(), std::sqrt(6.0 / 50.0));
}

TEST(Gcn, IdentityAdjacencyIsBiasFreeDense) {
  Rng rng(15);
  GcnLayer g(4, 3, Activation::prelu, rng);
  Dense d(4, 3, Activation::prelu, rng);
  d.weight().value = g.weight().value;
  const Matrix x = rng.normal_matrix(6, 4);
  const NormalizedAdjacency eye(Graph(6));
  Tape t;
  EXPECT_EQ(g.forward(t, eye, t.constant(x)).value(), d.forward(t, t.constant(x)).value());
}

TEST(Gcn, PropagatesOverNormalizedAdjacency) {
  Rng rng(16);
  Graph graph(5);
  graph.add_edge(0, 1);
  graph.add_edge(1, 2, 0.5);
  graph.add_edge(3, 4);
  GcnLayer g(3, 2, Activation::identity, rng);
  const Matrix x = rng.normal_matrix(5, 3);
  const NormalizedAdjacency adj(graph);
  Tape t;
  EXPECT_TRUE(g.forward(t, adj, t.constant(x)).value().isApprox(adj.dense() * x * g.weight().value, 1e-14));
}

TEST(BatchNorm, TrainingStandardizesAndEvalUsesRunningStats) {
  Rng rng(17);
  const Matrix x = (rng.normal_matrix(200, 3) * 3.0).array() + 5.0;
  BatchNorm bn(3);
  Tape t;
  const Matrix y = bn.forward(t, t.constant(x), Mode::train).value();
  const RowVector mean = y.colwise().mean();
  const RowVector var = (y.rowwise() - mean).array().square().colwise().mean();
  EXPECT_LT(mean.cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((var.array() - 1.0).abs().maxCoeff(), 1e-4);
  const RowVector xm = x.colwise().mean();
  EXPECT_TRUE(bn.running_mean().isApprox(0.1 * xm, 1e-12));
  const Matrix e = bn.forward(t, t.constant(x.topRows(1)), Mode::eval).value();
  const RowVector expected =
      (x.row(0) - bn.running_mean()).array() / (bn.running_var().array() + 1e-5).sqrt();
  EXPECT_TRUE(RowVector(e).isApprox(expected, 1e-12));
  EXPECT_THROW(bn.forward(t, t.constant(x.topRows(1)), Mode::train), ContractError);
}

TEST(Dropout, EvalIsIdentityAndTrainDropsTwentyPercent) {
  Rng rng(18);
  Dropout drop;
  const Matrix x = Matrix::Ones(1000, 100);
  Tape t;
  const Var in = t.constant(x);
  EXPECT_EQ(drop.forward(t, in, Mode::eval, rng).value(), x);
  const Matrix y = drop.forward(t, in, Mode::train, rng).value();
  const double zero_fraction = static_cast<double>((y.array() == 0.0).count()) / 1e5;
  EXPECT_NEAR(zero_fraction, 0.2, 0.01);
  EXPECT_TRUE(((y.array() == 0.0) || ((y.array() - 1.25).abs() < 1e-15)).all());
  EXPECT_THROW(Dropout(1.0), ContractError);
}

TEST(Reparameterize, UsesMeanAndHalfLogVariance) {
  Rng a(19), b(19);
  const Matrix mu = Matrix::Constant(3, 2, 1.5), lv = Matrix::Constant(3, 2, std::log(4.0));
  Tape t;
  const Matrix z = reparameterize(t, t.constant(mu), t.constant(lv), a).value();
  const Matrix eps = b.normal_matrix(3, 2);
  EXPECT_TRUE(z.isApprox(mu + 2.0 * eps, 1e-14));
}
