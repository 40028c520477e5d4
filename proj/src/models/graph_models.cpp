#include "graphomic/models/graph_models.hpp"

#include <functional>

#include "graphomic/errors.hpp"
#include "graphomic/numcore/adam.hpp"

namespace graphomic {

void GraphModelSpec::validate() const {
  if (conv_layers < 1 || conv_layers > 3) {
    throw ConfigError("conv_layers must be in 1..3, got " + std::to_string(conv_layers));
  }
  if (ls <= 0 || ds <= 0) throw ConfigError("graph model widths must be positive");
  if (epochs <= 0) throw ConfigError("graph model epochs must be positive");
  if (!(learning_rate > 0.0)) throw ConfigError("graph model learning rate must be positive");
}

Matrix permute_rows(const Matrix& X, std::span<const Index> perm) {
  if (static_cast<Index>(perm.size()) != X.rows()) {
    throw DimensionError("permutation length " + std::to_string(perm.size()) + " vs " +
                         std::to_string(X.rows()) + " rows");
  }
  Matrix out(X.rows(), X.cols());
  for (Index i = 0; i < X.rows(); ++i) {
    const Index src = perm[static_cast<std::size_t>(i)];
    if (src < 0 || src >= X.rows()) throw ContractError("permutation index out of range");
    out.row(i) = X.row(src);
  }
  return out;
}

Corruption corrupt(const Matrix& X, std::uint64_t seed) {
  Rng rng(seed);
  Corruption c;
  c.permutation = rng.permutation(X.rows());
  c.features = permute_rows(X, c.permutation);
  return c;
}

Var readout(const Var& H) { return ad::sigmoid(ad::col_mean(H)); }

RowVector readout(const Matrix& H) {
  const RowVector m = H.colwise().mean();
  return m.unaryExpr([](double v) { return 1.0 / (1.0 + std::exp(-v)); });
}

Discriminator::Discriminator(Index ls, Rng& rng)
    : weight_("disc.W", nn::glorot_uniform(ls, ls, rng)) {}

Var Discriminator::logits(Tape& tape, const Var& H, const Var& summary) {
  const Var w = tape.parameter(weight_);
  return ad::matmul(ad::matmul(H, w), ad::transpose(summary));
}

Matrix Discriminator::scores(const Matrix& H, const RowVector& summary) const {
  const Matrix l = H * weight_.value * summary.transpose();
  return l.unaryExpr([](double v) { return 1.0 / (1.0 + std::exp(-v)); });
}

GcnStack::GcnStack(Index in, Index width, int layers, Rng& rng, const std::string& name) {
  if (layers < 1) throw ConfigError("GCN stack needs at least one layer");
  layers_.reserve(static_cast<std::size_t>(layers));
  for (int l = 0; l < layers; ++l) {
    layers_.emplace_back(l == 0 ? in : width, width, ad::Activation::prelu, rng,
                         name + ".gcn" + std::to_string(l));
  }
}

Var GcnStack::forward(Tape& tape, const NormalizedAdjacency& adj, const Var& x) {
  Var h = x;
  for (auto& layer : layers_) h = layer.forward(tape, adj, h);
  return h;
}

std::vector<Parameter*> GcnStack::parameters() {
  std::vector<Parameter*> out;
  for (auto& layer : layers_) {
    auto p = layer.parameters();
    out.insert(out.end(), p.begin(), p.end());
  }
  return out;
}

IntegrationLayer::IntegrationLayer(Integration kind, Index ls, Rng& rng)
    : kind_(kind), dense_(2 * ls, ls, ad::Activation::identity, rng, "integrate") {}

Var IntegrationLayer::forward(Tape& tape, const Var& h1, const Var& h2) {
  if (h1.rows() != h2.rows() || h1.cols() != h2.cols()) {
    throw DimensionError("integration blocks differ: " + shape_string(h1.value()) + " vs " +
                         shape_string(h2.value()));
  }
  if (kind_ == Integration::avg) return ad::scale(ad::add(h1, h2), 0.5);
  const Var parts[] = {h1, h2};
  return dense_.forward(tape, ad::concat_cols(parts));
}

std::vector<Parameter*> IntegrationLayer::parameters() {
  if (kind_ == Integration::avg) return {};
  return dense_.parameters();
}

Graph build_hetero_graph(const Graph& g1, const Graph& g2) {
  if (g1.n_nodes() != g2.n_nodes()) {
    throw DimensionError("hetero graph sources differ in node count: " +
                         std::to_string(g1.n_nodes()) + " vs " + std::to_string(g2.n_nodes()));
  }
  const Index n = g1.n_nodes();
  Graph g(2 * n);
  for (std::size_t e = 0; e < g1.n_edges(); ++e) {
    g.add_edge(g1.edges()[e].i, g1.edges()[e].j, g1.weights()[e], 1);
  }
  for (std::size_t e = 0; e < g2.n_edges(); ++e) {
    g.add_edge(n + g2.edges()[e].i, n + g2.edges()[e].j, g2.weights()[e], 2);
  }
  for (Index i = 0; i < n; ++i) g.add_edge(i, n + i, 1.0, 3);
  std::vector<int> types(static_cast<std::size_t>(2 * n), 1);
  std::fill(types.begin() + n, types.end(), 2);
  g.set_node_types(std::move(types));
  return g;
}

std::pair<Var, Var> split_types(const Var& H) {
  if (H.rows() % 2 != 0) throw DimensionError("split needs an even row count, got " + shape_string(H.value()));
  const Index n = H.rows() / 2;
  return {ad::slice_rows(H, 0, n), ad::slice_rows(H, n, n)};
}

namespace {

void require_rows(const Matrix& X, const Graph& g, const char* what) {
  if (X.rows() != g.n_nodes()) {
    throw DimensionError(std::string(what) + ": " + std::to_string(X.rows()) +
                         " feature rows vs " + std::to_string(g.n_nodes()) + " graph nodes");
  }
}

Matrix adjacency_target(const Graph& g) {
  Matrix a = Matrix::Identity(g.n_nodes(), g.n_nodes());
  for (const Edge& e : g.edges()) {
    a(e.i, e.j) = 1.0;
    a(e.j, e.i) = 1.0;
  }
  return a;
}

/// Returns (H, H_corrupted) for one epoch.
using DgiForward = std::function<std::pair<Var, Var>(Tape&, Rng&)>;

std::vector<double> run_dgi(const DgiForward& forward, Discriminator& disc,
                            std::vector<Parameter*> params, const GraphModelSpec& spec, Rng& rng,
                            DgiScoreGap& scores) {
  auto dp = disc.parameters();
  params.insert(params.end(), dp.begin(), dp.end());
  Adam opt(std::move(params), spec.learning_rate);
  std::vector<double> history;
  history.reserve(static_cast<std::size_t>(spec.epochs));
  for (int epoch = 0; epoch < spec.epochs; ++epoch) {
    Tape tape;
    const auto [h, hc] = forward(tape, rng);
    const Var s = readout(h);
    const Var pos = disc.logits(tape, h, s);
    const Var neg = disc.logits(tape, hc, s);
    const Var loss = nn::dgi_loss_from_logits(pos, neg);
    opt.zero_grad();
    tape.backward(loss);
    opt.step();
    history.push_back(loss.value()(0, 0));
    if (epoch + 1 == spec.epochs) {
      auto sig = [](double v) { return 1.0 / (1.0 + std::exp(-v)); };
      scores.positive = pos.value().unaryExpr(sig).mean();
      scores.negative = neg.value().unaryExpr(sig).mean();
    }
  }
  return history;
}

}  // namespace

// ---- CNC-VGAE ----

CncVgae::CncVgae(Index in, const GraphModelSpec& spec, std::uint64_t seed)
    : spec_(spec), seed_(seed) {
  spec_.validate();
  Rng init = Rng(seed).derive(31);
  Index width = in;
  for (int l = 0; l + 1 < spec_.conv_layers; ++l) {
    shared_.emplace_back(width, spec_.ds, ad::Activation::prelu, init,
                         "vgae.gcn" + std::to_string(l));
    width = spec_.ds;
  }
  mu_head_ = std::make_unique<nn::GcnLayer>(width, spec_.ls, ad::Activation::identity, init, "vgae.mu");
  logvar_head_ =
      std::make_unique<nn::GcnLayer>(width, spec_.ls, ad::Activation::identity, init, "vgae.logvar");
}

std::vector<Parameter*> CncVgae::parameters() {
  std::vector<Parameter*> out;
  for (auto& layer : shared_) {
    auto p = layer.parameters();
    out.insert(out.end(), p.begin(), p.end());
  }
  for (auto* head : {mu_head_.get(), logvar_head_.get()}) {
    auto p = head->parameters();
    out.insert(out.end(), p.begin(), p.end());
  }
  return out;
}

Var CncVgae::loss(Tape& tape, const Matrix& X, const NormalizedAdjacency& adj,
                  const Matrix& target, Rng& rng) {
  Var h = tape.constant(X);
  for (auto& layer : shared_) h = layer.forward(tape, adj, h);
  const Var mu = mu_head_->forward(tape, adj, h);
  const Var logvar = logvar_head_->forward(tape, adj, h);
  const Var z = nn::reparameterize(tape, mu, logvar, rng);
  if (spec_.reg.kind == nn::Regularizer::Kind::kl) return nn::vgae_loss(z, target, mu, logvar);
  return ad::add(nn::vgae_reconstruction(z, target),
                 nn::regularizer_loss(mu, logvar, z, spec_.reg, rng));
}

std::vector<double> CncVgae::train(const Matrix& X, const Graph& graph) {
  require_rows(X, graph, "CNC-VGAE");
  require_finite(X, "CNC-VGAE input");
  const NormalizedAdjacency adj(graph);
  const Matrix target = adjacency_target(graph);
  Rng rng = Rng(seed_).derive(32);
  Adam opt(parameters(), spec_.learning_rate);
  std::vector<double> history;
  for (int epoch = 0; epoch < spec_.epochs; ++epoch) {
    Tape tape;
    const Var l = loss(tape, X, adj, target, rng);
    opt.zero_grad();
    tape.backward(l);
    opt.step();
    history.push_back(l.value()(0, 0));
  }
  trained_ = true;
  return history;
}

Embedding CncVgae::encode(const Matrix& X, const Graph& graph) {
  if (!trained_) throw ContractError("CNC-VGAE encode called before training");
  require_rows(X, graph, "CNC-VGAE");
  const NormalizedAdjacency adj(graph);
  Tape tape;
  Var h = tape.constant(X);
  for (auto& layer : shared_) h = layer.forward(tape, adj, h);
  return {mu_head_->forward(tape, adj, h).value(), "cnc_vgae", {}, 1};
}

// ---- CNC-DGI ----

CncDgi::CncDgi(Index in, const GraphModelSpec& spec, std::uint64_t seed)
    : spec_(spec),
      seed_(seed),
      init_(Rng(seed).derive(41)),
      encoder_(in, spec.ls, spec.conv_layers, init_, "cnc_dgi"),
      discriminator_(spec.ls, init_) {
  spec_.validate();
}

std::vector<double> CncDgi::train(const Matrix& X, const Graph& graph) {
  require_rows(X, graph, "CNC-DGI");
  require_finite(X, "CNC-DGI input");
  const NormalizedAdjacency adj(graph);
  Rng rng = Rng(seed_).derive(42);
  const DgiForward forward = [&](Tape& tape, Rng& r) {
    const Matrix xc = permute_rows(X, r.permutation(X.rows()));
    return std::pair{encoder_.forward(tape, adj, tape.constant(X)),
                     encoder_.forward(tape, adj, tape.constant(xc))};
  };
  auto history = run_dgi(forward, discriminator_, encoder_.parameters(), spec_, rng, scores_);
  trained_ = true;
  return history;
}

Embedding CncDgi::encode(const Matrix& X, const Graph& graph) {
  if (!trained_) throw ContractError("CNC-DGI encode called before training");
  require_rows(X, graph, "CNC-DGI");
  const NormalizedAdjacency adj(graph);
  Tape tape;
  return {encoder_.forward(tape, adj, tape.constant(X)).value(), "cnc_dgi", {}, 1};
}

// ---- 2G-DGI ----

namespace {

Rng& branch_init(Rng& init, bool shared, Index in1, Index in2) {
  if (shared && in1 != in2) throw ContractError("shared initialisation needs equal input widths");
  return init;
}

}  // namespace

TwoGraphDgi::TwoGraphDgi(Index in1, Index in2, const GraphModelSpec& spec, std::uint64_t seed,
                         bool shared_init)
    : spec_(spec),
      seed_(seed),
      init_(Rng(seed).derive(51)),
      encoder1_(in1, spec.ls, spec.conv_layers, branch_init(init_, shared_init, in1, in2), "g1"),
      encoder2_([&]() {
        if (!shared_init) return GcnStack(in2, spec.ls, spec.conv_layers, init_, "g2");
        Rng mirror = Rng(seed).derive(51);
        return GcnStack(in2, spec.ls, spec.conv_layers, mirror, "g2");
      }()),
      integration_(spec.integration.value_or(Integration::avg), spec.ls, init_),
      discriminator_(spec.ls, init_) {
  spec_.validate();
}

std::vector<double> TwoGraphDgi::train(const Matrix& x1, const Graph& g1, const Matrix& x2,
                                       const Graph& g2) {
  require_rows(x1, g1, "2G-DGI modality 1");
  require_rows(x2, g2, "2G-DGI modality 2");
  if (x1.rows() != x2.rows()) throw DimensionError("2G-DGI modalities disagree on sample count");
  require_finite(x1, "2G-DGI input 1");
  require_finite(x2, "2G-DGI input 2");
  const NormalizedAdjacency adj1(g1);
  const NormalizedAdjacency adj2(g2);
  Rng rng = Rng(seed_).derive(52);
  const DgiForward forward = [&](Tape& tape, Rng& r) {
    const Matrix c1 = permute_rows(x1, r.permutation(x1.rows()));
    const Matrix c2 = permute_rows(x2, r.permutation(x2.rows()));
    const Var h = integration_.forward(tape, encoder1_.forward(tape, adj1, tape.constant(x1)),
                                       encoder2_.forward(tape, adj2, tape.constant(x2)));
    const Var hc = integration_.forward(tape, encoder1_.forward(tape, adj1, tape.constant(c1)),
                                        encoder2_.forward(tape, adj2, tape.constant(c2)));
    return std::pair{h, hc};
  };
  std::vector<Parameter*> params = encoder1_.parameters();
  for (auto* p : encoder2_.parameters()) params.push_back(p);
  for (auto* p : integration_.parameters()) params.push_back(p);
  auto history = run_dgi(forward, discriminator_, std::move(params), spec_, rng, scores_);
  trained_ = true;
  return history;
}

std::pair<Matrix, Matrix> TwoGraphDgi::branch_outputs(const Matrix& x1, const Graph& g1,
                                                      const Matrix& x2, const Graph& g2) {
  require_rows(x1, g1, "2G-DGI modality 1");
  require_rows(x2, g2, "2G-DGI modality 2");
  const NormalizedAdjacency adj1(g1);
  const NormalizedAdjacency adj2(g2);
  Tape tape;
  Matrix h1 = encoder1_.forward(tape, adj1, tape.constant(x1)).value();
  Matrix h2 = encoder2_.forward(tape, adj2, tape.constant(x2)).value();
  return {std::move(h1), std::move(h2)};
}

Embedding TwoGraphDgi::encode(const Matrix& x1, const Graph& g1, const Matrix& x2,
                              const Graph& g2) {
  if (!trained_) throw ContractError("2G-DGI encode called before training");
  const auto branches = branch_outputs(x1, g1, x2, g2);
  Tape tape;
  const Var h1 = tape.constant(branches.first);
  const Var h2 = tape.constant(branches.second);
  const Var h = integration_.forward(tape, h1, h2);
  return {h.value(), "2g_dgi", {}, 1};
}

// ---- Hetero-DGI ----

HeteroDgi::HeteroDgi(Index in1, Index in2, const GraphModelSpec& spec, std::uint64_t seed)
    : spec_(spec),
      seed_(seed),
      init_(Rng(seed).derive(61)),
      project1_(in1, spec.ds, ad::Activation::identity, init_, "type1"),
      project2_(in2, spec.ds, ad::Activation::identity, init_, "type2"),
      encoder_(spec.ds, spec.ls, spec.conv_layers, init_, "hetero"),
      integration_(spec.integration.value_or(Integration::dense), spec.ls, init_),
      discriminator_(spec.ls, init_) {
  spec_.validate();
}

Var HeteroDgi::embed(Tape& tape, const NormalizedAdjacency& adj, const Matrix& x1,
                     const Matrix& x2) {
  const Var parts[] = {project1_.forward(tape, tape.constant(x1)),
                       project2_.forward(tape, tape.constant(x2))};
  const Var h = encoder_.forward(tape, adj, ad::concat_rows(parts));
  const auto [h1, h2] = split_types(h);
  return integration_.forward(tape, h1, h2);
}

std::vector<double> HeteroDgi::train(const Matrix& x1, const Matrix& x2, const Graph& hetero) {
  if (x1.rows() != x2.rows() || 2 * x1.rows() != hetero.n_nodes()) {
    throw DimensionError("Hetero-DGI expects two N-row blocks over a 2N-node graph");
  }
  require_finite(x1, "Hetero-DGI input 1");
  require_finite(x2, "Hetero-DGI input 2");
  const NormalizedAdjacency adj(hetero);
  Rng rng = Rng(seed_).derive(62);
  const DgiForward forward = [&](Tape& tape, Rng& r) {
    const Matrix c1 = permute_rows(x1, r.permutation(x1.rows()));
    const Matrix c2 = permute_rows(x2, r.permutation(x2.rows()));
    return std::pair{embed(tape, adj, x1, x2), embed(tape, adj, c1, c2)};
  };
  std::vector<Parameter*> params = nn::collect_parameters(project1_, project2_, encoder_);
  for (auto* p : integration_.parameters()) params.push_back(p);
  auto history = run_dgi(forward, discriminator_, std::move(params), spec_, rng, scores_);
  trained_ = true;
  return history;
}

Embedding HeteroDgi::encode(const Matrix& x1, const Matrix& x2, const Graph& hetero) {
  if (!trained_) throw ContractError("Hetero-DGI encode called before training");
  if (x1.rows() != x2.rows() || 2 * x1.rows() != hetero.n_nodes()) {
    throw DimensionError("Hetero-DGI expects two N-row blocks over a 2N-node graph");
  }
  const NormalizedAdjacency adj(hetero);
  Tape tape;
  return {embed(tape, adj, x1, x2).value(), "hetero_dgi", {}, 1};
}

// ---- free functions ----

Embedding train_cnc_vgae(const Matrix& x1, const Matrix& x2, const Graph& graph,
                         const GraphModelSpec& spec, std::uint64_t seed) {
  const Matrix x = hconcat(x1, x2);
  CncVgae model(x.cols(), spec, seed);
  auto history = model.train(x, graph);
  Embedding e = model.encode(x, graph);
  e.loss_history = std::move(history);
  return e;
}

Embedding train_cnc_dgi(const Matrix& x1, const Matrix& x2, const Graph& graph,
                        const GraphModelSpec& spec, std::uint64_t seed) {
  const Matrix x = hconcat(x1, x2);
  CncDgi model(x.cols(), spec, seed);
  auto history = model.train(x, graph);
  Embedding e = model.encode(x, graph);
  e.loss_history = std::move(history);
  return e;
}

Embedding train_2g_dgi(const Matrix& x1, const Graph& g1, const Matrix& x2, const Graph& g2,
                       const GraphModelSpec& spec, std::uint64_t seed) {
  TwoGraphDgi model(x1.cols(), x2.cols(), spec, seed);
  auto history = model.train(x1, g1, x2, g2);
  Embedding e = model.encode(x1, g1, x2, g2);
  e.loss_history = std::move(history);
  return e;
}

Embedding train_hetero_dgi(const Matrix& x1, const Graph& g1, const Matrix& x2, const Graph& g2,
                           const GraphModelSpec& spec, std::uint64_t seed) {
  const Graph hetero = build_hetero_graph(g1, g2);
  HeteroDgi model(x1.cols(), x2.cols(), spec, seed);
  auto history = model.train(x1, x2, hetero);
  Embedding e = model.encode(x1, x2, hetero);
  e.loss_history = std::move(history);
  return e;
}

}  // namespace graphomic
