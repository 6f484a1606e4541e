#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nbx/arc_index.hpp"
#include "nbx/graph.hpp"
#include "nbx/sparse.hpp"

namespace nbx {

/// Per-arc hidden features, one row per arc id (2m x f).
struct ArcFeatureMatrix {
  int rows = 0;
  int f = 0;
  std::vector<double> values;

  ArcFeatureMatrix() = default;
  ArcFeatureMatrix(int rows_, int f_)
      : rows(rows_), f(f_), values(static_cast<std::size_t>(rows_) * f_, 0.0) {}

  double* row(int a) { return values.data() + static_cast<std::size_t>(a) * f; }
  const double* row(int a) const { return values.data() + static_cast<std::size_t>(a) * f; }
};

/// Node features, n x f_in row-major. Edge features are keyed by undirected
/// edge id (arc id / 2).
struct NodeFeatures {
  int n = 0;
  int f_in = 0;
  std::vector<double> values;

  NodeFeatures() = default;
  NodeFeatures(int n_, int f_in_)
      : n(n_), f_in(f_in_), values(static_cast<std::size_t>(n_) * f_in_, 0.0) {}
  double* row(int i) { return values.data() + static_cast<std::size_t>(i) * f_in; }
  const double* row(int i) const { return values.data() + static_cast<std::size_t>(i) * f_in; }
};

struct EdgeFeatures {
  int m = 0;
  int f_edge = 0;
  std::vector<double> values;
  const double* row(int e) const { return values.data() + static_cast<std::size_t>(e) * f_edge; }
};

struct NbaGcnModel {
  int f_in = 0;
  int f_edge = 0;  // 0 when no edge features
  int f = 0;
  int f_out = 0;
  bool begrudging = false;

  std::vector<double> encoder_w;               // f x (2 f_in + f_edge)
  std::vector<double> encoder_b;               // f
  std::vector<std::vector<double>> layers;     // each f x f
  std::vector<double> head_in;                 // f_out x f
  std::vector<double> head_out;                // f_out x f
  std::vector<double> head_bias;               // f_out

  int encoder_cols() const { return 2 * f_in + f_edge; }

  /// Weights uniform in [-1/sqrt(f), 1/sqrt(f)], deterministic per seed.
  static NbaGcnModel random(int f_in, int f_edge, int f, int f_out, int num_layers,
                            bool begrudging, std::uint64_t seed);

  std::string to_json(bool pretty = false) const;
  static NbaGcnModel from_json(const std::string& text);
};

/// Mirror of the trainable parameters, used for gradients.
struct ModelGrads {
  std::vector<double> encoder_w, encoder_b;
  std::vector<std::vector<double>> layers;
  std::vector<double> head_in, head_out, head_bias;

  static ModelGrads zeros_like(const NbaGcnModel& m);
};

/// h^(0)_{u->v} = encoder([x_u || x_v || e_uv?]) + bias.
ArcFeatureMatrix init_messages(const Graph& g, const ArcIndex& ai,
                               const NodeFeatures& x, const EdgeFeatures* e,
                               const NbaGcnModel& model);

/// Residual GCN-style update on arcs: for arc j->i with d_j >= 2,
/// h' = h + relu(W sum_{k in N(j)\{i}} h_{k->j} / (d_j - 1)). Leaf-tail arcs
/// pass through unchanged unless begrudging is on, in which case the reverse
/// arc is the sole predecessor with normalizer 1.
ArcFeatureMatrix nba_gcn_layer(const ArcFeatureMatrix& h, const Graph& g,
                               const ArcIndex& ai, const std::vector<double>& w,
                               int f, bool begrudging);

/// Node readout: head_in * mean incoming + head_out * mean outgoing + bias.
/// Throws IsolatedNode when some node has no incident arc.
std::vector<double> aggregate_nodes(const ArcFeatureMatrix& h, const Graph& g,
                                    const ArcIndex& ai, const NbaGcnModel& model);

/// Full pipeline; output is n x f_out row-major.
std::vector<double> forward(const Graph& g, const ArcIndex& ai, const NodeFeatures& x,
                            const EdgeFeatures* e, const NbaGcnModel& model);

/// Central finite differences of the output at `target` with respect to
/// x_source; returns f_out x f_in.
DenseMatrix jacobian_fd(const Graph& g, const ArcIndex& ai, const NodeFeatures& x,
                        const NbaGcnModel& model, int source, int target, double eps);

struct LossAndGrads {
  double loss = 0.0;
  ModelGrads grads;
};

/// Softmax cross-entropy over masked nodes with exact reverse-mode gradients
/// (relu subgradient at 0 is 0).
LossAndGrads loss_and_grads(const NbaGcnModel& model, const Graph& g, const ArcIndex& ai,
                            const NodeFeatures& x, const std::vector<int>& labels,
                            const std::vector<int>& mask);

struct TrainConfig {
  double learning_rate = 0.05;
  int epochs = 100;
  std::uint64_t seed = 0;
  std::vector<int> mask;
};

struct TrainResult {
  NbaGcnModel model;
  std::vector<double> history;
};

/// Full-batch gradient descent. Throws NonFiniteLoss on divergence.
TrainResult train(NbaGcnModel model, const Graph& g, const ArcIndex& ai,
                  const NodeFeatures& x, const std::vector<int>& labels,
                  const TrainConfig& cfg);

/// Argmax class per node from forward outputs.
std::vector<int> predict_classes(const std::vector<double>& outputs, int n, int f_out);

}  // namespace nbx
