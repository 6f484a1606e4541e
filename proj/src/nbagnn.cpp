#include "nbx/nbagnn.hpp"

#include <cmath>
#include "json.hpp"

#include "nbx/errors.hpp"
#include "nbx/rng.hpp"

namespace nbx {

namespace {

using json = nlohmann::json;

// y += W x with W row-major (out x in).
void gemv_acc(const std::vector<double>& w, int out, int in, const double* x, double* y) {
  for (int r = 0; r < out; ++r) {
    double acc = 0.0;
    const double* wr = w.data() + static_cast<std::size_t>(r) * in;
    for (int c = 0; c < in; ++c) acc += wr[c] * x[c];
    y[r] += acc;
  }
}

// y += W^T x.
void gemv_t_acc(const std::vector<double>& w, int out, int in, const double* x, double* y) {
  for (int r = 0; r < out; ++r) {
    const double* wr = w.data() + static_cast<std::size_t>(r) * in;
    for (int c = 0; c < in; ++c) y[c] += wr[c] * x[r];
  }
}

// W += outer(a, b) for a in R^out, b in R^in.
void outer_acc(std::vector<double>& w, int out, int in, const double* a, const double* b) {
  for (int r = 0; r < out; ++r) {
    double* wr = w.data() + static_cast<std::size_t>(r) * in;
    for (int c = 0; c < in; ++c) wr[c] += a[r] * b[c];
  }
}

// Predecessor structure of the arc line graph under the chosen update rule.
struct Topology {
  std::vector<std::vector<int>> preds;  // arcs feeding each arc
  std::vector<double> norm;             // aggregation normalizer per arc
};

Topology build_topology(const Graph& g, const ArcIndex& ai, bool begrudging) {
  const int na = ai.num_arcs();
  Topology topo;
  topo.preds.resize(na);
  topo.norm.assign(na, 1.0);
  for (int a = 0; a < na; ++a) {
    const int j = ai.tail(a);
    const int i = ai.head(a);
    const int dj = g.degree(j);
    if (dj >= 2) {
      topo.norm[a] = static_cast<double>(dj - 1);
      for (int k : g.adj[j])
        if (k != i) topo.preds[a].push_back(ai.arc_of(k, j));
    } else if (begrudging) {
      topo.preds[a].push_back(ai.reverse_of(a));  // the arc i->j
    }
  }
  return topo;
}

void check_shapes(const Graph& g, const NodeFeatures& x, const EdgeFeatures* e,
                  const NbaGcnModel& model) {
  if (x.n != g.n || x.f_in != model.f_in)
    throw ShapeError("node feature matrix does not match graph/model");
  if (model.f_edge > 0) {
    if (e == nullptr || e->m != g.m || e->f_edge != model.f_edge)
      throw ShapeError("edge feature matrix does not match graph/model");
  }
  if (static_cast<int>(model.encoder_w.size()) != model.f * model.encoder_cols() ||
      static_cast<int>(model.encoder_b.size()) != model.f)
    throw ShapeError("encoder shape mismatch");
}

struct Trace {
  std::vector<ArcFeatureMatrix> h;    // h^(0) .. h^(L)
  std::vector<ArcFeatureMatrix> agg;  // normalized aggregate per layer
  std::vector<ArcFeatureMatrix> pre;  // W agg, pre-relu, per layer
  std::vector<double> mean_in;        // n x f
  std::vector<double> mean_out;       // n x f
  std::vector<double> logits;         // n x f_out
};

ArcFeatureMatrix layer_step(const ArcFeatureMatrix& h, const Topology& topo,
                            const std::vector<double>& w, int f, Trace* trace) {
  const int na = h.rows;
  ArcFeatureMatrix agg(na, f), pre(na, f), out(na, f);
  for (int a = 0; a < na; ++a) {
    double* ga = agg.row(a);
    for (int p : topo.preds[a]) {
      const double* hp = h.row(p);
      for (int c = 0; c < f; ++c) ga[c] += hp[c];
    }
    const double inv = 1.0 / topo.norm[a];
    for (int c = 0; c < f; ++c) ga[c] *= inv;
    double* ua = pre.row(a);
    gemv_acc(w, f, f, ga, ua);
    double* oa = out.row(a);
    const double* ha = h.row(a);
    for (int c = 0; c < f; ++c) oa[c] = ha[c] + (ua[c] > 0.0 ? ua[c] : 0.0);
  }
  if (trace != nullptr) {
    trace->agg.push_back(std::move(agg));
    trace->pre.push_back(std::move(pre));
  }
  return out;
}

std::vector<double> readout(const ArcFeatureMatrix& h, const Graph& g, const ArcIndex& ai,
                            const NbaGcnModel& model, Trace* trace) {
  for (int i = 0; i < g.n; ++i)
    if (g.degree(i) == 0)
      throw IsolatedNode("node " + std::to_string(i) + " has no incident arc");
  const int f = model.f;
  std::vector<double> mean_in(static_cast<std::size_t>(g.n) * f, 0.0);
  std::vector<double> mean_out(static_cast<std::size_t>(g.n) * f, 0.0);
  for (int a = 0; a < ai.num_arcs(); ++a) {
    const double* ha = h.row(a);
    double* mo = mean_out.data() + static_cast<std::size_t>(ai.tail(a)) * f;
    double* mi = mean_in.data() + static_cast<std::size_t>(ai.head(a)) * f;
    for (int c = 0; c < f; ++c) {
      mo[c] += ha[c];
      mi[c] += ha[c];
    }
  }
  std::vector<double> out(static_cast<std::size_t>(g.n) * model.f_out);
  for (int i = 0; i < g.n; ++i) {
    const double inv = 1.0 / g.degree(i);
    double* mi = mean_in.data() + static_cast<std::size_t>(i) * f;
    double* mo = mean_out.data() + static_cast<std::size_t>(i) * f;
    for (int c = 0; c < f; ++c) {
      mi[c] *= inv;
      mo[c] *= inv;
    }
    double* oi = out.data() + static_cast<std::size_t>(i) * model.f_out;
    for (int c = 0; c < model.f_out; ++c) oi[c] = model.head_bias[c];
    gemv_acc(model.head_in, model.f_out, f, mi, oi);
    gemv_acc(model.head_out, model.f_out, f, mo, oi);
  }
  if (trace != nullptr) {
    trace->mean_in = std::move(mean_in);
    trace->mean_out = std::move(mean_out);
  }
  return out;
}

std::vector<double> run_forward(const Graph& g, const ArcIndex& ai, const NodeFeatures& x,
                                const EdgeFeatures* e, const NbaGcnModel& model,
                                Trace* trace) {
  check_shapes(g, x, e, model);
  const Topology topo = build_topology(g, ai, model.begrudging);
  ArcFeatureMatrix h = init_messages(g, ai, x, e, model);
  if (trace != nullptr) trace->h.push_back(h);
  for (const auto& w : model.layers) {
    h = layer_step(h, topo, w, model.f, trace);
    if (trace != nullptr) trace->h.push_back(h);
  }
  auto out = readout(h, g, ai, model, trace);
  if (trace != nullptr) trace->logits = out;
  return out;
}

}  // namespace

NbaGcnModel NbaGcnModel::random(int f_in, int f_edge, int f, int f_out, int num_layers,
                                bool begrudging, std::uint64_t seed) {
  NbaGcnModel m;
  m.f_in = f_in;
  m.f_edge = f_edge;
  m.f = f;
  m.f_out = f_out;
  m.begrudging = begrudging;
  const double s = 1.0 / std::sqrt(static_cast<double>(f));
  SplitMix64 rng(seed);
  auto fill = [&](std::vector<double>& v, std::size_t count) {
    v.resize(count);
    for (auto& x : v) x = rng.next_symmetric(s);
  };
  fill(m.encoder_w, static_cast<std::size_t>(f) * m.encoder_cols());
  fill(m.encoder_b, f);
  m.layers.resize(num_layers);
  for (auto& w : m.layers) fill(w, static_cast<std::size_t>(f) * f);
  fill(m.head_in, static_cast<std::size_t>(f_out) * f);
  fill(m.head_out, static_cast<std::size_t>(f_out) * f);
  fill(m.head_bias, f_out);
  return m;
}

std::string NbaGcnModel::to_json(bool pretty) const {
  json j;
  j["F_in"] = f_in;
  j["F_edge"] = f_edge;
  j["F"] = f;
  j["F_out"] = f_out;
  j["begrudging"] = begrudging;
  j["encoder"] = {{"weight", encoder_w}, {"bias", encoder_b}};
  j["layers"] = layers;
  j["head_in"] = head_in;
  j["head_out"] = head_out;
  j["head_bias"] = head_bias;
  return pretty ? j.dump(2) : j.dump();
}

NbaGcnModel NbaGcnModel::from_json(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw MalformedInput("invalid model JSON");
  NbaGcnModel m;
  try {
    m.f_in = j.at("F_in").get<int>();
    m.f_edge = j.value("F_edge", 0);
    m.f = j.at("F").get<int>();
    m.f_out = j.at("F_out").get<int>();
    m.begrudging = j.at("begrudging").get<bool>();
    m.encoder_w = j.at("encoder").at("weight").get<std::vector<double>>();
    m.encoder_b = j.at("encoder").at("bias").get<std::vector<double>>();
    m.layers = j.at("layers").get<std::vector<std::vector<double>>>();
    m.head_in = j.at("head_in").get<std::vector<double>>();
    m.head_out = j.at("head_out").get<std::vector<double>>();
    m.head_bias = j.at("head_bias").get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw MalformedInput(std::string("model JSON: ") + e.what());
  }
  if (static_cast<int>(m.encoder_w.size()) != m.f * m.encoder_cols())
    throw ShapeError("model JSON encoder shape mismatch");
  return m;
}

ModelGrads ModelGrads::zeros_like(const NbaGcnModel& m) {
  ModelGrads gr;
  gr.encoder_w.assign(m.encoder_w.size(), 0.0);
  gr.encoder_b.assign(m.encoder_b.size(), 0.0);
  gr.layers.resize(m.layers.size());
  for (std::size_t l = 0; l < m.layers.size(); ++l) gr.layers[l].assign(m.layers[l].size(), 0.0);
  gr.head_in.assign(m.head_in.size(), 0.0);
  gr.head_out.assign(m.head_out.size(), 0.0);
  gr.head_bias.assign(m.head_bias.size(), 0.0);
  return gr;
}

ArcFeatureMatrix init_messages(const Graph& g, const ArcIndex& ai, const NodeFeatures& x,
                               const EdgeFeatures* e, const NbaGcnModel& model) {
  check_shapes(g, x, e, model);
  const int na = ai.num_arcs();
  ArcFeatureMatrix h(na, model.f);
  std::vector<double> concat(model.encoder_cols());
  for (int a = 0; a < na; ++a) {
    const double* xu = x.row(ai.tail(a));
    const double* xv = x.row(ai.head(a));
    std::copy(xu, xu + model.f_in, concat.begin());
    std::copy(xv, xv + model.f_in, concat.begin() + model.f_in);
    if (model.f_edge > 0) {
      const double* ea = e->row(a / 2);
      std::copy(ea, ea + model.f_edge, concat.begin() + 2 * model.f_in);
    }
    double* ha = h.row(a);
    std::copy(model.encoder_b.begin(), model.encoder_b.end(), ha);
    gemv_acc(model.encoder_w, model.f, model.encoder_cols(), concat.data(), ha);
  }
  return h;
}

ArcFeatureMatrix nba_gcn_layer(const ArcFeatureMatrix& h, const Graph& g,
                               const ArcIndex& ai, const std::vector<double>& w, int f,
                               bool begrudging) {
  if (static_cast<int>(w.size()) != f * f || h.f != f || h.rows != ai.num_arcs())
    throw ShapeError("layer shape mismatch");
  const Topology topo = build_topology(g, ai, begrudging);
  return layer_step(h, topo, w, f, nullptr);
}

std::vector<double> aggregate_nodes(const ArcFeatureMatrix& h, const Graph& g,
                                    const ArcIndex& ai, const NbaGcnModel& model) {
  return readout(h, g, ai, model, nullptr);
}

std::vector<double> forward(const Graph& g, const ArcIndex& ai, const NodeFeatures& x,
                            const EdgeFeatures* e, const NbaGcnModel& model) {
  return run_forward(g, ai, x, e, model, nullptr);
}

DenseMatrix jacobian_fd(const Graph& g, const ArcIndex& ai, const NodeFeatures& x,
                        const NbaGcnModel& model, int source, int target, double eps) {
  if (eps <= 0.0) throw MalformedInput("eps must be positive");
  DenseMatrix jac(model.f_out, model.f_in);
  NodeFeatures xp = x;
  for (int c = 0; c < model.f_in; ++c) {
    const double saved = xp.row(source)[c];
    xp.row(source)[c] = saved + eps;
    auto plus = forward(g, ai, xp, nullptr, model);
    xp.row(source)[c] = saved - eps;
    auto minus = forward(g, ai, xp, nullptr, model);
    xp.row(source)[c] = saved;
    for (int r = 0; r < model.f_out; ++r)
      jac.at(r, c) = (plus[static_cast<std::size_t>(target) * model.f_out + r] -
                      minus[static_cast<std::size_t>(target) * model.f_out + r]) /
                     (2.0 * eps);
  }
  return jac;
}

LossAndGrads loss_and_grads(const NbaGcnModel& model, const Graph& g, const ArcIndex& ai,
                            const NodeFeatures& x, const std::vector<int>& labels,
                            const std::vector<int>& mask) {
  Trace trace;
  run_forward(g, ai, x, nullptr, model, &trace);
  const int f = model.f;
  const int fo = model.f_out;
  const int na = ai.num_arcs();
  const int L = static_cast<int>(model.layers.size());
  const Topology topo = build_topology(g, ai, model.begrudging);

  LossAndGrads out;
  out.grads = ModelGrads::zeros_like(model);
  std::vector<double> dlogits(static_cast<std::size_t>(g.n) * fo, 0.0);
  const double inv_mask = 1.0 / static_cast<double>(mask.size());

  for (int i : mask) {
    const double* zi = trace.logits.data() + static_cast<std::size_t>(i) * fo;
    double zmax = zi[0];
    for (int c = 1; c < fo; ++c) zmax = std::max(zmax, zi[c]);
    double denom = 0.0;
    for (int c = 0; c < fo; ++c) denom += std::exp(zi[c] - zmax);
    out.loss += (std::log(denom) - (zi[labels[i]] - zmax)) * inv_mask;
    double* di = dlogits.data() + static_cast<std::size_t>(i) * fo;
    for (int c = 0; c < fo; ++c)
      di[c] = (std::exp(zi[c] - zmax) / denom - (c == labels[i] ? 1.0 : 0.0)) * inv_mask;
  }

  // Readout backward.
  ArcFeatureMatrix dh(na, f);
  for (int i = 0; i < g.n; ++i) {
    const double* di = dlogits.data() + static_cast<std::size_t>(i) * fo;
    const double* mi = trace.mean_in.data() + static_cast<std::size_t>(i) * f;
    const double* mo = trace.mean_out.data() + static_cast<std::size_t>(i) * f;
    outer_acc(out.grads.head_in, fo, f, di, mi);
    outer_acc(out.grads.head_out, fo, f, di, mo);
    for (int c = 0; c < fo; ++c) out.grads.head_bias[c] += di[c];
  }
  std::vector<double> dmean_in(static_cast<std::size_t>(g.n) * f, 0.0);
  std::vector<double> dmean_out(static_cast<std::size_t>(g.n) * f, 0.0);
  for (int i = 0; i < g.n; ++i) {
    const double* di = dlogits.data() + static_cast<std::size_t>(i) * fo;
    gemv_t_acc(model.head_in, fo, f, di, dmean_in.data() + static_cast<std::size_t>(i) * f);
    gemv_t_acc(model.head_out, fo, f, di, dmean_out.data() + static_cast<std::size_t>(i) * f);
  }
  for (int a = 0; a < na; ++a) {
    const int i = ai.head(a);
    const int u = ai.tail(a);
    double* da = dh.row(a);
    const double* din = dmean_in.data() + static_cast<std::size_t>(i) * f;
    const double* dout = dmean_out.data() + static_cast<std::size_t>(u) * f;
    const double wi = 1.0 / g.degree(i);
    const double wu = 1.0 / g.degree(u);
    for (int c = 0; c < f; ++c) da[c] = din[c] * wi + dout[c] * wu;
  }

  // Layers backward (residual relu blocks).
  for (int l = L - 1; l >= 0; --l) {
    const ArcFeatureMatrix& pre = trace.pre[l];
    const ArcFeatureMatrix& agg = trace.agg[l];
    ArcFeatureMatrix dprev(na, f);
    std::vector<double> du(f);
    for (int a = 0; a < na; ++a) {
      const double* da = dh.row(a);
      double* dp = dprev.row(a);
      for (int c = 0; c < f; ++c) dp[c] += da[c];  // residual branch
      const double* ua = pre.row(a);
      for (int c = 0; c < f; ++c) du[c] = ua[c] > 0.0 ? da[c] : 0.0;
      outer_acc(out.grads.layers[l], f, f, du.data(), agg.row(a));
      std::vector<double> dagg(f, 0.0);
      gemv_t_acc(model.layers[l], f, f, du.data(), dagg.data());
      const double inv = 1.0 / topo.norm[a];
      for (int p : topo.preds[a]) {
        double* dpp = dprev.row(p);
        for (int c = 0; c < f; ++c) dpp[c] += dagg[c] * inv;
      }
    }
    dh = std::move(dprev);
  }

  // Encoder backward.
  std::vector<double> concat(model.encoder_cols());
  for (int a = 0; a < na; ++a) {
    const double* xu = x.row(ai.tail(a));
    const double* xv = x.row(ai.head(a));
    std::copy(xu, xu + model.f_in, concat.begin());
    std::copy(xv, xv + model.f_in, concat.begin() + model.f_in);
    const double* da = dh.row(a);
    outer_acc(out.grads.encoder_w, f, model.encoder_cols(), da, concat.data());
    for (int c = 0; c < f; ++c) out.grads.encoder_b[c] += da[c];
  }
  return out;
}

TrainResult train(NbaGcnModel model, const Graph& g, const ArcIndex& ai,
                  const NodeFeatures& x, const std::vector<int>& labels,
                  const TrainConfig& cfg) {
  if (cfg.learning_rate <= 0.0) throw MalformedInput("learning rate must be positive");
  TrainResult result;
  result.history.reserve(cfg.epochs);
  auto step = [&](std::vector<double>& w, const std::vector<double>& gr) {
    for (std::size_t i = 0; i < w.size(); ++i) w[i] -= cfg.learning_rate * gr[i];
  };
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    LossAndGrads lg = loss_and_grads(model, g, ai, x, labels, cfg.mask);
    if (!std::isfinite(lg.loss))
      throw NonFiniteLoss("loss diverged at epoch " + std::to_string(epoch) + " (lr=" +
                          std::to_string(cfg.learning_rate) + ")");
    result.history.push_back(lg.loss);
    step(model.encoder_w, lg.grads.encoder_w);
    step(model.encoder_b, lg.grads.encoder_b);
    for (std::size_t l = 0; l < model.layers.size(); ++l)
      step(model.layers[l], lg.grads.layers[l]);
    step(model.head_in, lg.grads.head_in);
    step(model.head_out, lg.grads.head_out);
    step(model.head_bias, lg.grads.head_bias);
  }
  result.model = std::move(model);
  return result;
}

std::vector<int> predict_classes(const std::vector<double>& outputs, int n, int f_out) {
  std::vector<int> cls(n, 0);
  for (int i = 0; i < n; ++i) {
    const double* oi = outputs.data() + static_cast<std::size_t>(i) * f_out;
    int best = 0;
    for (int c = 1; c < f_out; ++c)
      if (oi[c] > oi[best]) best = c;
    cls[i] = best;
  }
  return cls;
}

}  // namespace nbx
