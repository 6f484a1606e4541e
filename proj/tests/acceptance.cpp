#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

// Acceptance gate: ten end-to-end checks, one printed pass/fail line each.
// Every check recomputes its quantities from scratch against independent
// oracles (closed forms, Monte Carlo, dense linear algebra, enumeration).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#include "helpers.hpp"
#include "nbx/arc_index.hpp"
#include "nbx/errors.hpp"
#include "nbx/graph.hpp"
#include "nbx/matrices.hpp"
#include "nbx/nbagnn.hpp"
#include "nbx/rng.hpp"
#include "nbx/sensitivity.hpp"
#include "nbx/spectral.hpp"
#include "nbx/walks.hpp"

using namespace nbx;
using namespace testutil;

namespace {

bool report(int k, const char* desc, bool ok) {
  std::printf("criterion %2d | %-58s | %s\n", k, desc, ok ? "PASS" : "FAIL");
  std::fflush(stdout);
  return ok;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

/// Pointers to every trainable parameter, in a fixed order.
std::vector<double*> param_refs(NbaGcnModel& m) {
  std::vector<double*> refs;
  auto add = [&](std::vector<double>& v) {
    for (double& x : v) refs.push_back(&x);
  };
  add(m.encoder_w);
  add(m.encoder_b);
  for (auto& w : m.layers) add(w);
  add(m.head_in);
  add(m.head_out);
  add(m.head_bias);
  return refs;
}

std::vector<double> flat_grads(const ModelGrads& g) {
  std::vector<double> out;
  auto add = [&](const std::vector<double>& v) {
    out.insert(out.end(), v.begin(), v.end());
  };
  add(g.encoder_w);
  add(g.encoder_b);
  for (const auto& w : g.layers) add(w);
  add(g.head_in);
  add(g.head_out);
  add(g.head_bias);
  return out;
}

int min_degree(const Graph& g) {
  int md = g.n == 0 ? 0 : g.degree(0);
  for (int v = 0; v < g.n; ++v) md = std::min(md, g.degree(v));
  return md;
}

}  // namespace

TEST_CASE("1: begrudging access times never exceed simple-walk times") {
  const auto t0 = std::chrono::steady_clock::now();
  long long violations = 0, pairs = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const int n = 2 + static_cast<int>(seed % 39);  // 2..40
    const Graph g = random_tree(n, seed);
    for (int i = 0; i < g.n; ++i)
      for (int j = 0; j < g.n; ++j) {
        if (i == j) continue;
        ++pairs;
        if (tree_access_time_bbrw(g, i, j) > tree_access_time_srw(g, i, j) + 1e-9)
          ++violations;
      }
  }
  const double elapsed = seconds_since(t0);
  CHECK(report(1, "access-time ordering on 200 random trees",
               violations == 0 && pairs > 0 && elapsed < 30.0));
}

TEST_CASE("2: closed forms agree with Monte Carlo on random trees") {
  const auto t0 = std::chrono::steady_clock::now();
  int cells = 0, within = 0;
  for (std::uint64_t ts = 0; ts < 20; ++ts) {
    const int n = 4 + static_cast<int>(ts % 7);  // 4..10: short walks, tight stderr
    const Graph g = random_tree(n, ts + 500);
    SplitMix64 pair_rng(ts + 900);
    for (int p = 0; p < 50; ++p) {
      const int i = static_cast<int>(pair_rng.next_below(g.n));
      int j = static_cast<int>(pair_rng.next_below(g.n - 1));
      if (j >= i) ++j;
      for (WalkKind kind : {WalkKind::Srw, WalkKind::Bbrw}) {
        const double exact = kind == WalkKind::Srw ? tree_access_time_srw(g, i, j)
                                                   : tree_access_time_bbrw(g, i, j);
        const auto est =
            mc_access_time(g, kind, i, j, 100000, 10000000, ts * 1000 + p * 2 +
                                                                (kind == WalkKind::Srw));
        ++cells;
        if (std::abs(est.mean - exact) <= std::max(3.0 * est.stderr_, 1e-12)) ++within;
      }
    }
  }
  const double elapsed = seconds_since(t0);
  const double frac = static_cast<double>(within) / cells;
  std::printf("             |   (%d/%d cells within 3 sigma, %.0f s)\n", within, cells,
              elapsed);
  CHECK(report(2, "Monte Carlo matches tree closed forms", frac >= 0.99 && elapsed < 300.0));
}

TEST_CASE("3: the non-backtracking bound dominates the conventional one") {
  bool ordered = true;
  for (std::uint64_t seed = 0; seed < 100 && ordered; ++seed) {
    const int n = 5 + static_cast<int>(seed % 36);  // 5..40
    const Graph g = random_connected_graph(n, static_cast<int>(seed % 20), seed + 40);
    for (int T = 1; T <= 4; ++T) {
      const DenseMatrix nba = nba_bound_matrix(g, T);
      const DenseMatrix gnn = gnn_bound_matrix(g, T);
      for (int i = 0; i < g.n; ++i) {
        const auto dist = bfs_distances(g, i);
        for (int j = 0; j < g.n; ++j)
          if (dist[j] == T && nba.at(j, i) < gnn.at(j, i) - 1e-12) ordered = false;
      }
    }
  }

  // On 3-regular graphs a pair at distance T with a unique non-backtracking
  // route and a unique shortest path has exactly 3^-T vs 4^-T.
  bool exact = true;
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Graph g = random_regular(20, 3, seed + 5);
    if (!is_connected(g)) continue;
    for (int T = 1; T <= 4; ++T) {
      std::vector<BoundReport> reports;
      try {
        reports = compare_bounds(g, T);
      } catch (const NoPairsAtDistance&) {
        continue;
      }
      for (const auto& r : reports) {
        if (r.path_count_nb != 1 || r.path_count_simple != 1) continue;
        ++checked;
        if (std::abs(r.nba_bound - std::pow(3.0, -T)) > 1e-12) exact = false;
        if (std::abs(r.gnn_bound - std::pow(4.0, -T)) > 1e-12) exact = false;
      }
    }
  }
  CHECK(report(3, "sensitivity bound ordering and 3-regular closed forms",
               ordered && exact && checked >= 20));
}

TEST_CASE("4: matrix bound agrees with path enumeration") {
  bool agree = true;
  for (std::uint64_t seed = 0; seed < 100 && agree; ++seed) {
    const int n = 5 + static_cast<int>(seed % 36);
    const Graph g = random_connected_graph(n, static_cast<int>(seed % 20), seed + 40);
    for (int T = 1; T <= 4; ++T) {
      const DenseMatrix m = nba_bound_matrix(g, T);
      for (int i = 0; i < g.n; ++i) {
        const auto dist = bfs_distances(g, i);
        for (int j = 0; j < g.n; ++j)
          if (dist[j] == T &&
              std::abs(m.at(j, i) - nba_bound_pathsum(g, i, j, T)) > 1e-9)
            agree = false;
      }
    }
  }
  CHECK(report(4, "matrix form vs enumeration oracle at 1e-9", agree));
}

TEST_CASE("5: message-passing Jacobians respect the operator support") {
  bool contained = true;
  for (std::uint64_t seed = 0; seed < 20 && contained; ++seed) {
    const int n = 5 + static_cast<int>(seed % 5);
    const Graph g = random_connected_graph(n, static_cast<int>(seed % 4), seed + 300);
    const ArcIndex ai = build_arc_index(g);
    const auto inc = incidence(g, ai);
    const Eigen::MatrixXd ct = to_eigen(inc.C_tilde);
    const Eigen::MatrixXd b =
        to_eigen(nb_matrix(g, ai)) + Eigen::MatrixXd::Identity(2 * g.m, 2 * g.m);
    NodeFeatures x(g.n, 1);
    SplitMix64 frng(seed + 17);
    for (int v = 0; v < g.n; ++v) x.row(v)[0] = 2.0 * frng.next_double() - 1.0;
    for (int L = 0; L <= 2; ++L) {
      Eigen::MatrixXd power = Eigen::MatrixXd::Identity(2 * g.m, 2 * g.m);
      for (int l = 0; l < L; ++l) power = b * power;
      const Eigen::MatrixXd mask = ct.transpose() * power * ct;
      const NbaGcnModel model =
          NbaGcnModel::random(1, 0, 4, 2, L, false, seed * 10 + L);
      for (int s = 0; s < g.n; ++s)
        for (int t = 0; t < g.n; ++t) {
          const DenseMatrix jac = jacobian_fd(g, ai, x, model, s, t, 1e-6);
          double mag = 0.0;
          for (int r = 0; r < 2; ++r) mag = std::max(mag, std::abs(jac.at(r, 0)));
          if (mag > 1e-8 && mask(t, s) == 0.0) contained = false;
        }
    }
  }

  // Without begrudging, an arc whose tail is a leaf must pass through a layer
  // bit for bit: no leak from its reverse arc.
  const Graph p3 = path_graph(3);
  const ArcIndex ai = build_arc_index(p3);
  ArcFeatureMatrix h(ai.num_arcs(), 3);
  SplitMix64 hrng(7);
  for (double& v : h.values) v = 2.0 * hrng.next_double() - 1.0;
  std::vector<double> w(9);
  for (double& v : w) v = 2.0 * hrng.next_double() - 1.0;
  const ArcFeatureMatrix off = nba_gcn_layer(h, p3, ai, w, 3, false);
  const ArcFeatureMatrix on = nba_gcn_layer(h, p3, ai, w, 3, true);
  bool leaf_exact = true, begrudging_active = false;
  for (int a = 0; a < ai.num_arcs(); ++a) {
    if (p3.degree(ai.tail(a)) != 1) continue;
    for (int k = 0; k < 3; ++k) {
      if (off.row(a)[k] != h.row(a)[k]) leaf_exact = false;
      if (on.row(a)[k] != h.row(a)[k]) begrudging_active = true;
    }
  }
  CHECK(report(5, "Jacobian support containment and exact leaf pass-through",
               contained && leaf_exact && begrudging_active));
}

TEST_CASE("6: analytic gradients match central differences") {
  bool ok = true;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const int n = 6 + static_cast<int>(seed % 4);
    const Graph g = random_connected_graph(n, 3, seed + 620);
    const ArcIndex ai = build_arc_index(g);
    NodeFeatures x(g.n, 2);
    SplitMix64 rng(seed + 33);
    for (double& v : x.values) v = 2.0 * rng.next_double() - 1.0;
    std::vector<int> labels(g.n), mask;
    for (int v = 0; v < g.n; ++v) {
      labels[v] = static_cast<int>(rng.next_below(3));
      if (v % 2 == 0) mask.push_back(v);
    }
    NbaGcnModel model = NbaGcnModel::random(2, 0, 5, 3, 2, seed % 2 == 1, seed + 71);
    const auto analytic = flat_grads(loss_and_grads(model, g, ai, x, labels, mask).grads);
    const auto refs = param_refs(model);
    REQUIRE(analytic.size() == refs.size());
    const double eps = 1e-5;
    double num = 0.0, den = 0.0;
    for (std::size_t p = 0; p < refs.size(); ++p) {
      const double saved = *refs[p];
      *refs[p] = saved + eps;
      const double up = loss_and_grads(model, g, ai, x, labels, mask).loss;
      *refs[p] = saved - eps;
      const double dn = loss_and_grads(model, g, ai, x, labels, mask).loss;
      *refs[p] = saved;
      const double fd = (up - dn) / (2.0 * eps);
      num += (analytic[p] - fd) * (analytic[p] - fd);
      den += fd * fd;
    }
    if (std::sqrt(num) > 1e-5 * std::max(std::sqrt(den), 1.0)) ok = false;
  }
  CHECK(report(6, "reverse-mode gradients vs finite differences at 1e-5", ok));
}

TEST_CASE("7: leading spectrum of planted and unstructured graphs") {
  bool ok = true;
  double worst_elapsed = 0.0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto s = sample_sbm(SbmParams::two_community(3000, 16.0, 4.0), seed + 700);
    const auto t0 = std::chrono::steady_clock::now();
    const SparseRealMatrix b = nb_matrix(s.graph, build_arc_index(s.graph));
    const Spectrum spec = orthogonal_iteration(b, 2, kDefaultSpectralIters,
                                               kDefaultSpectralTol, seed);
    worst_elapsed = std::max(worst_elapsed, seconds_since(t0));
    if (std::abs(spec.eigenvalues[0] - 10.0) > 1.5) ok = false;
    if (std::abs(spec.eigenvalues[1] - 6.0) > 0.9) ok = false;
  }
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Graph g = sample_er(3000, 10.0, seed + 750);
    const auto t0 = std::chrono::steady_clock::now();
    const SparseRealMatrix b = nb_matrix(g, build_arc_index(g));
    const Spectrum spec = orthogonal_iteration(b, 2, kDefaultSpectralIters,
                                               kDefaultSpectralTol, seed);
    worst_elapsed = std::max(worst_elapsed, seconds_since(t0));
    if (std::abs(spec.eigenvalues[0] - 10.0) > 1.5) ok = false;
    if (spec.magnitudes[1] > 1.25 * std::sqrt(10.0)) ok = false;
  }
  std::printf("             |   (worst per-graph spectral time %.1f s)\n", worst_elapsed);
  CHECK(report(7, "planted eigenvalues 10 and 6; bulk below 1.25 sqrt(10)",
               ok && worst_elapsed < 120.0));
}

TEST_CASE("8: paired model discrimination") {
  int correct = 0;
  const int trials = 20;
  for (std::uint64_t t = 0; t < trials; ++t) {
    const auto s = sample_sbm(SbmParams::two_community(3000, 16.0, 4.0), t + 800);
    if (classify_model(s.graph, 0.1, t).decision == ModelKind::Sbm) ++correct;
    const Graph g = sample_er(3000, 10.0, t + 850);
    if (classify_model(g, 0.1, t + 50).decision == ModelKind::Er) ++correct;
  }
  std::printf("             |   (%d/%d decisions correct)\n", correct, 2 * trials);
  CHECK(report(8, "block model vs random graph at delta 0.1",
               correct >= static_cast<int>(std::ceil(0.95 * 2 * trials))));
}

TEST_CASE("9: community recovery, spectral and trained") {
  int good = 0, used = 0;
  for (std::uint64_t seed = 0; used < 10 && seed < 40; ++seed) {
    const auto s = sample_sbm(SbmParams::two_community(2000, 15.0, 5.0), seed + 900);
    if (min_degree(s.graph) == 0) continue;  // the head average needs every node
    ++used;
    const ArcIndex ai = build_arc_index(s.graph);
    const SparseRealMatrix b = nb_matrix(s.graph, ai);
    const Spectrum spec = orthogonal_iteration(b, 2, kDefaultSpectralIters,
                                               kDefaultSpectralTol, seed);
    const Labeling rec = recover_communities(s.graph, ai, spec.eigenvectors[1]);
    if (alignment(rec, s.truth) >= 0.75) ++good;
  }
  std::printf("             |   (spectral alignment >= 0.75 in %d/%d runs)\n", good, used);

  // Small trained classifier: communities of unequal size and density, so the
  // degree feature carries signal; mean degree sits near ln n.
  double test_acc = 0.0;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    SbmParams p;
    p.n = 400;
    p.k = 2;
    p.alpha = {0.7, 0.3};
    p.p = {{11.0 / 400.0, 1.0 / 400.0}, {1.0 / 400.0, 11.0 / 400.0}};
    const auto s = sample_sbm(p, substream(seed, 0));
    if (min_degree(s.graph) == 0) continue;
    const ArcIndex ai = build_arc_index(s.graph);
    NodeFeatures x(s.graph.n, 1);
    double mean = 0.0;
    for (int v = 0; v < s.graph.n; ++v) mean += s.graph.degree(v);
    mean /= s.graph.n;
    for (int v = 0; v < s.graph.n; ++v) x.row(v)[0] = s.graph.degree(v) / mean;
    std::vector<char> in_train(s.graph.n, 0);
    std::vector<int> mask;
    SplitMix64 mrng(substream(seed, 2));
    for (int v = 0; v < s.graph.n; ++v)
      if (mrng.next_double() < 0.1) {
        in_train[v] = 1;
        mask.push_back(v);
      }
    NbaGcnModel model = NbaGcnModel::random(1, 0, 8, 2, 2, false, substream(seed, 3));
    TrainConfig cfg;
    cfg.learning_rate = 0.1;
    cfg.epochs = 300;
    cfg.mask = mask;
    const TrainResult tr = train(std::move(model), s.graph, ai, x, s.truth.labels, cfg);
    const auto outputs = forward(s.graph, ai, x, nullptr, tr.model);
    const auto pred = predict_classes(outputs, s.graph.n, 2);
    int tot = 0, cor = 0;
    for (int v = 0; v < s.graph.n; ++v) {
      if (in_train[v]) continue;
      ++tot;
      if (pred[v] == s.truth.labels[v]) ++cor;
    }
    test_acc = static_cast<double>(cor) / tot;
    break;
  }
  std::printf("             |   (trained masked-test accuracy %.3f)\n", test_acc);
  CHECK(report(9, "spectral alignment 9/10 and trained accuracy 0.75",
               used == 10 && good >= 9 && test_acc >= 0.75));
}

TEST_CASE("10: operator size identities are exact") {
  bool ok = true;
  std::vector<Graph> corpus;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    corpus.push_back(random_tree(3 + static_cast<int>(seed) * 3, seed));
    corpus.push_back(random_connected_graph(10 + static_cast<int>(seed), 8, seed));
  }
  corpus.push_back(random_regular(20, 3, 2));
  corpus.push_back(complete_graph(6));
  corpus.push_back(sample_sbm(SbmParams::two_community(300, 12.0, 3.0), 1).graph);
  for (const Graph& g : corpus) {
    const ArcIndex ai = build_arc_index(g);
    if (ai.num_arcs() != 2 * g.m) ok = false;
    long long expected = 0;
    for (int v = 0; v < g.n; ++v)
      expected += static_cast<long long>(g.degree(v)) * (g.degree(v) - 1);
    if (nb_transition_count(g) != expected) ok = false;
    const SparseRealMatrix b = nb_matrix(g, ai);
    if (b.row_ptr()[b.rows()] != expected) ok = false;
  }
  CHECK(report(10, "arc count 2m and operator nonzeros sum d(d-1)", ok));
}
