#include "nbx/walks.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "nbx/errors.hpp"
#include "nbx/rng.hpp"

namespace nbx {

namespace {

// Uniform neighbor of cur excluding prev (prev must be a neighbor).
int pick_avoiding(const std::vector<int>& nb, int prev, SplitMix64& rng) {
  const int d = static_cast<int>(nb.size());
  const int p = static_cast<int>(std::lower_bound(nb.begin(), nb.end(), prev) - nb.begin());
  int r = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(d - 1)));
  if (r >= p) ++r;
  return nb[r];
}

void check_tree(const Graph& g) {
  if (!is_tree(g)) throw NotATree("graph is not a connected acyclic graph");
}

}  // namespace

WalkResult simulate_walk(const Graph& g, WalkKind kind, int start, int target,
                         std::uint64_t max_steps, std::uint64_t seed) {
  SplitMix64 rng(seed);
  int cur = start;
  int prev = -1;
  if (cur == target) return {WalkResult::Status::Hit, 0};
  for (std::uint64_t step = 1; step <= max_steps; ++step) {
    const auto& nb = g.adj[cur];
    const int d = static_cast<int>(nb.size());
    int next;
    if (kind == WalkKind::Srw || prev < 0) {
      next = nb[rng.next_below(static_cast<std::uint64_t>(d))];
    } else if (d == 1) {
      if (kind == WalkKind::Nbrw) return {WalkResult::Status::DeadEnd, step - 1};
      next = prev;  // begrudging
    } else {
      next = pick_avoiding(nb, prev, rng);
    }
    prev = cur;
    cur = next;
    if (cur == target) return {WalkResult::Status::Hit, step};
  }
  return {WalkResult::Status::Truncated, max_steps};
}

AccessTimeEstimate mc_access_time(const Graph& g, WalkKind kind, int i, int j,
                                  std::uint64_t samples, std::uint64_t max_steps,
                                  std::uint64_t seed) {
  double sum = 0.0;
  double sumsq = 0.0;
  std::uint64_t hits = 0;
  std::uint64_t lost = 0;
  for (std::uint64_t s = 0; s < samples; ++s) {
    WalkResult r = simulate_walk(g, kind, i, j, max_steps, substream(seed, s));
    if (r.status == WalkResult::Status::Hit) {
      const double t = static_cast<double>(r.steps);
      sum += t;
      sumsq += t * t;
      ++hits;
    } else {
      ++lost;
    }
  }
  if (hits == 0) throw AllTruncated("all " + std::to_string(samples) + " walks truncated");
  AccessTimeEstimate est;
  est.samples = samples;
  est.truncated = lost;
  est.mean = sum / static_cast<double>(hits);
  if (hits > 1) {
    const double var =
        std::max(0.0, (sumsq - sum * sum / static_cast<double>(hits)) /
                          static_cast<double>(hits - 1));
    est.stderr_ = std::sqrt(var / static_cast<double>(hits));
  }
  return est;
}

TreePath tree_path(const Graph& g, int i, int j) {
  check_tree(g);
  if (i == j) throw MalformedInput("tree path requires distinct endpoints");
  // Parent pointers from a BFS rooted at i.
  std::vector<int> parent(g.n, -2);
  std::deque<int> queue{i};
  parent[i] = -1;
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    for (int v : g.adj[u])
      if (parent[v] == -2) {
        parent[v] = u;
        queue.push_back(v);
      }
  }
  TreePath tp;
  for (int v = j; v != -1; v = parent[v]) tp.nodes.push_back(v);
  std::reverse(tp.nodes.begin(), tp.nodes.end());

  // |E(G_l)| = (#nodes on v_l's side of the deleted edge) - 1.
  const int hops = static_cast<int>(tp.nodes.size()) - 1;
  tp.subtree_edge_counts.resize(hops);
  for (int l = 0; l < hops; ++l) {
    const int a = tp.nodes[l];
    const int b = tp.nodes[l + 1];
    long long count = 0;
    std::vector<char> seen(g.n, 0);
    std::deque<int> q{a};
    seen[a] = 1;
    while (!q.empty()) {
      int u = q.front();
      q.pop_front();
      ++count;
      for (int v : g.adj[u]) {
        if (u == a && v == b) continue;
        if (!seen[v]) {
          seen[v] = 1;
          q.push_back(v);
        }
      }
    }
    tp.subtree_edge_counts[l] = count - 1;
  }
  return tp;
}

double tree_access_time_srw(const Graph& g, int i, int j) {
  TreePath tp = tree_path(g, i, j);
  double total = 0.0;
  for (long long e : tp.subtree_edge_counts) total += 1.0 + 2.0 * static_cast<double>(e);
  return total;
}

double tree_access_time_bbrw(const Graph& g, int i, int j) {
  TreePath tp = tree_path(g, i, j);
  const int hops = static_cast<int>(tp.subtree_edge_counts.size());
  double total = 0.0;
  for (int l = 0; l < hops; ++l) {
    const double d = static_cast<double>(g.degree(tp.nodes[l]));
    const double e = static_cast<double>(tp.subtree_edge_counts[l]);
    total += 1.0 + 2.0 * e * (d - 1.0) / d;
  }
  for (int l = 1; l < hops; ++l) {
    const double d = static_cast<double>(g.degree(tp.nodes[l]));
    total -= 2.0 * static_cast<double>(tp.subtree_edge_counts[l - 1]) / d;
    total -= 2.0 / d;
  }
  return total;
}

double tree_return_time_bbrw(const Graph& g, int i) {
  check_tree(g);
  if (g.degree(i) < 1) throw IsolatedNode("return time undefined for isolated node");
  return 2.0 * static_cast<double>(g.m) / static_cast<double>(g.degree(i));
}

double access_time_gap(const Graph& g, int i, int j) {
  TreePath tp = tree_path(g, i, j);
  const int hops = static_cast<int>(tp.subtree_edge_counts.size());
  double gap = 0.0;
  for (int l = 0; l < hops; ++l)
    gap -= 2.0 * static_cast<double>(tp.subtree_edge_counts[l]) /
           static_cast<double>(g.degree(tp.nodes[l]));
  for (int l = 1; l < hops; ++l) {
    const double d = static_cast<double>(g.degree(tp.nodes[l]));
    gap -= 2.0 * static_cast<double>(tp.subtree_edge_counts[l - 1]) / d;
    gap -= 2.0 / d;
  }
  return gap;
}

}  // namespace nbx
