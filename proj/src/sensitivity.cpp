#include "nbx/sensitivity.hpp"

#include <cmath>

#include "nbx/arc_index.hpp"
#include "nbx/errors.hpp"
#include "nbx/matrices.hpp"

namespace nbx {

double LipschitzParams::prefactor(int T) const {
  return std::pow(alpha * beta, T) * gamma;
}

namespace {

void extend_path(const Graph& g, const std::vector<int>& dist_to_j, int j, int T,
                 std::vector<int>& path, std::vector<std::vector<int>>& out) {
  const int t = static_cast<int>(path.size()) - 1;
  if (t == T) {
    if (path.back() == j) out.push_back(path);
    return;
  }
  const int cur = path.back();
  const int prev = t >= 1 ? path[t - 1] : -1;
  for (int next : g.adj[cur]) {
    if (next == prev) continue;  // no immediate backtrack
    if (dist_to_j[next] == kUnreachable || dist_to_j[next] > T - (t + 1)) continue;
    path.push_back(next);
    extend_path(g, dist_to_j, j, T, path, out);
    path.pop_back();
  }
}

}  // namespace

std::vector<std::vector<int>> enumerate_nb_paths(const Graph& g, int i, int j, int T) {
  std::vector<std::vector<int>> out;
  auto dist_to_j = bfs_distances(g, j);
  std::vector<int> path{i};
  extend_path(g, dist_to_j, j, T, path, out);
  return out;
}

double nba_bound_pathsum(const Graph& g, int i, int j, int T) {
  double total = 0.0;
  for (const auto& path : enumerate_nb_paths(g, i, j, T)) {
    double w = 1.0 / std::sqrt(static_cast<double>(g.degree(path.front())) *
                               static_cast<double>(g.degree(path.back())));
    for (int t = 1; t < T; ++t) w /= static_cast<double>(g.degree(path[t]));
    total += w;
  }
  return total;
}

DenseMatrix nba_bound_matrix(const Graph& g, int T) {
  if (T < 1) throw MalformedInput("T must be >= 1");
  DenseMatrix result(g.n, g.n);
  if (g.m == 0) return result;
  const ArcIndex ai = build_arc_index(g);
  const int na = ai.num_arcs();
  const SparseRealMatrix B = nb_matrix(g, ai);
  const SparseRealMatrix Bhat = normalized_nb(B, nb_degree(B));

  // Calibrated incidence factors. A T-step path s_0..s_T contributes the
  // chain product B-hat_{a_1 a_2} ... B-hat_{a_{T-1} a_T}
  // = d_{s_1}^{-1/2} d_{s_T}^{-1/2} prod_{t=2}^{T-1} d_{s_t}^{-1}, so the
  // start factor carries (d_tail d_head)^{-1/2} on the outgoing arc and the
  // end factor selects the incoming arc with weight 1, reproducing
  // d_{s_0}^{-1/2} d_{s_T}^{-1/2} prod_{t=1}^{T-1} d_{s_t}^{-1} per path.
  std::vector<Triplet> start_t, end_t;
  start_t.reserve(na);
  end_t.reserve(na);
  for (int a = 0; a < na; ++a) {
    const double du = static_cast<double>(g.degree(ai.tail(a)));
    const double dv = static_cast<double>(g.degree(ai.head(a)));
    start_t.push_back({a, ai.tail(a), 1.0 / std::sqrt(du * dv)});
    end_t.push_back({a, ai.head(a), 1.0});
  }
  const auto start = SparseRealMatrix::from_triplets(na, g.n, std::move(start_t));
  const auto end = SparseRealMatrix::from_triplets(na, g.n, std::move(end_t));

  std::vector<double> y = end.to_dense().data;  // 2m x n
  for (int t = 1; t < T; ++t) y = Bhat.apply_block(y, g.n);
  result.data = start.transpose().apply_block(y, g.n);
  return result;
}

DenseMatrix gnn_bound_matrix(const Graph& g, int T) {
  if (T < 1) throw MalformedInput("T must be >= 1");
  const SparseRealMatrix Ahat = normalized_adj(g);
  DenseMatrix result(g.n, g.n);
  std::vector<double> y = SparseRealMatrix::identity(g.n).to_dense().data;
  for (int t = 0; t < T; ++t) y = Ahat.apply_block(y, g.n);
  result.data = std::move(y);
  return result;
}

double gnn_bound(const Graph& g, int i, int j, int T) {
  if (T < 1) throw MalformedInput("T must be >= 1");
  const SparseRealMatrix Ahat = normalized_adj(g);
  std::vector<double> y(g.n, 0.0);
  y[i] = 1.0;
  for (int t = 0; t < T; ++t) y = Ahat.apply(y);
  return y[j];
}

namespace {

// Number of length-T walks from i to j; at distance exactly T these are
// exactly the simple shortest paths.
long long walk_count(const Graph& g, int i, int j, int T) {
  std::vector<long long> y(g.n, 0);
  y[i] = 1;
  for (int t = 0; t < T; ++t) {
    std::vector<long long> next(g.n, 0);
    for (int u = 0; u < g.n; ++u)
      if (y[u] != 0)
        for (int v : g.adj[u]) next[v] += y[u];
    y = std::move(next);
  }
  return y[j];
}

}  // namespace

std::vector<BoundReport> compare_bounds(const Graph& g, int T) {
  if (T < 1) throw MalformedInput("T must be >= 1");
  const DenseMatrix nba = nba_bound_matrix(g, T);
  const DenseMatrix gnn = gnn_bound_matrix(g, T);
  std::vector<BoundReport> reports;
  for (int i = 0; i < g.n; ++i) {
    const auto dist = bfs_distances(g, i);
    for (int j = i + 1; j < g.n; ++j) {
      if (dist[j] != T) continue;
      BoundReport r;
      r.i = i;
      r.j = j;
      r.distance = T;
      r.nba_bound = nba.at(j, i);
      r.gnn_bound = gnn.at(j, i);
      r.path_count_nb = static_cast<long long>(enumerate_nb_paths(g, i, j, T).size());
      r.path_count_simple = walk_count(g, i, j, T);
      if (r.nba_bound < r.gnn_bound)
        throw MalformedInput("sensitivity inequality violated at pair (" +
                             std::to_string(i) + ", " + std::to_string(j) + ")");
      reports.push_back(r);
    }
  }
  if (reports.empty())
    throw NoPairsAtDistance("no node pair at distance " + std::to_string(T));
  return reports;
}

bool perpath_inequality_check(const Graph& g, int i, int j, int T) {
  for (const auto& path : enumerate_nb_paths(g, i, j, T)) {
    double lhs = 1.0 / std::sqrt((g.degree(path.front()) + 1.0) *
                                 (g.degree(path.back()) + 1.0));
    double rhs = 1.0 / std::sqrt(static_cast<double>(g.degree(path.front())) *
                                 static_cast<double>(g.degree(path.back())));
    for (int t = 1; t < T; ++t) {
      lhs /= g.degree(path[t]) + 1.0;
      rhs /= static_cast<double>(g.degree(path[t]));
    }
    if (lhs > rhs) return false;
  }
  return true;
}

}  // namespace nbx
