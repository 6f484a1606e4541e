#pragma once

#include <vector>

#include "nbx/graph.hpp"
#include "nbx/sparse.hpp"

namespace nbx {

struct LipschitzParams {
  double alpha = 1.0;
  double beta = 1.0;
  double gamma = 1.0;

  double prefactor(int T) const;  // (alpha * beta)^T * gamma
};

struct BoundReport {
  int i = 0;
  int j = 0;
  int distance = 0;
  double nba_bound = 0.0;
  double gnn_bound = 0.0;
  long long path_count_nb = 0;
  long long path_count_simple = 0;
};

/// All non-backtracking walks s_0 = i, ..., s_T = j: consecutive nodes
/// adjacent, s_{t+2} != s_t.
std::vector<std::vector<int>> enumerate_nb_paths(const Graph& g, int i, int j, int T);

/// Per-path degree weight d_{s_0}^{-1/2} d_{s_T}^{-1/2} prod d_{s_t}^{-1}
/// summed over enumerate_nb_paths. Ground truth for the matrix form.
double nba_bound_pathsum(const Graph& g, int i, int j, int T);

/// Dense n x n table of the non-backtracking sensitivity bound via
/// B-hat^{T-1} sandwiched between degree-normalized incidence factors.
/// Entry (j, i) at distance-exactly-T pairs equals nba_bound_pathsum(i, j, T).
DenseMatrix nba_bound_matrix(const Graph& g, int T);

/// (A-hat^T)_{j,i}, the conventional GNN sensitivity bound.
double gnn_bound(const Graph& g, int i, int j, int T);
DenseMatrix gnn_bound_matrix(const Graph& g, int T);

/// One report per unordered pair at BFS distance exactly T, sorted by (i, j).
/// Throws NoPairsAtDistance when the graph has no such pair.
std::vector<BoundReport> compare_bounds(const Graph& g, int T);

/// Checks (d_i+1)^{-1/2} (d_j+1)^{-1/2} prod (d_{s_t}+1)^{-1} <=
/// d_i^{-1/2} d_j^{-1/2} prod d_{s_t}^{-1} for every enumerated path.
bool perpath_inequality_check(const Graph& g, int i, int j, int T);

}  // namespace nbx
