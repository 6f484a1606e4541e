#pragma once

#include <cstdint>
#include <vector>

#include "nbx/graph.hpp"

namespace nbx {

enum class WalkKind { Srw, Nbrw, Bbrw };

struct WalkResult {
  enum class Status { Hit, DeadEnd, Truncated };
  Status status;
  std::uint64_t steps = 0;  // hitting step count, valid when status == Hit
};

/// One walk realization. The first step of NBRW/BBRW is uniform over all
/// neighbors (no previous node yet). NBRW dead-ends at a degree-1 node;
/// BBRW backtracks begrudgingly instead.
WalkResult simulate_walk(const Graph& g, WalkKind kind, int start, int target,
                         std::uint64_t max_steps, std::uint64_t seed);

struct AccessTimeEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t truncated = 0;  // walks hitting the cap (dead-ends included)
};

/// Monte Carlo access time t(i, j). Truncated and dead-ended walks are
/// excluded from the mean and reported in `truncated`. Deterministic for a
/// fixed seed regardless of evaluation order (per-sample substreams).
AccessTimeEstimate mc_access_time(const Graph& g, WalkKind kind, int i, int j,
                                  std::uint64_t samples, std::uint64_t max_steps,
                                  std::uint64_t seed);

inline constexpr std::uint64_t kDefaultMaxSteps = 1000000;

/// Unique path between two tree nodes plus per-hop subtree edge counts:
/// subtree_edge_counts[l] is the number of edges in the component of nodes[l]
/// after deleting the edge (nodes[l], nodes[l+1]).
struct TreePath {
  std::vector<int> nodes;
  std::vector<long long> subtree_edge_counts;
};

/// Throws NotATree when g is cyclic or disconnected.
TreePath tree_path(const Graph& g, int i, int j);

/// Exact SRW access time on a tree: sum of (1 + 2|E(G_l)|) along the path.
double tree_access_time_srw(const Graph& g, int i, int j);

/// Exact BBRW access time on a tree.
double tree_access_time_bbrw(const Graph& g, int i, int j);

/// BBRW return time 2|E| / d_i.
double tree_return_time_bbrw(const Graph& g, int i);

/// Closed-form t~(i,j) - t(i,j); always <= 0.
double access_time_gap(const Graph& g, int i, int j);

}  // namespace nbx
