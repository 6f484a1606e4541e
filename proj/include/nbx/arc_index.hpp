#pragma once

#include <unordered_map>
#include <utility>
#include <vector>

#include "nbx/graph.hpp"

namespace nbx {

/// Dense indexing of the 2m directed arcs of an undirected graph. Ids are
/// assigned in sorted edge order, tail arc (u->v, u < v) before its reverse,
/// so reports are reproducible.
class ArcIndex {
 public:
  explicit ArcIndex(const Graph& g);

  int num_arcs() const { return static_cast<int>(arcs_.size()); }
  std::pair<int, int> arc(int id) const { return arcs_[id]; }
  int tail(int id) const { return arcs_[id].first; }
  int head(int id) const { return arcs_[id].second; }
  int reverse_of(int id) const { return reverse_[id]; }

  /// Arc id of u->v; the arc must exist.
  int arc_of(int u, int v) const;

 private:
  std::vector<std::pair<int, int>> arcs_;
  std::vector<int> reverse_;
  std::unordered_map<long long, int> ids_;
  long long key_stride_;
};

/// Throws EmptyGraph when m = 0 (there is nothing to index).
ArcIndex build_arc_index(const Graph& g);

}  // namespace nbx
