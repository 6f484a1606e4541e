#include "nbx/arc_index.hpp"

#include "nbx/errors.hpp"

namespace nbx {

ArcIndex::ArcIndex(const Graph& g) : key_stride_(g.n) {
  arcs_.reserve(2 * static_cast<std::size_t>(g.m));
  for (auto [u, v] : g.edges()) {
    arcs_.emplace_back(u, v);
    arcs_.emplace_back(v, u);
  }
  reverse_.resize(arcs_.size());
  ids_.reserve(arcs_.size());
  for (int id = 0; id < static_cast<int>(arcs_.size()); ++id) {
    reverse_[id] = id ^ 1;  // tail/reverse pairs are adjacent
    ids_[static_cast<long long>(arcs_[id].first) * key_stride_ + arcs_[id].second] = id;
  }
}

int ArcIndex::arc_of(int u, int v) const {
  auto it = ids_.find(static_cast<long long>(u) * key_stride_ + v);
  if (it == ids_.end())
    throw MalformedInput("no arc " + std::to_string(u) + "->" + std::to_string(v));
  return it->second;
}

ArcIndex build_arc_index(const Graph& g) {
  if (g.m == 0) throw EmptyGraph("arc index requires at least one edge");
  return ArcIndex(g);
}

}  // namespace nbx
