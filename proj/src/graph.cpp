#include "nbx/graph.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <fstream>
#include <sstream>

#include "nbx/errors.hpp"

namespace nbx {

bool Graph::has_edge(int u, int v) const {
  const auto& nb = adj[u];
  return std::binary_search(nb.begin(), nb.end(), v);
}

std::vector<std::pair<int, int>> Graph::edges() const {
  std::vector<std::pair<int, int>> out;
  out.reserve(static_cast<std::size_t>(m));
  for (int u = 0; u < n; ++u)
    for (int v : adj[u])
      if (v > u) out.emplace_back(u, v);
  return out;
}

Graph graph_from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
  Graph g;
  g.n = n;
  g.m = static_cast<long long>(edges.size());
  g.adj.resize(n);
  for (auto [u, v] : edges) {
    g.adj[u].push_back(v);
    g.adj[v].push_back(u);
  }
  for (auto& nb : g.adj) std::sort(nb.begin(), nb.end());
  return g;
}

Graph from_edge_list(std::istream& in) {
  std::vector<std::pair<int, int>> edges;
  int max_id = -1;
  std::string line;
  long long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    long long u, v;
    std::string extra;
    if (!(ls >> u >> v) || (ls >> extra) || u < 0 || v < 0)
      throw MalformedInput("line " + std::to_string(lineno) +
                           ": expected two non-negative integers, got \"" + line + "\"");
    if (u == v)
      throw MalformedInput("line " + std::to_string(lineno) + ": self-loop " +
                           std::to_string(u));
    int a = static_cast<int>(std::min(u, v));
    int b = static_cast<int>(std::max(u, v));
    edges.emplace_back(a, b);
    max_id = std::max(max_id, b);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return graph_from_edges(max_id + 1, edges);
}

Graph from_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return from_edge_list(in);
}

void write_edge_list(const Graph& g, std::ostream& out) {
  for (auto [u, v] : g.edges()) out << u << ' ' << v << '\n';
}

std::vector<int> bfs_distances(const Graph& g, int source) {
  std::vector<int> dist(g.n, kUnreachable);
  std::deque<int> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    for (int v : g.adj[u])
      if (dist[v] == kUnreachable) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
  }
  return dist;
}

bool is_connected(const Graph& g) {
  if (g.n == 0) return true;
  auto dist = bfs_distances(g, 0);
  return std::none_of(dist.begin(), dist.end(),
                      [](int d) { return d == kUnreachable; });
}

bool is_tree(const Graph& g) { return g.m == g.n - 1 && is_connected(g); }

}  // namespace nbx
