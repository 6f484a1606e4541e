#pragma once

#include <istream>
#include <string>
#include <utility>
#include <vector>

namespace nbx {

/// Hop distance marker for nodes unreachable from the BFS source.
inline constexpr int kUnreachable = -1;

/// Simple undirected graph. Neighbor lists are sorted ascending and
/// symmetric; no self-loops, no multi-edges.
struct Graph {
  int n = 0;
  long long m = 0;
  std::vector<std::vector<int>> adj;

  int degree(int v) const { return static_cast<int>(adj[v].size()); }
  bool has_edge(int u, int v) const;

  /// Edges as (u, v) pairs with u < v, ordered lexicographically.
  std::vector<std::pair<int, int>> edges() const;
};

/// Build a graph from sorted-unique edge pairs (u < v). Used by generators
/// and tests; from_edge_list is the text ingestion path.
Graph graph_from_edges(int n, const std::vector<std::pair<int, int>>& edges);

/// Parse "u v" lines. Lines starting with '#' and blank lines are skipped,
/// CRLF accepted, duplicate edges collapse. Self-loops and unparsable tokens
/// throw MalformedInput.
Graph from_edge_list(std::istream& in);
Graph from_edge_list_file(const std::string& path);

/// Write the graph back out in the same edge-list format.
void write_edge_list(const Graph& g, std::ostream& out);

/// Hop distances from source; kUnreachable for disconnected nodes.
std::vector<int> bfs_distances(const Graph& g, int source);

bool is_connected(const Graph& g);
bool is_tree(const Graph& g);

}  // namespace nbx
