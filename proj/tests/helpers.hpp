#pragma once

// Shared fixtures for the test binaries: small random graph generators and a
// dense eigendecomposition oracle (Eigen, test-side only).

#include <algorithm>
#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "nbx/graph.hpp"
#include "nbx/rng.hpp"
#include "nbx/sparse.hpp"

namespace testutil {

/// Random attachment tree: node i links to a uniform earlier node.
inline nbx::Graph random_tree(int n, std::uint64_t seed) {
  nbx::SplitMix64 rng(seed);
  std::vector<std::pair<int, int>> edges;
  for (int i = 1; i < n; ++i) {
    const int j = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(i)));
    edges.emplace_back(j, i);
  }
  std::sort(edges.begin(), edges.end());
  return nbx::graph_from_edges(n, edges);
}

/// Random tree plus `extra` distinct random chords; always connected.
inline nbx::Graph random_connected_graph(int n, int extra, std::uint64_t seed) {
  nbx::SplitMix64 rng(seed);
  std::vector<std::pair<int, int>> edges;
  for (int i = 1; i < n; ++i)
    edges.emplace_back(static_cast<int>(rng.next_below(static_cast<std::uint64_t>(i))), i);
  for (auto& [u, v] : edges)
    if (u > v) std::swap(u, v);
  for (int e = 0; e < extra; ++e) {
    const int u = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
    const int v = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
    if (u != v) edges.emplace_back(std::min(u, v), std::max(u, v));
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return nbx::graph_from_edges(n, edges);
}

/// Random d-regular simple graph by the pairing model, resampled until simple.
/// Requires n*d even.
inline nbx::Graph random_regular(int n, int d, std::uint64_t seed) {
  nbx::SplitMix64 rng(seed);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    std::vector<int> stubs;
    stubs.reserve(static_cast<std::size_t>(n) * d);
    for (int v = 0; v < n; ++v)
      for (int k = 0; k < d; ++k) stubs.push_back(v);
    for (std::size_t i = stubs.size(); i > 1; --i)
      std::swap(stubs[i - 1], stubs[rng.next_below(i)]);
    std::vector<std::pair<int, int>> edges;
    bool ok = true;
    for (std::size_t i = 0; i + 1 < stubs.size() && ok; i += 2) {
      int u = stubs[i], v = stubs[i + 1];
      if (u == v) ok = false;
      if (u > v) std::swap(u, v);
      edges.emplace_back(u, v);
    }
    if (!ok) continue;
    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) continue;
    return nbx::graph_from_edges(n, edges);
  }
  throw std::runtime_error("pairing model failed to produce a simple graph");
}

inline nbx::Graph path_graph(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  return nbx::graph_from_edges(n, edges);
}

inline nbx::Graph cycle_graph(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  edges.emplace_back(0, n - 1);
  std::sort(edges.begin(), edges.end());
  return nbx::graph_from_edges(n, edges);
}

inline nbx::Graph complete_graph(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  return nbx::graph_from_edges(n, edges);
}

/// Star with the center at node 0 and `leaves` leaves.
inline nbx::Graph star_graph(int leaves) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 1; i <= leaves; ++i) edges.emplace_back(0, i);
  return nbx::graph_from_edges(leaves + 1, edges);
}

inline Eigen::MatrixXd to_eigen(const nbx::SparseRealMatrix& m) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m.rows(), m.cols());
  for (int r = 0; r < m.rows(); ++r)
    for (long long k = m.row_ptr()[r]; k < m.row_ptr()[r + 1]; ++k)
      out(r, m.col_idx()[k]) += m.values()[k];
  return out;
}

/// Dense eigendecomposition oracle; eigenvalues sorted by descending
/// magnitude (ties broken toward larger real part).
inline std::vector<std::complex<double>> dense_eigenvalues(const nbx::SparseRealMatrix& m) {
  Eigen::EigenSolver<Eigen::MatrixXd> solver(to_eigen(m), /*computeEigenvectors=*/false);
  std::vector<std::complex<double>> vals(solver.eigenvalues().size());
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i)
    vals[i] = solver.eigenvalues()[i];
  std::sort(vals.begin(), vals.end(), [](auto a, auto b) {
    if (std::abs(a) != std::abs(b)) return std::abs(a) > std::abs(b);
    return a.real() > b.real();
  });
  return vals;
}

/// Eigenvector for the (real) eigenvalue of the given rank by magnitude.
inline std::vector<double> dense_real_eigenvector(const nbx::SparseRealMatrix& m, int rank) {
  Eigen::EigenSolver<Eigen::MatrixXd> solver(to_eigen(m));
  std::vector<int> order(solver.eigenvalues().size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return std::abs(solver.eigenvalues()[a]) > std::abs(solver.eigenvalues()[b]);
  });
  const int idx = order[rank];
  std::vector<double> vec(m.rows());
  for (int i = 0; i < m.rows(); ++i) vec[i] = solver.eigenvectors()(i, idx).real();
  return vec;
}

}  // namespace testutil
