#include "nbx/matrices.hpp"

#include <cmath>

#include "nbx/errors.hpp"

namespace nbx {

SparseRealMatrix nb_matrix(const Graph& g, const ArcIndex& ai, bool begrudging) {
  const int na = ai.num_arcs();
  std::vector<Triplet> ts;
  ts.reserve(static_cast<std::size_t>(nb_transition_count(g)));
  for (int a = 0; a < na; ++a) {
    const int l = ai.tail(a);
    const int k = ai.head(a);
    for (int i : g.adj[k]) {
      if (i == l) continue;
      ts.push_back({a, ai.arc_of(k, i), 1.0});
    }
    if (begrudging && g.degree(k) == 1) ts.push_back({a, ai.reverse_of(a), 1.0});
  }
  return SparseRealMatrix::from_triplets(na, na, std::move(ts));
}

SparseRealMatrix nb_degree(const SparseRealMatrix& B) {
  const int na = B.rows();
  auto sums = B.row_sums();
  std::vector<Triplet> ts;
  ts.reserve(na);
  for (int a = 0; a < na; ++a)
    if (sums[a] != 0.0) ts.push_back({a, a, sums[a]});
  SparseRealMatrix d = SparseRealMatrix::from_triplets(na, na, std::move(ts));
  return d;
}

SparseRealMatrix normalized_nb(const SparseRealMatrix& B, const SparseRealMatrix& D) {
  const int na = B.rows();
  std::vector<double> scale(na);
  for (int a = 0; a < na; ++a) scale[a] = 1.0 / std::sqrt(D.at(a, a) + 1.0);
  std::vector<Triplet> ts;
  ts.reserve(static_cast<std::size_t>(B.nnz()) + na);
  for (int r = 0; r < na; ++r) {
    for (long long i = B.row_ptr()[r]; i < B.row_ptr()[r + 1]; ++i) {
      const int c = B.col_idx()[i];
      ts.push_back({r, c, scale[r] * B.values()[i] * scale[c]});
    }
    ts.push_back({r, r, scale[r] * scale[r]});
  }
  return SparseRealMatrix::from_triplets(na, na, std::move(ts));
}

IncidencePair incidence(const Graph& g, const ArcIndex& ai) {
  const int na = ai.num_arcs();
  std::vector<Triplet> c, ct;
  c.reserve(2 * static_cast<std::size_t>(na));
  ct.reserve(2 * static_cast<std::size_t>(na));
  for (int a = 0; a < na; ++a) {
    c.push_back({a, ai.tail(a), 1.0});
    c.push_back({a, ai.head(a), 1.0});
    ct.push_back({a, ai.tail(a), 2.0});
    ct.push_back({a, ai.head(a), 2.0});
  }
  return {SparseRealMatrix::from_triplets(na, g.n, std::move(c)),
          SparseRealMatrix::from_triplets(na, g.n, std::move(ct))};
}

SparseRealMatrix normalized_adj(const Graph& g) {
  std::vector<Triplet> ts;
  ts.reserve(2 * static_cast<std::size_t>(g.m) + g.n);
  for (int i = 0; i < g.n; ++i) {
    const double si = 1.0 / std::sqrt(g.degree(i) + 1.0);
    ts.push_back({i, i, si * si});
    for (int j : g.adj[i]) ts.push_back({i, j, si / std::sqrt(g.degree(j) + 1.0)});
  }
  return SparseRealMatrix::from_triplets(g.n, g.n, std::move(ts));
}

long long nb_transition_count(const Graph& g) {
  long long total = 0;
  for (int j = 0; j < g.n; ++j) {
    const long long d = g.degree(j);
    total += d * (d - 1);
  }
  return total;
}

}  // namespace nbx
