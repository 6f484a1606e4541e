#pragma once

#include "nbx/arc_index.hpp"
#include "nbx/graph.hpp"
#include "nbx/sparse.hpp"

namespace nbx {

/// Non-backtracking matrix B (2m x 2m). Entry (row = arc l->k, col = arc j->i)
/// is 1 iff k = j and l != i, i.e. rows are predecessor arcs and columns their
/// admissible successors. With begrudging on, an arc whose head is a leaf also
/// feeds its own reverse.
SparseRealMatrix nb_matrix(const Graph& g, const ArcIndex& ai, bool begrudging = false);

/// Diagonal out-degree matrix of B: D_(j->i) = row sum of B at arc j->i.
SparseRealMatrix nb_degree(const SparseRealMatrix& B);

/// B-hat = (D+I)^{-1/2} (B+I) (D+I)^{-1/2}.
SparseRealMatrix normalized_nb(const SparseRealMatrix& B, const SparseRealMatrix& D);

struct IncidencePair {
  SparseRealMatrix C;        // 2m x n, 1 at both endpoints of each arc
  SparseRealMatrix C_tilde;  // C plus the reverse-arc copy; entries in {0, 2}
};
IncidencePair incidence(const Graph& g, const ArcIndex& ai);

/// A-hat = (D~)^{-1/2} (A + I) (D~)^{-1/2} with D~ = degree + 1.
SparseRealMatrix normalized_adj(const Graph& g);

/// nnz(B) without building it: sum_j d_j (d_j - 1).
long long nb_transition_count(const Graph& g);

}  // namespace nbx
