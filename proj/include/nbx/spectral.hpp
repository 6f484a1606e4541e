#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nbx/arc_index.hpp"
#include "nbx/graph.hpp"
#include "nbx/sparse.hpp"

namespace nbx {

struct SbmParams {
  int n = 0;
  int k = 2;
  std::vector<double> alpha;            // length k, sums to 1
  std::vector<std::vector<double>> p;   // k x k symmetric, entries in [0, 1]

  void validate() const;

  /// Standard two-community parametrization: within-probability a/n,
  /// across-probability b/n, balanced communities.
  static SbmParams two_community(int n, double a, double b);
};

struct Labeling {
  std::vector<int> labels;  // per-node class in 0..k-1
};

struct SampledSbm {
  Graph graph;
  Labeling truth;
};

/// Communities drawn from alpha, then each unordered pair is an edge with
/// probability P[c(u)][c(v)]. Deterministic per seed.
SampledSbm sample_sbm(const SbmParams& params, std::uint64_t seed);

/// Erdos-Renyi G(n, c/n); c/n is clipped to [0, 1].
Graph sample_er(int n, double c, std::uint64_t seed);

struct Spectrum {
  std::vector<double> eigenvalues;            // Rayleigh estimates, leading first
  std::vector<double> magnitudes;             // ||B e_i|| after deflation
  std::vector<double> residuals;              // ||B e_i - lambda_i e_i||
  std::vector<char> converged;
  std::vector<std::vector<double>> eigenvectors;  // unit columns, length 2m
};

/// Orthogonal iteration on B: X <- B X followed by Gram-Schmidt, f columns.
/// Converges to the leading invariant subspace when the top eigenvalues are
/// real and separated; eigenvalue estimates are Rayleigh projections at the
/// final iterate. Near-zero Gram-Schmidt columns are restarted with fresh
/// random data; DegenerateStart is thrown only if restarts keep collapsing.
Spectrum orthogonal_iteration(const SparseRealMatrix& b, int f, int iters, double tol,
                              std::uint64_t seed);

inline constexpr int kDefaultSpectralIters = 500;
inline constexpr double kDefaultSpectralTol = 1e-8;

struct HeadProjection {
  SparseRealMatrix t;       // 2m x n, one-hot on arc heads
  SparseRealMatrix t_pinv;  // n x 2m, rows average a node's incoming arcs
};

/// Throws IsolatedNode when some degree is zero.
HeadProjection head_projection(const ArcIndex& ai, const Graph& g);

/// Two-class labels from the sign of (T+ nu2)_v; exact zeros get label 1.
Labeling recover_communities(const Graph& g, const ArcIndex& ai,
                             const std::vector<double>& nu2);

/// Label-switching-invariant agreement for K = 2.
double alignment(const Labeling& a, const Labeling& b);

enum class ModelKind { Sbm, Er };

struct Classification {
  ModelKind decision = ModelKind::Er;
  double lambda1 = 0.0;
  double lambda2_magnitude = 0.0;
  double threshold = 0.0;  // (1 + delta) * sqrt(lambda1)
  Spectrum spectrum;
};

/// SBM iff |lambda2| exceeds (1 + delta) sqrt(lambda1), the bulk radius of
/// the non-backtracking spectrum. Throws SpectrumNotConverged when lambda1
/// fails to converge.
Classification classify_model(const Graph& g, double delta, std::uint64_t seed);

}  // namespace nbx
