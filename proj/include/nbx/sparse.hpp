#pragma once

#include <cstddef>
#include <vector>

namespace nbx {

struct Triplet {
  int row;
  int col;
  double value;
};

/// Small row-major dense matrix used for bound tables and power outputs.
struct DenseMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  DenseMatrix() = default;
  DenseMatrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}

  double& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
  double at(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }
};

/// General sparse real matrix in CSR form with sorted column indices.
/// Immutable after construction.
class SparseRealMatrix {
 public:
  SparseRealMatrix() = default;

  /// Duplicate (row, col) triplets are summed. Non-finite values throw
  /// MalformedInput.
  static SparseRealMatrix from_triplets(int nrows, int ncols, std::vector<Triplet> ts);
  static SparseRealMatrix identity(int n);

  int rows() const { return nrows_; }
  int cols() const { return ncols_; }
  long long nnz() const { return static_cast<long long>(col_.size()); }

  /// Entry lookup; 0 for positions outside the sparsity pattern.
  double at(int r, int c) const;

  std::vector<double> row_sums() const;

  /// y = A x
  std::vector<double> apply(const std::vector<double>& x) const;

  /// Y = A X for a dense (cols() x k) row-major block X; result rows() x k.
  std::vector<double> apply_block(const std::vector<double>& x, int k) const;

  SparseRealMatrix transpose() const;
  DenseMatrix to_dense() const;

  const std::vector<long long>& row_ptr() const { return rowptr_; }
  const std::vector<int>& col_idx() const { return col_; }
  const std::vector<double>& values() const { return val_; }

 private:
  int nrows_ = 0;
  int ncols_ = 0;
  std::vector<long long> rowptr_{0};
  std::vector<int> col_;
  std::vector<double> val_;
};

}  // namespace nbx
