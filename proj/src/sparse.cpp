#include "nbx/sparse.hpp"

#include <algorithm>
#include <cmath>

#include "nbx/errors.hpp"

namespace nbx {

SparseRealMatrix SparseRealMatrix::from_triplets(int nrows, int ncols,
                                                std::vector<Triplet> ts) {
  for (const auto& t : ts) {
    if (t.row < 0 || t.row >= nrows || t.col < 0 || t.col >= ncols)
      throw MalformedInput("triplet index out of range");
    if (!std::isfinite(t.value)) throw MalformedInput("non-finite matrix entry");
  }
  std::sort(ts.begin(), ts.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  SparseRealMatrix m;
  m.nrows_ = nrows;
  m.ncols_ = ncols;
  m.rowptr_.assign(nrows + 1, 0);
  std::size_t i = 0;
  for (int r = 0; r < nrows; ++r) {
    while (i < ts.size() && ts[i].row == r) {
      double v = ts[i].value;
      int c = ts[i].col;
      ++i;
      while (i < ts.size() && ts[i].row == r && ts[i].col == c) {
        v += ts[i].value;
        ++i;
      }
      if (v != 0.0) {
        m.col_.push_back(c);
        m.val_.push_back(v);
      }
    }
    m.rowptr_[r + 1] = static_cast<long long>(m.col_.size());
  }
  return m;
}

SparseRealMatrix SparseRealMatrix::identity(int n) {
  std::vector<Triplet> ts;
  ts.reserve(n);
  for (int i = 0; i < n; ++i) ts.push_back({i, i, 1.0});
  return from_triplets(n, n, std::move(ts));
}

double SparseRealMatrix::at(int r, int c) const {
  auto b = col_.begin() + rowptr_[r];
  auto e = col_.begin() + rowptr_[r + 1];
  auto it = std::lower_bound(b, e, c);
  if (it == e || *it != c) return 0.0;
  return val_[static_cast<std::size_t>(it - col_.begin())];
}

std::vector<double> SparseRealMatrix::row_sums() const {
  std::vector<double> s(nrows_, 0.0);
  for (int r = 0; r < nrows_; ++r)
    for (long long i = rowptr_[r]; i < rowptr_[r + 1]; ++i) s[r] += val_[i];
  return s;
}

std::vector<double> SparseRealMatrix::apply(const std::vector<double>& x) const {
  std::vector<double> y(nrows_, 0.0);
  for (int r = 0; r < nrows_; ++r) {
    double acc = 0.0;
    for (long long i = rowptr_[r]; i < rowptr_[r + 1]; ++i) acc += val_[i] * x[col_[i]];
    y[r] = acc;
  }
  return y;
}

std::vector<double> SparseRealMatrix::apply_block(const std::vector<double>& x,
                                                 int k) const {
  std::vector<double> y(static_cast<std::size_t>(nrows_) * k, 0.0);
  for (int r = 0; r < nrows_; ++r) {
    double* yr = y.data() + static_cast<std::size_t>(r) * k;
    for (long long i = rowptr_[r]; i < rowptr_[r + 1]; ++i) {
      const double v = val_[i];
      const double* xc = x.data() + static_cast<std::size_t>(col_[i]) * k;
      for (int j = 0; j < k; ++j) yr[j] += v * xc[j];
    }
  }
  return y;
}

SparseRealMatrix SparseRealMatrix::transpose() const {
  std::vector<Triplet> ts;
  ts.reserve(col_.size());
  for (int r = 0; r < nrows_; ++r)
    for (long long i = rowptr_[r]; i < rowptr_[r + 1]; ++i)
      ts.push_back({col_[i], r, val_[i]});
  return from_triplets(ncols_, nrows_, std::move(ts));
}

DenseMatrix SparseRealMatrix::to_dense() const {
  DenseMatrix d(nrows_, ncols_);
  for (int r = 0; r < nrows_; ++r)
    for (long long i = rowptr_[r]; i < rowptr_[r + 1]; ++i) d.at(r, col_[i]) = val_[i];
  return d;
}

}  // namespace nbx
