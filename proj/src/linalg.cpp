#include "hmf/linalg.hpp"

namespace hmf {

bool Echelon::insert(RatVec v) {
  if (v.size() != ncols_) fail(ErrorKind::Internal, "echelon row length mismatch");
  for (size_t i = 0; i < rows_.size(); ++i) {
    size_t pc = pivots_[i];
    if (v[pc] == 0) continue;
    Rat f = v[pc];
    const RatVec& r = rows_[i];
    for (size_t j = pc; j < ncols_; ++j)
      if (r[j] != 0) v[j] -= f * r[j];
  }
  size_t pc = 0;
  while (pc < ncols_ && v[pc] == 0) ++pc;
  if (pc == ncols_) return false;
  Rat inv = 1 / v[pc];
  for (size_t j = pc; j < ncols_; ++j)
    if (v[j] != 0) v[j] *= inv;
  // Keep the rows reduced so later inserts only touch their own pivot columns.
  for (size_t i = 0; i < rows_.size(); ++i) {
    RatVec& r = rows_[i];
    if (r[pc] == 0) continue;
    Rat f = r[pc];
    for (size_t j = pc; j < ncols_; ++j)
      if (v[j] != 0) r[j] -= f * v[j];
  }
  rows_.push_back(std::move(v));
  pivots_.push_back(pc);
  return true;
}

SolveResult solve_linear(std::vector<RatVec> A, RatVec b) {
  size_t m = A.size();
  size_t n = m ? A[0].size() : 0;
  for (size_t i = 0; i < m; ++i) A[i].push_back(b[i]);
  size_t row = 0;
  std::vector<size_t> pivcol;
  for (size_t col = 0; col < n && row < m; ++col) {
    size_t sel = row;
    while (sel < m && A[sel][col] == 0) ++sel;
    if (sel == m) continue;
    std::swap(A[sel], A[row]);
    Rat inv = 1 / A[row][col];
    for (size_t j = col; j <= n; ++j)
      if (A[row][j] != 0) A[row][j] *= inv;
    for (size_t i = 0; i < m; ++i) {
      if (i == row || A[i][col] == 0) continue;
      Rat f = A[i][col];
      for (size_t j = col; j <= n; ++j)
        if (A[row][j] != 0) A[i][j] -= f * A[row][j];
    }
    pivcol.push_back(col);
    ++row;
  }
  for (size_t i = row; i < m; ++i)
    if (A[i][n] != 0) return {SolveStatus::Inconsistent, {}};
  if (row < n) return {SolveStatus::Underdetermined, {}};
  RatVec x(n);
  for (size_t i = 0; i < row; ++i) x[pivcol[i]] = A[i][n];
  return {SolveStatus::Unique, x};
}

}  // namespace hmf
