#pragma once

#include <optional>
#include <vector>

#include "hmf/qseries.hpp"

namespace hmf {

using RatVec = std::vector<Rat>;

/// Incrementally built row echelon form over Q.
class Echelon {
 public:
  explicit Echelon(size_t ncols) : ncols_(ncols) {}
  // Reduces v against the current rows; keeps it if independent.
  bool insert(RatVec v);
  size_t rank() const { return rows_.size(); }
  const std::vector<RatVec>& rows() const { return rows_; }

 private:
  size_t ncols_;
  std::vector<RatVec> rows_;
  std::vector<size_t> pivots_;
};

enum class SolveStatus { Unique, Inconsistent, Underdetermined };

struct SolveResult {
  SolveStatus status;
  RatVec x;
};

/// Solves A x = b (A given by rows). x is filled only when unique.
SolveResult solve_linear(std::vector<RatVec> A, RatVec b);

}  // namespace hmf
