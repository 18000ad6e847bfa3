#pragma once

#include "pdq/scalar.hpp"

#include <map>
#include <optional>
#include <vector>

namespace pdq {

// Sparse exact linear system sum_j a_ij x_j = b_i. Free variables are set to
// zero, so among all solutions the one supported on the earliest pivot
// columns is returned.
class SparseSystem {
public:
  using Row = std::map<int, Scalar>;

  explicit SparseSystem(int ncols) : ncols_(ncols) {}
  int ncols() const { return ncols_; }
  // Returns false when the row makes the system inconsistent.
  bool add_row(Row row, Scalar rhs);
  bool consistent() const { return consistent_; }
  std::optional<std::vector<Scalar>> solve() const;

private:
  struct Pivot {
    Row row; // leading coefficient 1 at the pivot column
    Scalar rhs;
  };
  int ncols_;
  bool consistent_ = true;
  std::map<int, Pivot> pivots_;
};

} // namespace pdq
