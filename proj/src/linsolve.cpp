#include "pdq/linsolve.hpp"

namespace pdq {

bool SparseSystem::add_row(Row row, Scalar rhs) {
  for (auto it = row.begin(); it != row.end();)
    it = it->second.is_zero() ? row.erase(it) : std::next(it);
  while (!row.empty()) {
    auto lead = row.begin();
    auto pv = pivots_.find(lead->first);
    if (pv == pivots_.end())
      break;
    Scalar f = lead->second;
    for (const auto &[c, v] : pv->second.row) {
      auto [it, inserted] = row.try_emplace(c, -(f * v));
      if (!inserted) {
        it->second -= f * v;
        if (it->second.is_zero())
          row.erase(it);
      }
    }
    rhs -= f * pv->second.rhs;
  }
  if (row.empty()) {
    if (!rhs.is_zero())
      consistent_ = false;
    return consistent_;
  }
  Scalar inv = row.begin()->second.inverse();
  for (auto &[c, v] : row)
    v *= inv;
  rhs *= inv;
  int col = row.begin()->first;
  pivots_.emplace(col, Pivot{std::move(row), std::move(rhs)});
  return consistent_;
}

std::optional<std::vector<Scalar>> SparseSystem::solve() const {
  if (!consistent_)
    return std::nullopt;
  std::vector<Scalar> x(ncols_, Scalar(0));
  for (auto it = pivots_.rbegin(); it != pivots_.rend(); ++it) {
    Scalar v = it->second.rhs;
    for (const auto &[c, a] : it->second.row)
      if (c != it->first && !x[c].is_zero())
        v -= a * x[c];
    x[it->first] = v;
  }
  return x;
}

} // namespace pdq
