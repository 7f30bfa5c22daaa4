#ifndef SETRISK_LP_HPP
#define SETRISK_LP_HPP

#include <vector>

#include "setrisk/error.hpp"
#include "setrisk/rational.hpp"

namespace setrisk {

/// Linear constraint a.x >= b (or a.x == b when used as an equality).
template <typename Scalar>
struct HalfSpace {
  VectorX<Scalar> a;
  Scalar b;
};

template <typename Scalar>
struct LpResult {
  enum class Status { Optimal, Unbounded, Infeasible };
  Status status = Status::Infeasible;
  Scalar value{0};
  VectorX<Scalar> x;  // an optimal point when status == Optimal
};

/// Exact two-phase primal simplex with Bland's rule.
///
/// Minimizes c.x over {x in R^n : a.x >= b for inequalities, a.x == b for
/// equalities}. Variables are free. Termination is guaranteed by Bland's rule.
template <typename Scalar>
LpResult<Scalar> lp_minimize(const VectorX<Scalar>& c, const std::vector<HalfSpace<Scalar>>& inequalities,
                             const std::vector<HalfSpace<Scalar>>& equalities) {
  const Eigen::Index n = c.size();
  for (const auto& h : inequalities)
    if (h.a.size() != n) throw DimensionMismatch("lp constraint size");
  for (const auto& h : equalities)
    if (h.a.size() != n) throw DimensionMismatch("lp constraint size");

  const Eigen::Index n_ineq = static_cast<Eigen::Index>(inequalities.size());
  const Eigen::Index m = n_ineq + static_cast<Eigen::Index>(equalities.size());
  // Columns: x+ (n), x- (n), slacks (n_ineq), artificials (m), rhs.
  const Eigen::Index n_struct = 2 * n + n_ineq;
  const Eigen::Index n_cols = n_struct + m + 1;
  const Eigen::Index rhs = n_cols - 1;

  MatrixX<Scalar> tab = MatrixX<Scalar>::Zero(m, n_cols);
  for (Eigen::Index i = 0; i < m; ++i) {
    const bool is_ineq = i < n_ineq;
    const HalfSpace<Scalar>& h = is_ineq ? inequalities[i] : equalities[i - n_ineq];
    for (Eigen::Index j = 0; j < n; ++j) {
      tab(i, j) = h.a[j];
      tab(i, n + j) = -h.a[j];
    }
    if (is_ineq) tab(i, 2 * n + i) = -1;
    tab(i, rhs) = h.b;
    if (tab(i, rhs) < 0) tab.row(i) *= Scalar(-1);
    tab(i, n_struct + i) = 1;
  }

  std::vector<Eigen::Index> basis(m);
  for (Eigen::Index i = 0; i < m; ++i) basis[i] = n_struct + i;
  std::vector<bool> active_row(m, true);

  auto pivot = [&](Eigen::Index r, Eigen::Index col) {
    const Scalar p = tab(r, col);
    tab.row(r) /= p;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (i == r || !active_row[i] || tab(i, col) == 0) continue;
      const Scalar f = tab(i, col);
      tab.row(i) -= f * tab.row(r);
    }
    basis[r] = col;
  };

  // Runs simplex iterations for cost vector `cost` over columns [0, col_limit).
  // Returns false when unbounded.
  auto run = [&](const VectorX<Scalar>& cost, Eigen::Index col_limit) {
    for (;;) {
      Eigen::Index entering = -1;
      for (Eigen::Index j = 0; j < col_limit && entering < 0; ++j) {
        Scalar reduced = cost[j];
        for (Eigen::Index i = 0; i < m; ++i)
          if (active_row[i] && tab(i, j) != 0) reduced -= cost[basis[i]] * tab(i, j);
        if (reduced < 0) entering = j;
      }
      if (entering < 0) return true;
      Eigen::Index leave = -1;
      Scalar best{0};
      for (Eigen::Index i = 0; i < m; ++i) {
        if (!active_row[i] || tab(i, entering) <= 0) continue;
        Scalar ratio = tab(i, rhs) / tab(i, entering);
        if (leave < 0 || ratio < best || (ratio == best && basis[i] < basis[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave < 0) return false;
      pivot(leave, entering);
    }
  };

  // Phase 1.
  VectorX<Scalar> phase1 = VectorX<Scalar>::Zero(n_cols);
  for (Eigen::Index i = 0; i < m; ++i) phase1[n_struct + i] = 1;
  run(phase1, n_struct + m);
  Scalar infeas{0};
  for (Eigen::Index i = 0; i < m; ++i)
    if (basis[i] >= n_struct) infeas += tab(i, rhs);
  LpResult<Scalar> result;
  if (infeas != 0) {
    result.status = LpResult<Scalar>::Status::Infeasible;
    return result;
  }
  // Drive remaining (zero-valued) artificials out of the basis.
  for (Eigen::Index i = 0; i < m; ++i) {
    if (basis[i] < n_struct) continue;
    Eigen::Index col = -1;
    for (Eigen::Index j = 0; j < n_struct && col < 0; ++j)
      if (tab(i, j) != 0) col = j;
    if (col >= 0)
      pivot(i, col);
    else
      active_row[i] = false;  // redundant row
  }

  // Phase 2.
  VectorX<Scalar> cost = VectorX<Scalar>::Zero(n_cols);
  for (Eigen::Index j = 0; j < n; ++j) {
    cost[j] = c[j];
    cost[n + j] = -c[j];
  }
  if (!run(cost, n_struct)) {
    result.status = LpResult<Scalar>::Status::Unbounded;
    return result;
  }
  result.status = LpResult<Scalar>::Status::Optimal;
  VectorX<Scalar> full = VectorX<Scalar>::Zero(n_struct);
  for (Eigen::Index i = 0; i < m; ++i)
    if (active_row[i] && basis[i] < n_struct) full[basis[i]] = tab(i, rhs);
  result.x = VectorX<Scalar>(n);
  for (Eigen::Index j = 0; j < n; ++j) result.x[j] = full[j] - full[n + j];
  result.value = c.dot(result.x);
  return result;
}

}  // namespace setrisk

#endif  // SETRISK_LP_HPP
