#ifndef SETRISK_LINALG_HPP
#define SETRISK_LINALG_HPP

#include <vector>

#include "setrisk/rational.hpp"

namespace setrisk {

/// Scalar-specific normalization hooks used to keep generator and constraint
/// lists in a unique form. The generic version divides by the magnitude of the
/// first nonzero entry; the rational specialization scales to a primitive
/// integer vector.
template <typename Scalar>
struct ScalarTraits {
  static Scalar abs(const Scalar& x) { return x < 0 ? Scalar(-x) : x; }

  /// Positive rescaling; returns the factor applied.
  static Scalar make_primitive(VectorX<Scalar>& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      if (v[i] != 0) {
        Scalar f = Scalar(1) / abs(v[i]);
        v *= f;
        return f;
      }
    }
    return Scalar(1);
  }
};

template <>
struct ScalarTraits<Rational> {
  static Rational abs(const Rational& x) { return x < 0 ? Rational(-x) : x; }
  static Rational make_primitive(Vector& v);
};

template <typename Scalar>
bool is_zero(const VectorX<Scalar>& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (v[i] != 0) return false;
  return true;
}

template <typename Scalar>
Eigen::Index first_nonzero(const VectorX<Scalar>& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (v[i] != 0) return i;
  return -1;
}

/// Reduced row echelon form in place. Returns the pivot column of each kept
/// row; zero rows are dropped from `rows`.
template <typename Scalar>
std::vector<Eigen::Index> rref(std::vector<VectorX<Scalar>>& rows, Eigen::Index pivot_limit = -1) {
  std::vector<Eigen::Index> pivots;
  if (rows.empty()) return pivots;
  const Eigen::Index cols = rows.front().size();
  const Eigen::Index limit = pivot_limit < 0 ? cols : pivot_limit;
  std::size_t r = 0;
  for (Eigen::Index c = 0; c < limit && r < rows.size(); ++c) {
    std::size_t sel = r;
    while (sel < rows.size() && rows[sel][c] == 0) ++sel;
    if (sel == rows.size()) continue;
    std::swap(rows[r], rows[sel]);
    rows[r] /= Scalar(rows[r][c]);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][c] == 0) continue;
      Scalar f = rows[i][c];
      rows[i] -= f * rows[r];
    }
    pivots.push_back(c);
    ++r;
  }
  rows.resize(r);
  return pivots;
}

/// Subtracts multiples of RREF `basis` rows so that `v` vanishes on every
/// pivot column. Returns the multipliers used.
template <typename Scalar>
std::vector<Scalar> reduce_by_pivots(VectorX<Scalar>& v, const std::vector<VectorX<Scalar>>& basis,
                                     const std::vector<Eigen::Index>& pivots) {
  std::vector<Scalar> coef(basis.size(), Scalar(0));
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const Scalar f = v[pivots[k]] / basis[k][pivots[k]];
    if (f == 0) continue;
    v -= f * basis[k];
    coef[k] = f;
  }
  return coef;
}

template <typename Scalar>
Eigen::Index rank_of(std::vector<VectorX<Scalar>> rows) {
  return static_cast<Eigen::Index>(rref(rows).size());
}

}  // namespace setrisk

#endif  // SETRISK_LINALG_HPP
