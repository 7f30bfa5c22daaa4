#ifndef SETRISK_DOUBLE_DESCRIPTION_HPP
#define SETRISK_DOUBLE_DESCRIPTION_HPP

#include <bit>
#include <cstdint>
#include <vector>

#include "setrisk/linalg.hpp"
#include "setrisk/lp.hpp"

namespace setrisk {

namespace detail {

/// Growable bitset over constraint indices.
class TightSet {
 public:
  void set(std::size_t i) {
    if (words_.size() <= i / 64) words_.resize(i / 64 + 1, 0);
    words_[i / 64] |= std::uint64_t{1} << (i % 64);
  }
  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  static TightSet meet(const TightSet& a, const TightSet& b) {
    TightSet r;
    const std::size_t n = std::min(a.words_.size(), b.words_.size());
    r.words_.resize(n);
    for (std::size_t i = 0; i < n; ++i) r.words_[i] = a.words_[i] & b.words_[i];
    return r;
  }
  bool subset_of(const TightSet& other) const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      const std::uint64_t o = i < other.words_.size() ? other.words_[i] : 0;
      if ((words_[i] & ~o) != 0) return false;
    }
    return true;
  }

 private:
  std::vector<std::uint64_t> words_;
};

}  // namespace detail

/// Generators of a polyhedral cone: the cone is lin(lines) + cone(rays).
template <typename Scalar>
struct ConeGenerators {
  std::vector<VectorX<Scalar>> lines;
  std::vector<VectorX<Scalar>> rays;
};

/// Double description for {y : e.y == 0 (equalities), a.y >= 0 (inequalities)}.
///
/// Equalities are processed before inequalities; within each group the
/// insertion order is the input order, so the output is deterministic.
/// Rays are extreme modulo the lineality space and are kept primitive.
template <typename Scalar>
ConeGenerators<Scalar> cone_generators(Eigen::Index dim, const std::vector<VectorX<Scalar>>& inequalities,
                                       const std::vector<VectorX<Scalar>>& equalities) {
  using Vec = VectorX<Scalar>;
  using detail::TightSet;
  struct Ray {
    Vec v;
    TightSet tight;
  };

  std::vector<Vec> lines;
  for (Eigen::Index i = 0; i < dim; ++i) {
    Vec e = Vec::Zero(dim);
    e[i] = 1;
    lines.push_back(std::move(e));
  }
  std::vector<Ray> rays;
  TightSet all_so_far;

  const std::size_t n_eq = equalities.size();
  const std::size_t n_total = n_eq + inequalities.size();
  for (std::size_t k = 0; k < n_total; ++k) {
    const bool is_eq = k < n_eq;
    const Vec& a = is_eq ? equalities[k] : inequalities[k - n_eq];
    if (a.size() != dim) throw DimensionMismatch("double description constraint size");

    std::size_t pivot = lines.size();
    Scalar pivot_val{0};
    for (std::size_t i = 0; i < lines.size(); ++i) {
      Scalar v = a.dot(lines[i]);
      if (v != 0) {
        pivot = i;
        pivot_val = v;
        break;
      }
    }

    if (pivot < lines.size()) {
      Vec l = lines[pivot];
      if (pivot_val < 0) {
        l = -l;
        pivot_val = -pivot_val;
      }
      lines.erase(lines.begin() + static_cast<std::ptrdiff_t>(pivot));
      for (auto& other : lines) {
        Scalar f = a.dot(other);
        if (f != 0) other -= (f / pivot_val) * l;
        ScalarTraits<Scalar>::make_primitive(other);
      }
      for (auto& r : rays) {
        Scalar f = a.dot(r.v);
        if (f != 0) r.v -= (f / pivot_val) * l;
        ScalarTraits<Scalar>::make_primitive(r.v);
        r.tight.set(k);
      }
      if (!is_eq) {
        ScalarTraits<Scalar>::make_primitive(l);
        rays.push_back({std::move(l), all_so_far});
      }
      all_so_far.set(k);
      continue;
    }

    std::vector<std::size_t> pos, zero, neg;
    std::vector<Scalar> val(rays.size());
    for (std::size_t i = 0; i < rays.size(); ++i) {
      val[i] = a.dot(rays[i].v);
      if (val[i] > 0)
        pos.push_back(i);
      else if (val[i] < 0)
        neg.push_back(i);
      else
        zero.push_back(i);
    }

    // Adjacency needs the tight set to have rank dim - |lines| - 2.
    const std::ptrdiff_t need = static_cast<std::ptrdiff_t>(dim) - static_cast<std::ptrdiff_t>(lines.size()) - 2;
    std::vector<Ray> next;
    for (std::size_t p : pos) {
      for (std::size_t n : neg) {
        TightSet common = TightSet::meet(rays[p].tight, rays[n].tight);
        if (static_cast<std::ptrdiff_t>(common.count()) < need) continue;
        bool adjacent = true;
        for (std::size_t o = 0; o < rays.size() && adjacent; ++o) {
          if (o == p || o == n) continue;
          if (common.subset_of(rays[o].tight)) adjacent = false;
        }
        if (!adjacent) continue;
        Vec v = val[p] * rays[n].v - val[n] * rays[p].v;
        ScalarTraits<Scalar>::make_primitive(v);
        common.set(k);
        next.push_back({std::move(v), std::move(common)});
      }
    }
    std::vector<Ray> kept;
    for (std::size_t i : zero) {
      rays[i].tight.set(k);
      kept.push_back(std::move(rays[i]));
    }
    if (!is_eq)
      for (std::size_t i : pos) kept.push_back(std::move(rays[i]));
    for (auto& r : next) kept.push_back(std::move(r));
    rays = std::move(kept);
    all_so_far.set(k);
  }

  ConeGenerators<Scalar> out;
  out.lines = std::move(lines);
  for (auto& r : rays) out.rays.push_back(std::move(r.v));
  return out;
}

/// Generators of {x : a.x >= b, e.x == f}. `vertices` empty means the set is
/// empty.
template <typename Scalar>
struct Generators {
  std::vector<VectorX<Scalar>> vertices;
  std::vector<VectorX<Scalar>> rays;
  std::vector<VectorX<Scalar>> lines;
};

template <typename Scalar>
Generators<Scalar> h_to_v(Eigen::Index dim, const std::vector<HalfSpace<Scalar>>& inequalities,
                          const std::vector<HalfSpace<Scalar>>& equalities) {
  using Vec = VectorX<Scalar>;
  auto homogenize = [dim](const HalfSpace<Scalar>& h) {
    if (h.a.size() != dim) throw DimensionMismatch("halfspace size");
    Vec y(dim + 1);
    y.head(dim) = h.a;
    y[dim] = -h.b;
    return y;
  };
  std::vector<Vec> ineq;
  Vec lambda = Vec::Zero(dim + 1);
  lambda[dim] = 1;
  ineq.push_back(lambda);
  for (const auto& h : inequalities) ineq.push_back(homogenize(h));
  std::vector<Vec> eq;
  for (const auto& h : equalities) eq.push_back(homogenize(h));
  ConeGenerators<Scalar> cone = cone_generators<Scalar>(dim + 1, ineq, eq);

  Generators<Scalar> g;
  for (auto& l : cone.lines) g.lines.push_back(l.head(dim));
  for (auto& r : cone.rays) {
    if (r[dim] > 0) {
      Vec v = r.head(dim) / r[dim];
      g.vertices.push_back(std::move(v));
    } else {
      Vec v = r.head(dim);
      g.rays.push_back(std::move(v));
    }
  }
  if (g.vertices.empty()) {
    g.rays.clear();
    g.lines.clear();
  }
  return g;
}

/// Minimal constraint description of conv(vertices) + cone(rays) + lin(lines).
/// Requires at least one vertex.
template <typename Scalar>
void v_to_h(Eigen::Index dim, const Generators<Scalar>& gen, std::vector<HalfSpace<Scalar>>& inequalities,
            std::vector<HalfSpace<Scalar>>& equalities) {
  using Vec = VectorX<Scalar>;
  std::vector<Vec> ineq, eq;
  auto lift = [dim](const Vec& x, const Scalar& last) {
    if (x.size() != dim) throw DimensionMismatch("generator size");
    Vec y(dim + 1);
    y.head(dim) = x;
    y[dim] = last;
    return y;
  };
  for (const auto& v : gen.vertices) ineq.push_back(lift(v, Scalar(1)));
  for (const auto& r : gen.rays) ineq.push_back(lift(r, Scalar(0)));
  for (const auto& l : gen.lines) eq.push_back(lift(l, Scalar(0)));
  ConeGenerators<Scalar> dual = cone_generators<Scalar>(dim + 1, ineq, eq);
  inequalities.clear();
  equalities.clear();
  for (const auto& l : dual.lines) equalities.push_back({l.head(dim), Scalar(-l[dim])});
  for (const auto& r : dual.rays) {
    if (is_zero<Scalar>(Vec(r.head(dim)))) continue;
    inequalities.push_back({r.head(dim), Scalar(-r[dim])});
  }
}

}  // namespace setrisk

#endif  // SETRISK_DOUBLE_DESCRIPTION_HPP
