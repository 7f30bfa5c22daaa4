#ifndef SETRISK_TEST_KERNEL_PROPERTIES_HPP
#define SETRISK_TEST_KERNEL_PROPERTIES_HPP

// Randomized properties of the polyhedral kernel checked against brute-force
// oracles that never touch the double-description conversion: raw H-rows are
// evaluated directly and raw generator lists are tested by an exact LP.

#include <random>
#include <string>
#include <vector>

#include "setrisk/lp.hpp"
#include "setrisk/polyhedron.hpp"
#include "test_util.hpp"

namespace testutil {

using setrisk::ExtendedRational;
using setrisk::HalfSpace;
using setrisk::Polyhedron;

struct PropertyTally {
  int cases = 0;
  int failures = 0;
  std::vector<std::string> notes;  // one line per failed case

  void record(bool ok, const std::string& what) {
    ++cases;
    if (ok) return;
    ++failures;
    notes.push_back(what + " (case " + std::to_string(cases) + ")");
  }
};

struct RawGenerators {
  std::vector<Vector> vertices, rays;
};

inline Rational small_rational(std::mt19937& rng, int lo, int hi) {
  std::uniform_int_distribution<int> dist(2 * lo, 2 * hi);
  return Rational(dist(rng)) / 2;
}

inline Vector random_point(std::mt19937& rng, Eigen::Index n, int lo = -2, int hi = 2) {
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = small_rational(rng, lo, hi);
  return v;
}

inline Vector random_direction(std::mt19937& rng, Eigen::Index n) {
  std::uniform_int_distribution<int> dist(-2, 2);
  Vector v = Vector::Zero(n);
  while (v.isZero())
    for (Eigen::Index i = 0; i < n; ++i) v[i] = dist(rng);
  return v;
}

inline RawGenerators random_generators(std::mt19937& rng, Eigen::Index n, int max_rays) {
  RawGenerators g;
  const int nv = 1 + static_cast<int>(rng() % 5);
  const int nr = max_rays > 0 ? static_cast<int>(rng() % (max_rays + 1)) : 0;
  for (int i = 0; i < nv; ++i) g.vertices.push_back(random_point(rng, n));
  for (int i = 0; i < nr; ++i) g.rays.push_back(random_direction(rng, n));
  return g;
}

inline Polyhedron from_raw(Eigen::Index n, const RawGenerators& g) {
  return Polyhedron::from_generators(n, g.vertices, g.rays);
}

// Random rows inside a box so most instances are bounded; some are empty.
inline std::vector<HalfSpace<Rational>> random_rows(std::mt19937& rng, Eigen::Index n) {
  std::vector<HalfSpace<Rational>> rows;
  const int k = 1 + static_cast<int>(rng() % 4);
  for (int i = 0; i < k; ++i) rows.push_back({random_direction(rng, n), small_rational(rng, -3, 1)});
  if (rng() % 3 != 0)
    for (Eigen::Index i = 0; i < n; ++i) {
      rows.push_back({setrisk::unit_vector(n, i), Rational(-2)});
      rows.push_back({Vector(-setrisk::unit_vector(n, i)), Rational(-2)});
    }
  return rows;
}

inline bool rows_hold(const std::vector<HalfSpace<Rational>>& rows, const Vector& x) {
  for (const auto& h : rows)
    if (h.a.dot(x) < h.b) return false;
  return true;
}

// x in conv(V) + cone(R), decided by LP feasibility in the multipliers.
inline bool raw_member(const RawGenerators& g, const Vector& x) {
  if (g.vertices.empty()) return false;
  const Eigen::Index nv = static_cast<Eigen::Index>(g.vertices.size());
  const Eigen::Index nr = static_cast<Eigen::Index>(g.rays.size());
  const Eigen::Index vars = nv + nr;
  std::vector<HalfSpace<Rational>> ineq, eq;
  for (Eigen::Index j = 0; j < vars; ++j) ineq.push_back({setrisk::unit_vector(vars, j), Rational(0)});
  Vector ones = Vector::Zero(vars);
  ones.head(nv).setOnes();
  eq.push_back({ones, Rational(1)});
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    Vector row(vars);
    for (Eigen::Index j = 0; j < nv; ++j) row[j] = g.vertices[static_cast<std::size_t>(j)][k];
    for (Eigen::Index j = 0; j < nr; ++j) row[nv + j] = g.rays[static_cast<std::size_t>(j)][k];
    eq.push_back({row, x[k]});
  }
  auto r = setrisk::lp_minimize<Rational>(Vector::Zero(vars), ineq, eq);
  return r.status != setrisk::LpResult<Rational>::Status::Infeasible;
}

// inf of a.x over conv(V) + cone(R) straight from the raw lists.
inline ExtendedRational raw_support(const RawGenerators& g, const Vector& a) {
  for (const auto& r : g.rays)
    if (a.dot(r) < 0) return ExtendedRational::neg_inf();
  Rational best = a.dot(g.vertices.front());
  for (const auto& v : g.vertices) best = std::min(best, Rational(a.dot(v)));
  return best;
}

// Grid oracle points: step 1/2 on [-3,3]^2 in 2D, integers on [-2,2]^3 in 3D.
inline std::vector<Vector> grid(Eigen::Index n) {
  std::vector<Vector> out;
  if (n == 2) {
    for (int i = -6; i <= 6; ++i)
      for (int j = -6; j <= 6; ++j) out.push_back(vec({Rational(i) / 2, Rational(j) / 2}));
  } else {
    for (int i = -2; i <= 2; ++i)
      for (int j = -2; j <= 2; ++j)
        for (int k = -2; k <= 2; ++k) out.push_back(vec({i, j, k}));
  }
  return out;
}

inline Eigen::Index random_dim(std::mt19937& rng) { return 2 + static_cast<Eigen::Index>(rng() % 2); }

// V -> H -> V returns the same canonical set, and membership of every grid
// point matches the raw-generator oracle. H inputs are checked against their
// raw rows.
inline void property_round_trip(std::mt19937& rng, PropertyTally& tally) {
  const Eigen::Index n = random_dim(rng);
  if (rng() % 2 == 0) {
    RawGenerators g = random_generators(rng, n, 2);
    Polyhedron p = from_raw(n, g);
    Polyhedron h = Polyhedron::from_halfspaces(n, p.inequalities(), p.equalities());
    Polyhedron v = Polyhedron::from_generators(n, h.vertices(), h.rays(), h.lines());
    bool ok = setrisk::set_equal(p, h) && v.vertices() == p.vertices() && v.rays() == p.rays() &&
              v.inequalities().size() == p.inequalities().size();
    for (const auto& x : grid(n)) ok = ok && setrisk::contains_point(h, x) == raw_member(g, x);
    tally.record(ok, "V->H->V round trip");
  } else {
    auto rows = random_rows(rng, n);
    Polyhedron p = Polyhedron::from_halfspaces(n, rows);
    Polyhedron v = Polyhedron::from_generators(n, p.vertices(), p.rays(), p.lines());
    bool ok = p.is_empty() == v.is_empty() && setrisk::set_equal(p, v);
    for (const auto& x : grid(n)) ok = ok && setrisk::contains_point(v, x) == rows_hold(rows, x);
    tally.record(ok, "H->V->H round trip");
  }
}

// support(A + B) = support(A) + support(B), and sum membership on the grid
// matches the oracle over the raw pairwise sums.
inline void property_sum(std::mt19937& rng, PropertyTally& tally) {
  const Eigen::Index n = random_dim(rng);
  RawGenerators a = random_generators(rng, n, 1), b = random_generators(rng, n, 1);
  Polyhedron s = setrisk::minkowski_sum(from_raw(n, a), from_raw(n, b));
  bool ok = true;
  for (int k = 0; k < 6; ++k) {
    Vector d = random_direction(rng, n);
    ok = ok && setrisk::support_value(s, d) == raw_support(a, d) + raw_support(b, d);
  }
  RawGenerators sum;
  for (const auto& v : a.vertices)
    for (const auto& w : b.vertices) sum.vertices.push_back(v + w);
  sum.rays = a.rays;
  sum.rays.insert(sum.rays.end(), b.rays.begin(), b.rays.end());
  for (const auto& x : grid(n)) ok = ok && setrisk::contains_point(s, x) == raw_member(sum, x);
  tally.record(ok, "Minkowski sum support additivity");
}

// C^++ = C for finitely generated cones; C^+ membership matches the raw
// generator inequalities y.g >= 0.
inline void property_duality(std::mt19937& rng, PropertyTally& tally) {
  const Eigen::Index n = random_dim(rng);
  std::vector<Vector> gens;
  const int k = 1 + static_cast<int>(rng() % 4);
  for (int i = 0; i < k; ++i) gens.push_back(random_direction(rng, n));
  Polyhedron c = Polyhedron::from_generators(n, {Vector::Zero(n)}, gens);
  Polyhedron d = setrisk::positive_dual_cone(c);
  bool ok = setrisk::set_equal(setrisk::positive_dual_cone(d), c);
  for (const auto& y : grid(n)) {
    bool oracle = true;
    for (const auto& g : gens) oracle = oracle && y.dot(g) >= 0;
    ok = ok && setrisk::contains_point(d, y) == oracle;
  }
  tally.record(ok, "dual of dual");
}

// Intersection is the meet of the raw rows; A ∩ B ⊆ A and A ⊆ A + B when B
// contains the origin; translation preserves containment.
inline void property_monotone(std::mt19937& rng, PropertyTally& tally) {
  const Eigen::Index n = random_dim(rng);
  auto ra = random_rows(rng, n), rb = random_rows(rng, n);
  Polyhedron a = Polyhedron::from_halfspaces(n, ra), b = Polyhedron::from_halfspaces(n, rb);
  Polyhedron i = setrisk::intersect(a, b);
  bool ok = setrisk::contains_set(a, i) && setrisk::contains_set(b, i);
  for (const auto& x : grid(n)) ok = ok && setrisk::contains_point(i, x) == (rows_hold(ra, x) && rows_hold(rb, x));
  RawGenerators g = random_generators(rng, n, 1);
  g.vertices.push_back(Vector::Zero(n));
  Polyhedron z = from_raw(n, g);
  ok = ok && setrisk::contains_set(setrisk::minkowski_sum(a, z), a);
  Vector t = random_point(rng, n);
  ok = ok && setrisk::contains_set(setrisk::translate(a, t), setrisk::translate(i, t));
  tally.record(ok, "containment monotonicity");
}

// Projection commutes with Minkowski sums, drops a product factor, and its
// grid membership matches the raw projected generators.
inline void property_projection(std::mt19937& rng, PropertyTally& tally) {
  const Eigen::Index n = 3;
  std::vector<Eigen::Index> coords = {0, 1, 2};
  coords.erase(coords.begin() + static_cast<long>(rng() % 3));
  if (rng() % 2 == 0) std::swap(coords[0], coords[1]);
  RawGenerators a = random_generators(rng, n, 1), b = random_generators(rng, n, 1);
  Polyhedron pa = from_raw(n, a), pb = from_raw(n, b);
  Polyhedron lhs = setrisk::project(setrisk::minkowski_sum(pa, pb), coords);
  Polyhedron rhs = setrisk::minkowski_sum(setrisk::project(pa, coords), setrisk::project(pb, coords));
  bool ok = setrisk::set_equal(lhs, rhs);
  Polyhedron small = setrisk::project(pa, coords);
  std::vector<Eigen::Index> head = {0, 1};
  ok = ok && setrisk::set_equal(setrisk::project(setrisk::product(small, pb), head), small);
  RawGenerators proj;
  auto pick = [&](const Vector& v) { return vec({v[coords[0]], v[coords[1]]}); };
  for (const auto& v : a.vertices) proj.vertices.push_back(pick(v));
  for (const auto& r : a.rays) proj.rays.push_back(pick(r));
  for (const auto& y : grid(2)) ok = ok && setrisk::contains_point(small, y) == raw_member(proj, y);
  tally.record(ok, "projection against Minkowski sum");
}

// 100 cases per family, 500 in all, from one seeded stream.
inline PropertyTally run_kernel_properties(unsigned seed, int per_family = 100) {
  std::mt19937 rng(seed);
  PropertyTally tally;
  for (int i = 0; i < per_family; ++i) {
    property_round_trip(rng, tally);
    property_sum(rng, tally);
    property_duality(rng, tally);
    property_monotone(rng, tally);
    property_projection(rng, tally);
  }
  return tally;
}

}  // namespace testutil

#endif  // SETRISK_TEST_KERNEL_PROPERTIES_HPP
