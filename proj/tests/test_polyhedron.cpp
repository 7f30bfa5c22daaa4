#include "doctest.h"
#include "test_util.hpp"

using namespace setrisk;
using namespace testutil;

TEST_CASE("from_halfspaces: single constraint is a ray from the origin") {
  auto p = Polyhedron::from_halfspaces(1, {ge({1}, 0)});
  REQUIRE(p.vertices().size() == 1);
  CHECK(p.vertices()[0] == vec({0}));
  REQUIRE(p.rays().size() == 1);
  CHECK(p.rays()[0] == vec({1}));
  CHECK(p.lines().empty());
}

TEST_CASE("from_generators: orthant has n facets") {
  auto p = Polyhedron::orthant(3);
  CHECK(p.inequalities().size() == 3);
  CHECK(p.equalities().empty());
  for (const auto& h : p.inequalities()) {
    CHECK(h.b == 0);
    CHECK(h.a.sum() == 1);
  }
}

TEST_CASE("redundant constraint is removed") {
  auto p = Polyhedron::from_halfspaces(1, {ge({1}, -1), ge({1}, 0)});
  REQUIRE(p.inequalities().size() == 1);
  CHECK(p.inequalities()[0].a == vec({1}));
  CHECK(p.inequalities()[0].b == 0);
}

TEST_CASE("unit square H to V gives four vertices") {
  auto p = Polyhedron::from_halfspaces(2, {ge({1, 0}, 0), ge({0, 1}, 0), ge({-1, 0}, -1), ge({0, -1}, -1)});
  REQUIRE(p.vertices().size() == 4);
  CHECK(p.vertices()[0] == vec({0, 0}));
  CHECK(p.vertices()[1] == vec({0, 1}));
  CHECK(p.vertices()[2] == vec({1, 0}));
  CHECK(p.vertices()[3] == vec({1, 1}));
  CHECK(p.is_bounded());
}

TEST_CASE("half-space in 2D has no proper vertex, one ray and one line") {
  // x + 2y >= 3: hand enumeration gives lineality (2,-1) and ray (1,2)
  // modulo the line; canonical vertex reduced modulo the line pivot.
  auto p = Polyhedron::from_halfspaces(2, {ge({1, 2}, 3)});
  REQUIRE(p.lines().size() == 1);
  CHECK(p.lines()[0] == vec({2, -1}));
  REQUIRE(p.rays().size() == 1);
  // Ray reduced modulo the line pivot (first coordinate): (0, 1).
  CHECK(p.rays()[0] == vec({0, 1}));
  REQUIRE(p.vertices().size() == 1);
  CHECK(p.vertices()[0] == vec({0, q("3/2")}));
  CHECK(contains_point(p, vec({3, 0})));
  CHECK_FALSE(contains_point(p, vec({0, 1})));
}

TEST_CASE("empty and universe are canonical") {
  auto e = Polyhedron::from_halfspaces(2, {ge({1, 0}, 1), ge({-1, 0}, 0)});
  CHECK(e.is_empty());
  REQUIRE(e.inequalities().size() == 1);
  CHECK(e.inequalities()[0].a == vec({0, 0}));
  CHECK(e.inequalities()[0].b == 1);
  CHECK(e.vertices().empty());
  auto u = Polyhedron::universe(2);
  CHECK(u.inequalities().empty());
  CHECK(u.lines().size() == 2);
  CHECK(set_equal(Polyhedron::empty(2), e));
}

TEST_CASE("implicit equalities are detected") {
  auto p = Polyhedron::from_halfspaces(2, {ge({1, 1}, 1), ge({-1, -1}, -1), ge({1, 0}, 0), ge({0, 1}, 0)});
  REQUIRE(p.equalities().size() == 1);
  CHECK(p.equalities()[0].a == vec({1, 1}));
  CHECK(p.equalities()[0].b == 1);
  CHECK(p.vertices().size() == 2);
}

TEST_CASE("minkowski sum") {
  auto i01 = Polyhedron::from_generators(1, {vec({0}), vec({1})});
  auto s = minkowski_sum(i01, i01);
  CHECK(set_equal(s, Polyhedron::from_generators(1, {vec({0}), vec({2})})));
  auto tri = Polyhedron::from_generators(2, {vec({0, 0}), vec({1, 0}), vec({0, 1})});
  CHECK(set_equal(minkowski_sum(tri, Polyhedron::point(vec({0, 0}))), tri));
}

TEST_CASE("minkowski sum: triangle plus ray against grid oracle") {
  auto tri = Polyhedron::from_generators(2, {vec({0, 0}), vec({2, 0}), vec({0, 1})});
  auto ray = Polyhedron::from_generators(2, {vec({0, 0})}, {vec({1, 1})});
  auto sum = minkowski_sum(tri, ray);
  // Oracle: x in sum iff exists t >= 0 with x - t(1,1) in tri. Sample t on a
  // fine grid; tri membership is three linear inequalities.
  auto in_tri = [](const Rational& x, const Rational& y) { return x >= 0 && y >= 0 && x + 2 * y <= 2; };
  int mismatches = 0;
  for (int i = -8; i <= 16; ++i) {
    for (int j = -8; j <= 16; ++j) {
      Rational x(i, 4), y(j, 4);
      bool oracle = false;
      for (int k = 0; k <= 96 && !oracle; ++k) {
        Rational t(k, 16);
        oracle = in_tri(x - t, y - t);
      }
      if (oracle != contains_point(sum, vec({x, y}))) ++mismatches;
    }
  }
  CHECK(mismatches == 0);
}

TEST_CASE("intersection and containment") {
  auto o = Polyhedron::orthant(2);
  CHECK(set_equal(intersect(o, o), o));
  auto half = Polyhedron::from_halfspaces(2, {ge({1, 1}, 0)});
  CHECK(contains_set(half, o));
  CHECK_FALSE(contains_set(o, half));
  auto cert = find_separation(o, half);
  REQUIRE(cert.has_value());
  CHECK(support_value(half, cert->constraint.a) < ExtendedRational(cert->constraint.b));
}

TEST_CASE("projection") {
  auto sq = Polyhedron::from_halfspaces(2, {ge({1, 0}, 0), ge({0, 1}, 0), ge({-1, 0}, -1), ge({0, -1}, -1)});
  CHECK(set_equal(project(sq, {0}), Polyhedron::from_generators(1, {vec({0}), vec({1})})));
  // {(x,z): 0 <= z <= 1, x + z >= 1}: eliminating z by hand gives x >= 0.
  auto p = Polyhedron::from_halfspaces(2, {ge({0, 1}, 0), ge({0, -1}, -1), ge({1, 1}, 1)});
  CHECK(set_equal(project(p, {0}), Polyhedron::from_halfspaces(1, {ge({1}, 0)})));
  auto tri = Polyhedron::from_generators(2, {vec({0, 0}), vec({1, 0}), vec({0, 1})});
  auto lifted = product(tri, Polyhedron::point(vec({0})));
  CHECK(set_equal(project(lifted, {0, 1}), tri));
}

TEST_CASE("support values") {
  auto o = Polyhedron::orthant(3);
  CHECK(support_value(o, vec({1, 1, 1})) == ExtendedRational(0));
  CHECK(support_value(o, vec({1, -1, 1})).is_neg_inf());
  CHECK_THROWS_AS(support_value(Polyhedron::empty(2), vec({1, 0})), PreconditionViolation);
  auto p = Polyhedron::from_generators(2, {vec({1, 2}), vec({-1, 3}), vec({2, -1})});
  // Oracle: minimum over vertices.
  Vector a = vec({3, 1});
  Rational best = a.dot(vec({1, 2}));
  for (const auto& v : {vec({-1, 3}), vec({2, -1})}) best = std::min(best, Rational(a.dot(v)));
  CHECK(support_value(p, a) == ExtendedRational(best));
  // Second oracle: simplex over the H-representation.
  auto lp = lp_minimize<Rational>(a, p.inequalities(), p.equalities());
  REQUIRE(lp.status == LpResult<Rational>::Status::Optimal);
  CHECK(lp.value == best);
}

TEST_CASE("dual cones") {
  auto o = Polyhedron::orthant(2);
  CHECK(set_equal(positive_dual_cone(o), o));
  CHECK(set_equal(positive_dual_cone(Polyhedron::point(vec({0, 0}))), Polyhedron::universe(2)));
  auto c = Polyhedron::from_generators(2, {vec({0, 0})}, {vec({2, 1}), vec({1, 2})});
  // Normals of the generators: (-1,2) and (2,-1).
  auto expected = Polyhedron::from_generators(2, {vec({0, 0})}, {vec({-1, 2}), vec({2, -1})});
  CHECK(set_equal(positive_dual_cone(c), expected));
  CHECK_THROWS_AS(positive_dual_cone(Polyhedron::point(vec({1, 0}))), PreconditionViolation);
  auto shifted = Polyhedron::from_halfspaces(2, {ge({1, 0}, 1), ge({0, 1}, -2)});
  CHECK(set_equal(recession_cone(shifted), o));
}

TEST_CASE("affine maps") {
  auto sq = Polyhedron::from_generators(2, {vec({0, 0}), vec({1, 0}), vec({0, 1}), vec({1, 1})});
  auto moved = translate(sq, vec({1, -1}));
  CHECK(contains_point(moved, vec({2, 0})));
  CHECK_FALSE(contains_point(moved, vec({0, 0})));
  auto big = scale(sq, Rational(2));
  CHECK(contains_point(big, vec({2, 2})));
  Matrix m(2, 2);
  m << Rational(1), Rational(1), Rational(0), Rational(1);
  auto pre = affine_preimage(sq, m, vec({0, 0}));
  CHECK(contains_point(pre, vec({0, 1})));
  CHECK_FALSE(contains_point(pre, vec({1, 1})));
}

TEST_CASE("deterministic canonical form") {
  auto a = Polyhedron::from_halfspaces(2, {ge({0, 1}, 0), ge({1, 0}, 0), ge({2, 2}, 1)});
  auto b = Polyhedron::from_halfspaces(2, {ge({4, 4}, 2), ge({1, 0}, 0), ge({0, 3}, 0), ge({1, 0}, -5)});
  REQUIRE(a.inequalities().size() == b.inequalities().size());
  for (std::size_t i = 0; i < a.inequalities().size(); ++i) {
    CHECK(a.inequalities()[i].a == b.inequalities()[i].a);
    CHECK(a.inequalities()[i].b == b.inequalities()[i].b);
  }
  CHECK(a.vertices() == b.vertices());
  CHECK(a.rays() == b.rays());
}
