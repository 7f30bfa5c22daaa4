#include "doctest.h"
#include "fixtures.hpp"
#include "setrisk/error.hpp"

using namespace setrisk;
using namespace testutil;

namespace {

DualPair physical_pair(const ScenarioTree& tree, int t, const Vector& w) {
  return DualPair{t, VectorMeasure::physical(tree), AdaptedVector::constant(tree, t, w)};
}

// Random pair in W_t: a nonnegative weight process at the horizon turned
// into (Q, w) by pair_from_weights.
std::optional<DualPair> random_pair(const ScenarioTree& tree, int t, int m, std::mt19937& rng) {
  AdaptedVector y = random_adapted(tree, tree.horizon(), rng, 0, 3);
  return pair_from_weights(tree, y, t, m);
}

// Matrix of u -> E^Q_t[u] from time-s eligible coordinates to time-t
// eligible coordinates.
Matrix q_expectation_matrix(const ScenarioTree& tree, const VectorMeasure& q, int t, int s, int m) {
  const Eigen::Index rows = m * tree.layer_size(t), cols = m * tree.layer_size(s);
  Matrix out = Matrix::Zero(rows, cols);
  Matrix elig_s = eligible_embedding(tree, s, m);
  for (Eigen::Index c = 0; c < cols; ++c) {
    AdaptedVector e = AdaptedVector::unflatten(tree, s, Vector(elig_s.col(c)));
    Vector img = conditional_expectation(tree, e, q, t).flatten();
    for (Eigen::Index k = 0; k < tree.layer_size(t); ++k)
      for (Eigen::Index i = 0; i < m; ++i) out(k * m + i, c) = img[k * tree.d() + i];
  }
  return out;
}

}  // namespace

TEST_CASE("weight_process examples") {
  std::mt19937 rng(3);
  auto tree = binomial(2, 2);
  auto qm = random_measure(tree, rng);
  AdaptedVector w = random_adapted(tree, 1, rng, 0, 2);
  DualPair pair{1, qm, w};
  CHECK(weight_process(tree, pair, 1) == w);
  DualPair phys{1, VectorMeasure::physical(tree), w};
  CHECK(weight_process(tree, phys, 2) == AdaptedVector::unflatten(tree, 2, embedding(tree, 1, 2) * w.flatten()));

  auto small = two_leaf(1);
  DualPair p2{0, VectorMeasure(small, {vec({0}), vec({2})}), AdaptedVector::constant(small, 0, vec({1}))};
  auto ws = weight_process(small, p2, 1);
  CHECK(ws.values[0] == vec({0}));
  CHECK(ws.values[1] == vec({2}));
}

TEST_CASE("in_W examples") {
  auto tree = binomial(2, 2);
  for (int t = 0; t <= 2; ++t) {
    CHECK(in_W(tree, physical_pair(tree, t, vec({1, 0})), 1));
    CHECK(in_W(tree, physical_pair(tree, t, vec({q("1/2"), 3})), 2));
  }
  auto small = two_leaf(1);
  DualPair bad{1, VectorMeasure(small, {vec({0}), vec({2})}),
               AdaptedVector::constant(small, 1, vec({1}))};
  auto mem = in_W(small, bad, 1);
  CHECK_FALSE(mem);
  CHECK(mem.violation == DualViolation::NotRestrictedToP);

  auto orth = in_W(tree, physical_pair(tree, 0, vec({0, 1})), 1);
  CHECK(orth.violation == DualViolation::OrthogonalWeight);
  auto neg = in_W(tree, physical_pair(tree, 0, vec({-1, 1})), 2);
  CHECK(neg.violation == DualViolation::NegativeEligible);
  // Negative weight on a non-eligible component fails only at the horizon.
  auto term = in_W(tree, physical_pair(tree, 0, vec({1, -1})), 1);
  CHECK(term.violation == DualViolation::NegativeTerminal);
  CHECK(in_W_stepped(tree, physical_pair(tree, 0, vec({1, -1})), 1, 1));
}

TEST_CASE("in_W_max for superhedging with weights in the dual cones") {
  auto tree = binomial(2, 2);
  auto cones = bid_ask_cones(tree);
  Superhedging shp(tree, cones);
  // A weight in every K^+ along the tree: the direction (1,1) lies in the
  // dual of each bid-ask cone built by the fixture.
  for (int t = 0; t <= 2; ++t) {
    auto pair = physical_pair(tree, t, vec({1, 1}));
    CHECK(in_W_max(tree, pair, shp.acceptance_set(t), 2));
  }
  // (1,0) is not in the dual of a cone containing (1,-1) and (-1,b) rays
  // with b > 1: support value -inf.
  auto outside = physical_pair(tree, 0, vec({0, 1}));
  auto mem = in_W_max(tree, outside, shp.acceptance_set(0), 2);
  CHECK(mem.violation == DualViolation::OutsideDualCone);
}

TEST_CASE("halfspace_G and halfspace_Gamma examples") {
  ScenarioTree root({{"r", std::nullopt, 0, 1}}, 2);
  auto g = halfspace_G(root, AdaptedVector::constant(root, 0, vec({1, 0})), 2);
  CHECK(set_equal(g, Polyhedron::from_halfspaces(2, {ge({1, 0}, 0)})));

  auto tree = full_tree(1, 1, {q("1/3"), q("2/3")});
  AdaptedVector w = AdaptedVector::constant(tree, 1, vec({1}));
  CHECK(set_equal(halfspace_G(tree, w, 1), Polyhedron::from_halfspaces(2, {ge({1, 2}, 0)})));
  auto gamma = halfspace_Gamma(tree, w, 1);
  REQUIRE(gamma.size() == 2);
  CHECK(set_equal(join_nodes(gamma), Polyhedron::orthant(2)));

  AdaptedVector partial{1, {vec({0}), vec({2})}};
  auto gp = halfspace_Gamma(tree, partial, 1);
  CHECK(set_equal(gp[0], Polyhedron::universe(1)));
  CHECK_THROWS_AS(halfspace_G(tree, AdaptedVector::zero(tree, 1), 1), OrthogonalWeight);
  CHECK_THROWS_AS(halfspace_Gamma(tree, AdaptedVector::zero(tree, 1), 1), OrthogonalWeight);
}

TEST_CASE("penalty_value examples") {
  std::mt19937 rng(5);
  auto tree = binomial(2, 2);
  const Eigen::Index dim = 2 * tree.layer_size(2);
  AcceptanceSet orth{2, Polyhedron::orthant(dim)};
  for (int rep = 0; rep < 5; ++rep) {
    auto pair = random_pair(tree, rep % 3, 2, rng);
    REQUIRE(pair);
    CHECK(penalty_value(tree, orth, *pair) == ExtendedRational(0));
  }
  // Orthant shifted by k: with Q = P and w = 1 the offset is E[1.k].
  AdaptedVector k = random_adapted(tree, 2, rng);
  AcceptanceSet shifted{2, translate(Polyhedron::orthant(dim), k.flatten())};
  Rational expected = 0;
  for (Eigen::Index leaf : tree.leaves()) expected += tree.prob(leaf) * k.at(tree, leaf).sum();
  CHECK(penalty_value(tree, shifted, physical_pair(tree, 0, vec({1, 1}))) == ExtendedRational(expected));
  // Conditional version at t = 1: one offset per node.
  auto cond = conditional_penalty_value(tree, shifted, physical_pair(tree, 1, vec({1, 1})));
  REQUIRE(cond.size() == 2);
  for (Eigen::Index n : tree.nodes_at(1)) {
    Rational e = 0;
    for (Eigen::Index leaf : tree.descendants_at(n, 2)) e += tree.cond_prob(leaf, n) * k.at(tree, leaf).sum();
    CHECK(cond[static_cast<std::size_t>(tree.layer_pos(n))] == ExtendedRational(e));
  }
  // Coherent set, pair outside the maximal family: -inf.
  Superhedging shp(tree, bid_ask_cones(tree));
  CHECK(penalty_value(tree, shp.acceptance_set(0), physical_pair(tree, 0, vec({0, 1}))).is_neg_inf());
}

TEST_CASE("evaluate_dual_representation examples") {
  auto tree = binomial(1, 2);
  std::vector<WeightedPair> fam{{physical_pair(tree, 0, vec({1, 0})), ExtendedRational(0)}};
  auto v = evaluate_dual_representation(tree, fam, AdaptedVector::zero(tree, 1), 2);
  CHECK(set_equal(v, Polyhedron::from_halfspaces(2, {ge({1, 0}, 0)})));

  std::mt19937 rng(9);
  auto deep = binomial(2, 2);
  std::vector<WeightedPair> family;
  for (int rep = 0; rep < 4; ++rep)
    if (auto p = random_pair(deep, 1, 2, rng)) family.push_back({*p, ExtendedRational(random_rational(rng, -2, 0))});
  family.push_back({physical_pair(deep, 1, vec({1, 1})), ExtendedRational::neg_inf()});
  auto x = random_adapted(deep, 2, rng);
  auto m1 = random_adapted(deep, 1, rng);
  auto base = evaluate_dual_representation(deep, family, x, 2);
  auto moved = evaluate_dual_representation(deep, family, x + AdaptedVector::unflatten(deep, 2, embedding(deep, 1, 2) * m1.flatten()), 2);
  CHECK(set_equal(moved, translate(base, Vector(-m1.flatten()))));
  CHECK_THROWS_AS(evaluate_dual_representation(deep, {}, x, 2), InvalidInput);
  family.push_back({physical_pair(deep, 1, vec({1, 1})), ExtendedRational::pos_inf()});
  CHECK(evaluate_dual_representation(deep, family, x, 2).is_empty());
}

TEST_CASE("H_operator examples") {
  std::mt19937 rng(15);
  auto tree = binomial(2, 1);
  auto everything = [&](const DualPair& p) { return static_cast<bool>(in_W(tree, p, 1)); };
  auto nothing = [](const DualPair&) { return false; };
  auto h_all = H_operator(tree, everything, 0, 1, 1);
  auto h_none = H_operator(tree, nothing, 0, 1, 1);
  for (int rep = 0; rep < 10; ++rep) {
    auto p = random_pair(tree, 0, 1, rng);
    REQUIRE(p);
    CHECK(h_all(*p) == static_cast<bool>(in_W(tree, *p, 1)));
    CHECK_FALSE(h_none(*p));
  }
  CHECK_THROWS_AS(H_operator(tree, everything, 1, 1, 1), PreconditionViolation);
}

TEST_CASE("H_operator chain reproduces the composed avar density bounds") {
  std::mt19937 rng(21);
  auto tree = binomial(2, 1);
  const Rational lambda = q("1/2");
  auto params = AvarParams::constant(tree, lambda);
  AcceptanceSet a1 = avar_acceptance(tree, params, 1);
  AcceptanceSet a01 = avar_stepped_acceptance(tree, params, 0, 1, 1);
  auto w1max = [&](const DualPair& p) { return static_cast<bool>(in_W_max(tree, p, a1, 1)); };
  auto h = H_operator(tree, w1max, 0, 1, 1);
  int members = 0, rejected = 0;
  for (int rep = 0; rep < 60; ++rep) {
    auto p = random_pair(tree, 0, 1, rng);
    REQUIRE(p);
    const bool composed = in_W_max(tree, *p, a01, 1) && h(*p);
    // Direct form: xi_{s,s+1} <= 1/lambda wherever the weight w_0^s is positive.
    bool direct = true;
    for (int s = 0; s < 2; ++s) {
      auto ws = weight_process(tree, *p, s);
      auto step = xi(tree, p->q, s, s + 1);
      for (Eigen::Index k : tree.nodes_at(s + 1))
        if (ws.at(tree, tree.parent(k))[0] > 0 && step.at(tree, k)[0] > 1 / lambda) direct = false;
    }
    CHECK(composed == direct);
    (composed ? members : rejected)++;
  }
  CHECK(members > 0);
  CHECK(rejected > 0);
}

TEST_CASE("projected pairs stay dual variables and keep penalties") {
  std::mt19937 rng(25);
  auto tree = full_tree(2, 2, {q("1/4"), q("1/4"), q("1/2")});
  auto params = AvarParams::constant(tree, q("1/3"));
  std::vector<AcceptanceSet> sets;
  for (int s = 0; s <= 2; ++s) sets.push_back(avar_acceptance(tree, params, s));
  for (int rep = 0; rep < 10; ++rep) {
    auto p = random_pair(tree, 0, 2, rng);
    REQUIRE(p);
    REQUIRE(in_W(tree, *p, 2));
    for (int s = 0; s <= 2; ++s) {
      auto proj = project_pair(tree, *p, s);
      if (!in_W(tree, proj, 2)) {
        // The projection can only fail by vanishing weight.
        CHECK(in_W(tree, proj, 2).violation == DualViolation::OrthogonalWeight);
        continue;
      }
      const auto& as = sets[static_cast<std::size_t>(s)];
      CHECK(penalty_value(tree, as, *p) == penalty_value(tree, as, proj));
    }
  }
}

TEST_CASE("conditional expectation maps G_s(w_t^s) onto G_t(w)") {
  std::mt19937 rng(27);
  auto tree = binomial(2, 2);
  for (int m = 1; m <= 2; ++m) {
    for (int rep = 0; rep < 6; ++rep) {
      auto qm = random_measure(tree, rng, rep % 2 == 1);
      AdaptedVector w = random_adapted(tree, 0, rng, 0, 2);
      w.values[0][0] += 1;
      DualPair pair{0, qm, w};
      for (int s = 1; s <= 2; ++s) {
        Matrix e = q_expectation_matrix(tree, qm, 0, s, m);
        auto ws = weight_process(tree, pair, s);
        auto img = linear_image(halfspace_G(tree, ws, m), e, Vector(Vector::Zero(m)));
        CHECK(set_equal(img, halfspace_G(tree, w, m)));
      }
    }
  }
}

TEST_CASE("conditional expectation maps Gamma_s onto Gamma_t for equivalent Q") {
  std::mt19937 rng(33);
  auto tree = binomial(2, 2);
  for (int rep = 0; rep < 6; ++rep) {
    auto qm = random_measure(tree, rng);
    AdaptedVector w = random_adapted(tree, 1, rng, 0, 2);
    for (auto& v : w.values) v[1] += 1;
    DualPair pair{1, qm, w};
    Matrix e = q_expectation_matrix(tree, qm, 1, 2, 2);
    auto ws = weight_process(tree, pair, 2);
    auto img = linear_image(join_nodes(halfspace_Gamma(tree, ws, 2)), e, Vector(Vector::Zero(4)));
    CHECK(set_equal(img, join_nodes(halfspace_Gamma(tree, w, 2))));
  }
}

TEST_CASE("half-spaces along one direction add their offsets") {
  const Vector a = vec({1, 2});
  auto hs = [&](const Rational& c) { return Polyhedron::from_halfspaces(2, {{a, c}}); };
  CHECK(set_equal(minkowski_sum(hs(q("-1/2")), hs(3)), hs(q("5/2"))));
  CHECK(set_equal(minkowski_sum(hs(1), Polyhedron::universe(2)), Polyhedron::universe(2)));
  CHECK(ExtendedRational(1) + ExtendedRational::neg_inf() == ExtendedRational::neg_inf());
}
