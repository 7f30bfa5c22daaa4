#ifndef SETRISK_TEST_FIXTURES_HPP
#define SETRISK_TEST_FIXTURES_HPP

#include <random>
#include <string>
#include <vector>

#include "setrisk/measures.hpp"
#include "setrisk/scenario_tree.hpp"
#include "test_util.hpp"

namespace testutil {

using setrisk::AdaptedVector;
using setrisk::NodeSets;
using setrisk::Polyhedron;
using setrisk::ScenarioTree;
using setrisk::VectorMeasure;

// Complete tree with `branching` children per node and `periods` steps.
// Child probabilities are `probs` (must sum to 1). Ids append the child
// index to the parent id: "r", "r0", "r1", "r00", ...
inline ScenarioTree full_tree(int periods, int d, const std::vector<Rational>& probs) {
  std::vector<ScenarioTree::NodeSpec> specs{{"r", std::nullopt, 0, Rational(1)}};
  std::vector<std::string> layer{"r"};
  for (int t = 1; t <= periods; ++t) {
    std::vector<std::string> next;
    for (const auto& p : layer)
      for (std::size_t k = 0; k < probs.size(); ++k) {
        std::string id = p + std::to_string(k);
        specs.push_back({id, p, t, probs[k]});
        next.push_back(id);
      }
    layer = std::move(next);
  }
  return ScenarioTree(std::move(specs), d);
}

inline ScenarioTree two_leaf(int d) { return full_tree(1, d, {q("1/2"), q("1/2")}); }
inline ScenarioTree binomial(int periods, int d) { return full_tree(periods, d, {q("1/3"), q("2/3")}); }

inline Rational random_rational(std::mt19937& rng, int lo, int hi, int den = 2) {
  std::uniform_int_distribution<int> dist(lo * den, hi * den);
  return Rational(dist(rng)) / den;
}

inline AdaptedVector random_adapted(const ScenarioTree& tree, int t, std::mt19937& rng, int lo = -3, int hi = 3) {
  AdaptedVector x = AdaptedVector::zero(tree, t);
  for (auto& v : x.values)
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = random_rational(rng, lo, hi);
  return x;
}

// Random equivalent vector measure: positive integer weights normalized per
// component.
inline VectorMeasure random_measure(const ScenarioTree& tree, std::mt19937& rng, bool allow_zero = false) {
  std::uniform_int_distribution<int> dist(allow_zero ? 0 : 1, 4);
  const auto& leaves = tree.leaves();
  std::vector<setrisk::Vector> dens(leaves.size(), setrisk::Vector::Zero(tree.d()));
  for (int i = 0; i < tree.d(); ++i) {
    Rational total = 0;
    while (total == 0) {
      for (std::size_t k = 0; k < leaves.size(); ++k) {
        dens[k][i] = dist(rng);
        total += tree.prob(leaves[k]) * dens[k][i];
      }
    }
    for (auto& v : dens) v[i] /= total;
  }
  return VectorMeasure(tree, std::move(dens));
}

// Two-asset bid-ask cone generated by (a,-1) and (-1,b) with ab > 1.
inline Polyhedron bid_ask_cone(const Rational& a, const Rational& b) {
  return Polyhedron::from_generators(2, {vec({0, 0})}, {vec({a, -1}), vec({-1, b})});
}

// Bid-ask cones whose exchange rates vary deterministically by node.
inline NodeSets bid_ask_cones(const ScenarioTree& tree) {
  NodeSets out;
  for (Eigen::Index n = 0; n < tree.num_nodes(); ++n) {
    Rational a = Rational(1) + Rational(static_cast<long>(n % 3)) / 4;
    Rational b = Rational(1) + Rational(static_cast<long>((n + 1) % 2) + 1) / 3;
    out.push_back(bid_ask_cone(a, b));
  }
  return out;
}

}  // namespace testutil

#endif  // SETRISK_TEST_FIXTURES_HPP
