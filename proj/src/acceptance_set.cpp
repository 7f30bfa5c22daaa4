#include "setrisk/acceptance_set.hpp"

#include "setrisk/error.hpp"

namespace setrisk {

AcceptanceSet embed(const ScenarioTree& tree, const AcceptanceSet& a, int r) {
  if (r == a.payoff_time) return a;
  Matrix j = embedding(tree, a.payoff_time, r);
  return {r, linear_image(a.set, j, Vector(Vector::Zero(j.rows())))};
}

AcceptanceSet restrict_to_time(const ScenarioTree& tree, const AcceptanceSet& a, int s, int m) {
  if (s > a.payoff_time) throw InvalidInput("restriction time after payoff time");
  Matrix j = embedding(tree, s, a.payoff_time);
  Polyhedron pre = affine_preimage(a.set, j, Vector(Vector::Zero(j.rows())));
  const Eigen::Index d = tree.d();
  if (m < d) {
    std::vector<HalfSpace<Rational>> eq;
    for (Eigen::Index k = 0; k < tree.layer_size(s); ++k)
      for (Eigen::Index i = m; i < d; ++i) eq.push_back({unit_vector(pre.dim(), k * d + i), Rational(0)});
    pre = intersect(pre, Polyhedron::from_halfspaces(pre.dim(), {}, std::move(eq)));
  }
  return {s, pre};
}

AcceptanceSet sum(const ScenarioTree& tree, const AcceptanceSet& a, const AcceptanceSet& b) {
  const int r = std::max(a.payoff_time, b.payoff_time);
  return {r, minkowski_sum(embed(tree, a, r).set, embed(tree, b, r).set)};
}

bool set_equal(const ScenarioTree& tree, const AcceptanceSet& a, const AcceptanceSet& b) {
  const int r = std::max(a.payoff_time, b.payoff_time);
  return set_equal(embed(tree, a, r).set, embed(tree, b, r).set);
}

}  // namespace setrisk
