#ifndef SETRISK_DUAL_HPP
#define SETRISK_DUAL_HPP

#include <functional>
#include <string>
#include <vector>

#include "setrisk/acceptance_set.hpp"
#include "setrisk/polyhedron.hpp"
#include "setrisk/scenario_tree.hpp"

namespace setrisk {

/// (Q, w) at base time t: a vector measure and a weight vector per time-t
/// node. The first m components are the eligible ones.
struct DualPair {
  int t = 0;
  VectorMeasure q;
  AdaptedVector w;
};

/// w_t^s(Q,w) = diag(w) xi_{t,s}(Q) at every time-s node.
AdaptedVector weight_process(const ScenarioTree& tree, const DualPair& pair, int s);

/// Projected pair (Q^s, w_t^s(Q,w)) at time s.
DualPair project_pair(const ScenarioTree& tree, const DualPair& pair, int s);

enum class DualViolation {
  None,
  NotRestrictedToP,     // Q differs from P on F_t
  NegativeEligible,     // w outside the dual of the eligible orthant
  OrthogonalWeight,     // w vanishes on every eligible coordinate
  NegativeTerminal,     // w_t^T has a negative component
  NegativeStepped,      // w_t^s negative on an eligible coordinate
  OutsideDualCone,      // weight process outside A^+ (max variants)
};

std::string to_string(DualViolation v);

struct Membership {
  bool member = true;
  DualViolation violation = DualViolation::None;
  std::string detail;
  explicit operator bool() const { return member; }
};

/// (Q,w) in W_t.
Membership in_W(const ScenarioTree& tree, const DualPair& pair, int m);
/// (Q,w) in W_{t,s}.
Membership in_W_stepped(const ScenarioTree& tree, const DualPair& pair, int s, int m);
/// (Q,w) in W_t^max for A = A_t (payoff time T) or in W_{t,s}^max for A =
/// A_{t,s} (payoff time s): the structural test plus
/// support_value(A, weights at the payoff time) >= 0.
Membership in_W_max(const ScenarioTree& tree, const DualPair& pair, const AcceptanceSet& a, int m);

/// Penalty offset c with -beta_t^min(Q,w) = {u in M_t : c <= E[w.u]}; -inf
/// means all of M_t. Throws PreconditionViolation on an empty set.
ExtendedRational penalty_value(const ScenarioTree& tree, const AcceptanceSet& a, const DualPair& pair);

/// Per time-t node offsets c(n) with -alpha_t^min(Q,w) = {u: c(n) <= w(n).u(n)}.
std::vector<ExtendedRational> conditional_penalty_value(const ScenarioTree& tree, const AcceptanceSet& a,
                                                        const DualPair& pair);

/// G_t(w) = {u in M_t : E[w.u] >= 0} in time-t eligible coordinates (m per
/// node). Throws OrthogonalWeight when w vanishes on the eligible part.
Polyhedron halfspace_G(const ScenarioTree& tree, const AdaptedVector& w, int m);
/// Gamma_t(w): one half-space {u(n) : w(n).u(n) >= 0} in R^m per time-t node
/// (all of R^m where w(n) vanishes on the eligible part).
std::vector<Polyhedron> halfspace_Gamma(const ScenarioTree& tree, const AdaptedVector& w, int m);

struct WeightedPair {
  DualPair pair;
  ExtendedRational penalty;
};

/// Intersection over the family of {u in M_t : E[w.u] >= E[w.E^Q_t[-X]] + c}.
/// Pairs with c = -inf contribute M_t. Throws InvalidInput on an empty family.
Polyhedron evaluate_dual_representation(const ScenarioTree& tree, const std::vector<WeightedPair>& pairs,
                                        const AdaptedVector& x, int m);

/// Predicate over dual pairs at a fixed base time.
using DualPredicate = std::function<bool(const DualPair&)>;

/// H_t^s(D) = {(Q,w) in W_t : (Q^s, w_t^s(Q,w)) in D}. The tree must outlive
/// the returned predicate.
DualPredicate H_operator(const ScenarioTree& tree, DualPredicate d, int t, int s, int m);

/// Dual pairs at time t built from the facet normals of A. A normal a is read
/// as the weight process Y = a / P at A's payoff time; w = E_t[Y] and
/// xi_{t,s} = Y / E_t[Y]. Normals with a negative entry and normals whose w
/// vanishes on the eligible part are skipped.
std::vector<DualPair> facet_pairs(const ScenarioTree& tree, const AcceptanceSet& a, int t, int m);

/// The pair whose weight process at time s equals y (y >= 0), based at t.
/// Returns nothing when E_t[y] vanishes on the eligible part.
std::optional<DualPair> pair_from_weights(const ScenarioTree& tree, const AdaptedVector& y, int t, int m);

}  // namespace setrisk

#endif  // SETRISK_DUAL_HPP
