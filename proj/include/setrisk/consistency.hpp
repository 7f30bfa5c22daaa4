#ifndef SETRISK_CONSISTENCY_HPP
#define SETRISK_CONSISTENCY_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "setrisk/dual.hpp"
#include "setrisk/measures.hpp"
#include "setrisk/risk_measure.hpp"

namespace setrisk {

enum class Verdict { Pass, Fail, Inapplicable };
std::string to_string(Verdict v);

/// Evidence attached to a failed (or notable) case. A set-inequality witness
/// carries a point of `sets[0]` outside `sets[1]` together with a constraint
/// a.x >= b of `sets[1]` that the point violates.
struct Witness {
  std::string description;
  std::optional<AdaptedVector> payoff;
  std::optional<DualPair> pair;
  std::optional<Vector> point;
  std::optional<HalfSpace<Rational>> separating;
  std::vector<Polyhedron> sets;
  std::vector<ExtendedRational> scalars;
};

struct ConsistencyReport {
  std::string check;
  Verdict verdict = Verdict::Pass;
  std::string detail;
  std::size_t cases = 0;  // number of individual comparisons performed
  std::vector<std::string> discharged;
  std::vector<std::string> assumptions;
  std::vector<Witness> witnesses;
  bool passed() const { return verdict == Verdict::Pass; }
};

/// A point of `subset` violating the certificate's constraint (rays and lines
/// are walked far enough from a vertex).
Vector separating_point(const Polyhedron& subset, const SeparationCertificate<Rational>& cert);

/// Independent re-check of a set-inequality witness: the point lies in
/// sets[0] and an LP over the H-representation of sets[1] has optimum >= b in
/// direction a while a.point < b.
bool reverify_witness(const Witness& w);

/// A_t = A_{t,s} + A_s, compared exactly. Requires t < s.
ConsistencyReport check_mptc_acceptance(const RiskMeasure& r, int t, int s);

/// R_t(X) against {u : exists Z in R_s(X), -Z + u in A_t}; the right side is
/// the projection of the polyhedron in (u, Z). Requires t < s.
ConsistencyReport check_recursion(const RiskMeasure& r, const AdaptedVector& x, int t, int s);

/// Scalar cocycle b_t = b_{t,s} + b_s for one pair in W_t, with
/// b_t = penalty(A_t, pair), b_{t,s} = penalty(A_{t,s}, pair) and
/// b_s = penalty(A_s, projected pair). Throws PreconditionViolation when the
/// pair is not in W_t.
ConsistencyReport check_cocycle(const RiskMeasure& r, const DualPair& pair, int s);

/// Facet-derived dual pairs at time t: normals of A_t, A_{t,s} + A_s and
/// A_{t,s}, deduplicated, restricted to W_t. For polyhedral acceptance sets
/// this family is sufficient for the cocycle equivalence.
std::vector<DualPair> cocycle_family(const RiskMeasure& r, int t, int s);

/// check_cocycle over cocycle_family; the verdict is Fail iff some pair fails.
ConsistencyReport check_cocycle_family(const RiskMeasure& r, int t, int s);

/// Nodewise cocycle for the conditional penalties:
/// c_t(n) = c_{t,s}(n) + sum_k P(k|n) c_s(k) over time-s nodes k below n.
ConsistencyReport check_conditional_cocycle(const RiskMeasure& r, const DualPair& pair, int s);

/// Relative-entropy chain rule H_{t,T} = H_{t,s} + E^Q_t[H_{s,T}] per node
/// and component within `tol`.
ConsistencyReport check_entropic_cocycle(const ScenarioTree& tree, const VectorMeasure& q, int t, int s, double tol);
/// rho_t(X) = rho_t(-rho_s(X)) per node and component within `tol`.
ConsistencyReport check_entropic_recursion(const ScenarioTree& tree, const EntropicParams& params,
                                           const RealAdapted& x, int t, int s, double tol);

/// Stability of the maximal dual set for a coherent measure:
/// (a) (Q,w) in W_t^max implies (Q^s, w_t^s) in W_s^max;
/// (b) (Q,w) in W_{t,s}^max and (R, w_t^s) in W_s^max imply
///     (paste(Q,R,s), w) in W_t^max.
/// Pasting partners R are the measures in `partners`. Throws
/// PreconditionViolation for a non-coherent measure.
ConsistencyReport check_stability(const RiskMeasure& r, int s, const std::vector<DualPair>& pairs,
                                  const std::vector<VectorMeasure>& partners);

/// Pasting partners for check_stability: measures of the facet pairs of A_s.
std::vector<VectorMeasure> stability_partners(const RiskMeasure& r, int s);

/// W_t^max = W_{t,s}^max ∩ H_t^s(W_s^max), tested pairwise.
ConsistencyReport check_Wmax_decomposition(const RiskMeasure& r, int s, const std::vector<DualPair>& pairs);

/// Backward composition of one-step sets.
std::unique_ptr<ComposedMeasure> compose(const ScenarioTree& tree, int m, OneStepFamily family, std::string name,
                                         bool coherent);

/// Composed penalty b~_t(pair) = b_{t,t+1}(pair) + b~_{t+1}(projected pair),
/// with b~_T the penalty of the terminal set.
ExtendedRational composed_penalty(const ComposedMeasure& r, const DualPair& pair);

/// W~_T^max for the terminal set, W~_t^max = W_{t,t+1}^max ∩ H_t^{t+1}(W~_{t+1}^max).
DualPredicate composed_max_predicate(const ComposedMeasure& r, int t);

/// R_t(0) is neither empty nor all of M_t at every time.
ConsistencyReport check_finiteness(const RiskMeasure& r);

/// Deterministic sweep for a payoff in exactly one of A_t and A_{t,s} + A_s.
/// Payoffs at the horizon are enumerated with entries from `grid`, the last
/// coordinate varying fastest.
ConsistencyReport acceptance_witness_sweep(const RiskMeasure& r, int t, int s, const std::vector<Rational>& grid);

}  // namespace setrisk

#endif  // SETRISK_CONSISTENCY_HPP
