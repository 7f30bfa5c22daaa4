#ifndef SETRISK_MEASURES_HPP
#define SETRISK_MEASURES_HPP

#include <memory>
#include <vector>

#include "setrisk/dual.hpp"
#include "setrisk/risk_measure.hpp"

namespace setrisk {

/// One polyhedron in R^d per tree node, indexed by node index.
using NodeSets = std::vector<Polyhedron>;

/// Throws InvalidInput unless every set is a cone at 0, contains the
/// nonnegative orthant and is not all of R^d.
void validate_solvency_cones(const ScenarioTree& tree, const NodeSets& cones);
/// As above without the cone requirement.
void validate_solvency_regions(const ScenarioTree& tree, const NodeSets& regions);

// ---------------------------------------------------------------------------
// Superhedging under proportional transaction costs (m = d).

/// A_t = sum_{s=t}^T L(K_s), generated directly from the cone generators.
AcceptanceSet shp_acceptance(const ScenarioTree& tree, const NodeSets& cones, int t);

/// SHP_t(Y) per time-t node by the backward nodewise recursion
/// V_T(n) = Y(n) + K_T(n), V_t(n) = (∩_children V_{t+1}(c)) + K_t(n).
/// Throws ModelInconsistency if an intersection is empty.
std::vector<Polyhedron> shp_value(const ScenarioTree& tree, const NodeSets& cones, const AdaptedVector& y, int t);

class Superhedging : public RiskMeasure {
 public:
  Superhedging(const ScenarioTree& tree, NodeSets cones);
  std::string name() const override { return "shp"; }
  bool is_coherent() const override { return true; }
  const NodeSets& cones() const { return cones_; }

 protected:
  AcceptanceSet build_acceptance(int t) const override;

 private:
  NodeSets cones_;
};

// ---------------------------------------------------------------------------
// Convex superhedging (m = d): composition of A_T = L(K_T) and
// A_{t,t+1} = L(K_t) + L_+(F_{t+1}).

/// L(K_s): the product of the time-s regions, in time-s coordinates.
AcceptanceSet selector_set(const ScenarioTree& tree, const NodeSets& regions, int s);
std::unique_ptr<ComposedMeasure> convex_superhedging(const ScenarioTree& tree, const NodeSets& regions);
/// CSHP_t(Y) per time-t node by the backward nodewise recursion
/// V_T(n) = Y(n) + K_T(n), V_t(n) = K_t(n) + ∩_children (V_{t+1}(c) + R^d_+).
std::vector<Polyhedron> convex_shp_value(const ScenarioTree& tree, const NodeSets& regions, const AdaptedVector& y,
                                         int t);

// ---------------------------------------------------------------------------
// Average value at risk.

/// lambda[n] in (0,1)^d for every node n; the value at a time-t node is the
/// parameter lambda^t there.
struct AvarParams {
  std::vector<Vector> lambda;
  static AvarParams constant(const ScenarioTree& tree, const Rational& value);
  void validate(const ScenarioTree& tree) const;
};

/// A_t = {X : exists Z >= 0 with X + Z >= E_t[Z] / lambda^t}, Z at the horizon.
AcceptanceSet avar_acceptance(const ScenarioTree& tree, const AvarParams& params, int t);
/// A_{t,s} in time-s coordinates with an F_s-measurable Z and X in M_s.
AcceptanceSet avar_stepped_acceptance(const ScenarioTree& tree, const AvarParams& params, int t, int s, int m);

class AverageValueAtRisk : public RiskMeasure {
 public:
  AverageValueAtRisk(const ScenarioTree& tree, AvarParams params, int m);
  std::string name() const override { return "avar"; }
  bool is_coherent() const override { return true; }
  const AvarParams& params() const { return params_; }

 protected:
  AcceptanceSet build_acceptance(int t) const override;

 private:
  AvarParams params_;
};

std::vector<Polyhedron> avar_value(const ScenarioTree& tree, const AvarParams& params, const AdaptedVector& x, int t,
                                   int m);

/// Dual family of AV@R_t for m = d: for each time-t node n and component i,
/// the vertices y of {0 <= y <= 1/lambda_i(n), E_n[y] = 1} as densities of
/// component i below n, paired with w = e_i at n.
std::vector<DualPair> avar_vertex_pairs(const ScenarioTree& tree, const AvarParams& params, int t);
/// AV@R_t(X) as the intersection over avar_vertex_pairs with zero penalties.
Polyhedron avar_dual_value(const ScenarioTree& tree, const AvarParams& params, const AdaptedVector& x, int t);

/// Composed AV@R: Ã_T = A_T, Ã_t = A^lambda_{t,t+1} + Ã_{t+1} with stepped
/// sets from avar_stepped_acceptance.
std::unique_ptr<ComposedMeasure> composed_avar(const ScenarioTree& tree, const AvarParams& params, int m);
std::vector<Polyhedron> composed_avar_value(const ScenarioTree& tree, const AvarParams& params, const AdaptedVector& x,
                                            int t, int m);

/// sup E[y_T . (-X)] over weight paths y with y_t = w, 0 <= y_{s+1} <=
/// y_s / lambda^s and E_s[y_{s+1}] = y_s (m = d). Computed by LP.
ExtendedRational composed_avar_dual_support(const ScenarioTree& tree, const AvarParams& params, const AdaptedVector& x,
                                            const AdaptedVector& w);

// ---------------------------------------------------------------------------
// Entropic risk measure (floating point, m = d, C = nonnegative orthant).

struct EntropicParams {
  Eigen::VectorXd lambda;  // strictly positive
  void validate(int d) const;
};

struct RealAdapted {
  int time = 0;
  std::vector<Eigen::VectorXd> values;
};

RealAdapted to_real(const AdaptedVector& x);

/// rho_t(X) = log(E_t[exp(-diag(lambda) X)]) / lambda per time-t node; the
/// value of the measure is rho_t(X) + R^d_+ at each node.
RealAdapted entropic_value(const ScenarioTree& tree, const EntropicParams& params, const RealAdapted& x, int t);

/// Relative entropy H_{t,s}(Q|P) = E^Q_t[log xi_{t,s}(Q)] per time-t node and
/// component, with 0 log 0 = 0.
RealAdapted relative_entropy(const ScenarioTree& tree, const VectorMeasure& q, int t, int s);
/// Minimal stepped penalty -H_{t,s} / lambda per time-t node.
RealAdapted entropic_penalty(const ScenarioTree& tree, const EntropicParams& params, const VectorMeasure& q, int t,
                             int s);

}  // namespace setrisk

#endif  // SETRISK_MEASURES_HPP
