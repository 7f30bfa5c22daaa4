#ifndef SETRISK_AXIOMS_HPP
#define SETRISK_AXIOMS_HPP

#include <vector>

#include "setrisk/consistency.hpp"

namespace setrisk {

// Axiom checks on single instances. Rational routes compare exactly; the
// entropic variants compare the point rho_t within `tol` per coordinate.

/// R_t(X + m) = R_t(X) - m for m adapted at t with eligible support.
ConsistencyReport check_translativity(const RiskMeasure& r, const AdaptedVector& x, const AdaptedVector& m, int t);
/// X <= Y componentwise implies R_t(X) ⊆ R_t(Y). Throws PreconditionViolation
/// unless X <= Y.
ConsistencyReport check_monotonicity(const RiskMeasure& r, const AdaptedVector& x, const AdaptedVector& y, int t);
/// R_t(X) = R_t(X) + R_t(0).
ConsistencyReport check_normalization(const RiskMeasure& r, const AdaptedVector& x, int t);
/// With Z = X below the time-t nodes in `on` and Y elsewhere, the node factors
/// of R_t(Z) are those of R_t(X) on `on` and of R_t(Y) off it.
ConsistencyReport check_decomposability(const RiskMeasure& r, const AdaptedVector& x, const AdaptedVector& y,
                                        const std::vector<bool>& on, int t);
/// R_t(k X) = k R_t(X) nodewise for a positive scalar k per time-t node.
ConsistencyReport check_positive_homogeneity(const RiskMeasure& r, const AdaptedVector& x,
                                             const std::vector<Rational>& k, int t);

ConsistencyReport check_entropic_translativity(const ScenarioTree& tree, const EntropicParams& params,
                                               const RealAdapted& x, const RealAdapted& m, int t, double tol);
ConsistencyReport check_entropic_monotonicity(const ScenarioTree& tree, const EntropicParams& params,
                                              const RealAdapted& x, const RealAdapted& y, int t, double tol);
ConsistencyReport check_entropic_decomposability(const ScenarioTree& tree, const EntropicParams& params,
                                                 const RealAdapted& x, const RealAdapted& y,
                                                 const std::vector<bool>& on, int t, double tol);

}  // namespace setrisk

#endif  // SETRISK_AXIOMS_HPP
