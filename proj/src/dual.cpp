#include "setrisk/dual.hpp"

#include "setrisk/error.hpp"

namespace setrisk {

namespace {

bool eligible_zero(const Vector& v, int m) {
  for (Eigen::Index i = 0; i < m; ++i)
    if (v[i] != 0) return false;
  return true;
}

Membership fail(DualViolation v, std::string detail) { return {false, v, std::move(detail)}; }

void check_pair_shape(const ScenarioTree& tree, const DualPair& pair, int m) {
  if (m < 1 || m > tree.d()) throw InvalidInput("eligible count must be in 1..d");
  if (pair.w.time != pair.t || static_cast<Eigen::Index>(pair.w.values.size()) != tree.layer_size(pair.t))
    throw DimensionMismatch("dual weight must be adapted at the pair's base time");
}

// Structural part shared by W_t and W_{t,s}.
Membership check_base(const ScenarioTree& tree, const DualPair& pair, int m) {
  check_pair_shape(tree, pair, m);
  if (!restrict_equals_P(tree, pair.q, pair.t))
    return fail(DualViolation::NotRestrictedToP, "Q differs from P on F_" + std::to_string(pair.t));
  bool all_zero = true;
  for (Eigen::Index n : tree.nodes_at(pair.t)) {
    const Vector& w = pair.w.at(tree, n);
    for (Eigen::Index i = 0; i < m; ++i) {
      if (w[i] < 0)
        return fail(DualViolation::NegativeEligible,
                    "w[" + tree.id(n) + "][" + std::to_string(i) + "] = " + format_rational(w[i]));
    }
    if (!eligible_zero(w, m)) all_zero = false;
  }
  if (all_zero) return fail(DualViolation::OrthogonalWeight, "w vanishes on every eligible coordinate");
  return {};
}

}  // namespace

std::string to_string(DualViolation v) {
  switch (v) {
    case DualViolation::None: return "none";
    case DualViolation::NotRestrictedToP: return "not-restricted-to-P";
    case DualViolation::NegativeEligible: return "negative-eligible-weight";
    case DualViolation::OrthogonalWeight: return "orthogonal-weight";
    case DualViolation::NegativeTerminal: return "negative-terminal-weight";
    case DualViolation::NegativeStepped: return "negative-stepped-weight";
    case DualViolation::OutsideDualCone: return "outside-dual-cone";
  }
  return "unknown";
}

AdaptedVector weight_process(const ScenarioTree& tree, const DualPair& pair, int s) {
  if (s < pair.t) throw InvalidInput("weight process requires s >= t");
  DensityProcess dp(tree, pair.q);
  AdaptedVector out{s, {}};
  for (Eigen::Index k : tree.nodes_at(s))
    out.values.push_back(pair.w.at(tree, tree.ancestor(k, pair.t)).cwiseProduct(dp.xi_at(pair.t, k)));
  return out;
}

DualPair project_pair(const ScenarioTree& tree, const DualPair& pair, int s) {
  return DualPair{s, modify_after(tree, pair.q, s), weight_process(tree, pair, s)};
}

Membership in_W(const ScenarioTree& tree, const DualPair& pair, int m) {
  if (auto base = check_base(tree, pair, m); !base) return base;
  AdaptedVector wt = weight_process(tree, pair, tree.horizon());
  for (Eigen::Index k : tree.leaves()) {
    const Vector& v = wt.at(tree, k);
    for (Eigen::Index i = 0; i < v.size(); ++i)
      if (v[i] < 0)
        return fail(DualViolation::NegativeTerminal,
                    "w_t^T[" + tree.id(k) + "][" + std::to_string(i) + "] = " + format_rational(v[i]));
  }
  return {};
}

Membership in_W_stepped(const ScenarioTree& tree, const DualPair& pair, int s, int m) {
  if (auto base = check_base(tree, pair, m); !base) return base;
  AdaptedVector ws = weight_process(tree, pair, s);
  for (Eigen::Index k : tree.nodes_at(s)) {
    const Vector& v = ws.at(tree, k);
    for (Eigen::Index i = 0; i < m; ++i)
      if (v[i] < 0)
        return fail(DualViolation::NegativeStepped,
                    "w_t^s[" + tree.id(k) + "][" + std::to_string(i) + "] = " + format_rational(v[i]));
  }
  return {};
}

Membership in_W_max(const ScenarioTree& tree, const DualPair& pair, const AcceptanceSet& a, int m) {
  Membership base =
      a.payoff_time == tree.horizon() ? in_W(tree, pair, m) : in_W_stepped(tree, pair, a.payoff_time, m);
  if (!base) return base;
  ExtendedRational c = penalty_value(tree, a, pair);
  if (c < ExtendedRational(0))
    return fail(DualViolation::OutsideDualCone, "support value " + c.to_string() + " < 0");
  return {};
}

ExtendedRational penalty_value(const ScenarioTree& tree, const AcceptanceSet& a, const DualPair& pair) {
  Vector dir = probability_weighted(tree, weight_process(tree, pair, a.payoff_time));
  return support_value(a.set, dir);
}

std::vector<ExtendedRational> conditional_penalty_value(const ScenarioTree& tree, const AcceptanceSet& a,
                                                        const DualPair& pair) {
  const Eigen::Index d = tree.d();
  AdaptedVector ws = weight_process(tree, pair, a.payoff_time);
  Vector full = probability_weighted(tree, ws);
  std::vector<ExtendedRational> out;
  for (Eigen::Index n : tree.nodes_at(pair.t)) {
    Vector dir = Vector::Zero(full.size());
    for (Eigen::Index k : tree.descendants_at(n, a.payoff_time))
      dir.segment(tree.layer_pos(k) * d, d) = full.segment(tree.layer_pos(k) * d, d) / tree.prob(n);
    out.push_back(support_value(a.set, dir));
  }
  return out;
}

Polyhedron halfspace_G(const ScenarioTree& tree, const AdaptedVector& w, int m) {
  const Eigen::Index n = tree.layer_size(w.time);
  Vector a = Vector::Zero(m * n);
  for (Eigen::Index node : tree.nodes_at(w.time)) {
    const Eigen::Index p = tree.layer_pos(node);
    for (Eigen::Index i = 0; i < m; ++i) a[p * m + i] = tree.prob(node) * w.values[p][i];
  }
  if (is_zero(a)) throw OrthogonalWeight("G_" + std::to_string(w.time));
  return Polyhedron::from_halfspaces(m * n, {{a, Rational(0)}});
}

std::vector<Polyhedron> halfspace_Gamma(const ScenarioTree& tree, const AdaptedVector& w, int m) {
  std::vector<Polyhedron> out;
  bool all_zero = true;
  for (Eigen::Index node : tree.nodes_at(w.time)) {
    Vector a = w.at(tree, node).head(m);
    if (is_zero(a)) {
      out.push_back(Polyhedron::universe(m));
    } else {
      all_zero = false;
      out.push_back(Polyhedron::from_halfspaces(m, {{a, Rational(0)}}));
    }
  }
  if (all_zero) throw OrthogonalWeight("Gamma_" + std::to_string(w.time));
  return out;
}

Polyhedron evaluate_dual_representation(const ScenarioTree& tree, const std::vector<WeightedPair>& pairs,
                                        const AdaptedVector& x, int m) {
  if (pairs.empty()) throw InvalidInput("dual representation needs at least one pair");
  const int t = pairs.front().pair.t;
  const Eigen::Index n = tree.layer_size(t);
  std::vector<HalfSpace<Rational>> cons;
  for (const auto& wp : pairs) {
    if (wp.pair.t != t) throw InvalidInput("dual pairs must share the base time");
    if (wp.penalty.is_neg_inf()) continue;
    if (wp.penalty.is_pos_inf()) return Polyhedron::empty(m * n);
    Vector a = Vector::Zero(m * n);
    for (Eigen::Index node : tree.nodes_at(t)) {
      const Eigen::Index p = tree.layer_pos(node);
      for (Eigen::Index i = 0; i < m; ++i) a[p * m + i] = tree.prob(node) * wp.pair.w.values[p][i];
    }
    if (is_zero(a)) throw OrthogonalWeight("dual representation pair");
    // E[w . E^Q_t[-X]] = -E[w_t^s . X] for X adapted at s.
    Vector dir = probability_weighted(tree, weight_process(tree, wp.pair, x.time));
    Rational b = -dir.dot(x.flatten()) + wp.penalty.value();
    cons.push_back({std::move(a), std::move(b)});
  }
  return Polyhedron::from_halfspaces(m * n, std::move(cons));
}

DualPredicate H_operator(const ScenarioTree& tree, DualPredicate d, int t, int s, int m) {
  if (t >= s) throw PreconditionViolation("H_t^s requires t < s");
  const ScenarioTree* tp = &tree;
  return [tp, d = std::move(d), t, s, m](const DualPair& pair) {
    if (pair.t != t) return false;
    if (!in_W(*tp, pair, m)) return false;
    return d(project_pair(*tp, pair, s));
  };
}

std::optional<DualPair> pair_from_weights(const ScenarioTree& tree, const AdaptedVector& y, int t, int m) {
  const int s = y.time;
  AdaptedVector w = conditional_expectation(tree, y, t);
  bool all_zero = true;
  for (const auto& v : w.values)
    if (!eligible_zero(v, m)) all_zero = false;
  if (all_zero) return std::nullopt;
  std::vector<Vector> dens;
  for (Eigen::Index leaf : tree.leaves()) {
    Eigen::Index ks = tree.ancestor(leaf, s);
    const Vector& num = y.at(tree, ks);
    const Vector& den = w.at(tree, tree.ancestor(leaf, t));
    Vector xi(num.size());
    for (Eigen::Index i = 0; i < num.size(); ++i) xi[i] = den[i] != 0 ? Rational(num[i] / den[i]) : Rational(1);
    dens.push_back(std::move(xi));
  }
  return DualPair{t, VectorMeasure(tree, std::move(dens)), std::move(w)};
}

std::vector<DualPair> facet_pairs(const ScenarioTree& tree, const AcceptanceSet& a, int t, int m) {
  const Eigen::Index d = tree.d();
  const int s = a.payoff_time;
  std::vector<DualPair> out;
  if (a.set.is_empty()) return out;
  for (const auto& h : a.set.inequalities()) {
    bool nonneg = true;
    for (Eigen::Index j = 0; j < h.a.size(); ++j)
      if (h.a[j] < 0) nonneg = false;
    if (!nonneg) continue;
    AdaptedVector y{s, {}};
    for (Eigen::Index k : tree.nodes_at(s)) y.values.push_back(h.a.segment(tree.layer_pos(k) * d, d) / tree.prob(k));
    if (auto p = pair_from_weights(tree, y, t, m)) out.push_back(std::move(*p));
  }
  return out;
}

}  // namespace setrisk
