#include "setrisk/axioms.hpp"

#include <cmath>

#include "setrisk/error.hpp"

namespace setrisk {

namespace {

ConsistencyReport start(const char* name) {
  ConsistencyReport rep;
  rep.check = name;
  return rep;
}

void expect_equal(ConsistencyReport& rep, const Polyhedron& a, const Polyhedron& b, const std::string& what) {
  ++rep.cases;
  if (set_equal(a, b)) return;
  rep.verdict = Verdict::Fail;
  Witness w;
  w.description = what;
  w.sets = {a, b};
  rep.witnesses.push_back(std::move(w));
}

void expect_close(ConsistencyReport& rep, double a, double b, double tol, const std::string& what) {
  ++rep.cases;
  if (std::abs(a - b) <= tol) return;
  rep.verdict = Verdict::Fail;
  Witness w;
  w.description = what + ": " + std::to_string(a) + " vs " + std::to_string(b);
  rep.witnesses.push_back(std::move(w));
}

// Payoff equal to x below the time-t nodes flagged in `on`, y elsewhere.
template <typename V>
V recombine(const ScenarioTree& tree, const V& x, const V& y, const std::vector<bool>& on, int t) {
  if (x.time != y.time) throw InvalidInput("recombined payoffs must share their time");
  if (static_cast<Eigen::Index>(on.size()) != tree.layer_size(t)) throw DimensionMismatch("node partition");
  V z = y;
  for (Eigen::Index k : tree.nodes_at(x.time)) {
    const auto pos = static_cast<std::size_t>(tree.layer_pos(k));
    if (on[static_cast<std::size_t>(tree.layer_pos(tree.ancestor(k, t)))]) z.values[pos] = x.values[pos];
  }
  return z;
}

RealAdapted lift_real(const ScenarioTree& tree, const RealAdapted& m, int r) {
  RealAdapted out{r, {}};
  for (Eigen::Index k : tree.nodes_at(r))
    out.values.push_back(m.values[static_cast<std::size_t>(tree.layer_pos(tree.ancestor(k, m.time)))]);
  return out;
}

}  // namespace

ConsistencyReport check_translativity(const RiskMeasure& r, const AdaptedVector& x, const AdaptedVector& m, int t) {
  const ScenarioTree& tree = r.tree();
  if (m.time != t) throw InvalidInput("translation must be adapted at the evaluation time");
  for (const auto& v : m.values)
    for (Eigen::Index i = r.eligible(); i < v.size(); ++i)
      if (v[i] != 0) throw InvalidInput("translation must lie in the eligible space");
  auto rep = start("translativity");
  AdaptedVector moved = x + AdaptedVector::unflatten(tree, x.time, embedding(tree, t, x.time) * m.flatten());
  Vector shift = eligible_embedding(tree, t, r.eligible()).transpose() * m.flatten();
  expect_equal(rep, r.value(moved, t), translate(r.value(x, t), Vector(-shift)), "R_t(X + m) differs from R_t(X) - m");
  return rep;
}

ConsistencyReport check_monotonicity(const RiskMeasure& r, const AdaptedVector& x, const AdaptedVector& y, int t) {
  if (x.time != y.time) throw InvalidInput("compared payoffs must share their time");
  for (std::size_t k = 0; k < x.values.size(); ++k)
    for (Eigen::Index i = 0; i < x.values[k].size(); ++i)
      if (x.values[k][i] > y.values[k][i]) throw PreconditionViolation("monotonicity check needs X <= Y");
  auto rep = start("monotonicity");
  ++rep.cases;
  Polyhedron vx = r.value(x, t), vy = r.value(y, t);
  if (!contains_set(vy, vx)) {
    rep.verdict = Verdict::Fail;
    Witness w;
    w.description = "R_t(X) is not contained in R_t(Y)";
    w.sets = {vx, vy};
    rep.witnesses.push_back(std::move(w));
  }
  return rep;
}

ConsistencyReport check_normalization(const RiskMeasure& r, const AdaptedVector& x, int t) {
  auto rep = start("normalization");
  Polyhedron v = r.value(x, t);
  Polyhedron zero = r.value(AdaptedVector::zero(r.tree(), x.time), t);
  expect_equal(rep, v, minkowski_sum(v, zero), "R_t(X) differs from R_t(X) + R_t(0)");
  return rep;
}

ConsistencyReport check_decomposability(const RiskMeasure& r, const AdaptedVector& x, const AdaptedVector& y,
                                        const std::vector<bool>& on, int t) {
  const ScenarioTree& tree = r.tree();
  const int m = r.eligible();
  auto rep = start("decomposability");
  AdaptedVector z = recombine(tree, x, y, on, t);
  auto vz = split_nodes(tree, r.value(z, t), t, m);
  auto vx = split_nodes(tree, r.value(x, t), t, m);
  auto vy = split_nodes(tree, r.value(y, t), t, m);
  for (std::size_t k = 0; k < vz.size(); ++k)
    expect_equal(rep, vz[k], on[k] ? vx[k] : vy[k], "node " + tree.id(tree.nodes_at(t)[k]) + " factor differs");
  return rep;
}

ConsistencyReport check_positive_homogeneity(const RiskMeasure& r, const AdaptedVector& x,
                                             const std::vector<Rational>& k, int t) {
  const ScenarioTree& tree = r.tree();
  const int m = r.eligible();
  if (static_cast<Eigen::Index>(k.size()) != tree.layer_size(t)) throw DimensionMismatch("scalars per node");
  for (const auto& v : k)
    if (v <= 0) throw PreconditionViolation("homogeneity scalars must be positive");
  auto rep = start("positive-homogeneity");
  AdaptedVector scaled = x;
  for (Eigen::Index node : tree.nodes_at(x.time))
    scaled.values[static_cast<std::size_t>(tree.layer_pos(node))] *=
        k[static_cast<std::size_t>(tree.layer_pos(tree.ancestor(node, t)))];
  auto vs = split_nodes(tree, r.value(scaled, t), t, m);
  auto vx = split_nodes(tree, r.value(x, t), t, m);
  for (std::size_t n = 0; n < vs.size(); ++n)
    expect_equal(rep, vs[n], vx[n].is_empty() ? vx[n] : scale(vx[n], k[n]),
                 "node " + tree.id(tree.nodes_at(t)[n]) + ": R_t(kX) differs from k R_t(X)");
  return rep;
}

ConsistencyReport check_entropic_translativity(const ScenarioTree& tree, const EntropicParams& params,
                                               const RealAdapted& x, const RealAdapted& m, int t, double tol) {
  if (m.time != t) throw InvalidInput("translation must be adapted at the evaluation time");
  auto rep = start("entropic-translativity");
  RealAdapted lifted = lift_real(tree, m, x.time);
  RealAdapted moved = x;
  for (std::size_t k = 0; k < moved.values.size(); ++k) moved.values[k] += lifted.values[k];
  auto a = entropic_value(tree, params, moved, t);
  auto b = entropic_value(tree, params, x, t);
  for (std::size_t k = 0; k < a.values.size(); ++k)
    for (Eigen::Index i = 0; i < a.values[k].size(); ++i)
      expect_close(rep, a.values[k][i], b.values[k][i] - m.values[k][i], tol, "rho_t(X + m) vs rho_t(X) - m");
  return rep;
}

ConsistencyReport check_entropic_monotonicity(const ScenarioTree& tree, const EntropicParams& params,
                                              const RealAdapted& x, const RealAdapted& y, int t, double tol) {
  for (std::size_t k = 0; k < x.values.size(); ++k)
    if ((x.values[k].array() > y.values[k].array()).any())
      throw PreconditionViolation("monotonicity check needs X <= Y");
  auto rep = start("entropic-monotonicity");
  auto a = entropic_value(tree, params, x, t);
  auto b = entropic_value(tree, params, y, t);
  // R_t(X) ⊆ R_t(Y) for point-plus-orthant values means rho_t(X) >= rho_t(Y).
  for (std::size_t k = 0; k < a.values.size(); ++k)
    for (Eigen::Index i = 0; i < a.values[k].size(); ++i) {
      ++rep.cases;
      if (a.values[k][i] + tol < b.values[k][i]) {
        rep.verdict = Verdict::Fail;
        Witness w;
        w.description = "rho_t(X) < rho_t(Y) at node " + tree.id(tree.nodes_at(t)[k]);
        rep.witnesses.push_back(std::move(w));
      }
    }
  return rep;
}

ConsistencyReport check_entropic_decomposability(const ScenarioTree& tree, const EntropicParams& params,
                                                 const RealAdapted& x, const RealAdapted& y,
                                                 const std::vector<bool>& on, int t, double tol) {
  auto rep = start("entropic-decomposability");
  RealAdapted z = recombine(tree, x, y, on, t);
  auto vz = entropic_value(tree, params, z, t);
  auto vx = entropic_value(tree, params, x, t);
  auto vy = entropic_value(tree, params, y, t);
  for (std::size_t k = 0; k < vz.values.size(); ++k)
    for (Eigen::Index i = 0; i < vz.values[k].size(); ++i)
      expect_close(rep, vz.values[k][i], on[k] ? vx.values[k][i] : vy.values[k][i], tol, "recombined node value");
  return rep;
}

}  // namespace setrisk
