#include "setrisk/consistency.hpp"

#include <cmath>

#include "setrisk/error.hpp"
#include "setrisk/lp.hpp"
#include "setrisk/parallel.hpp"

namespace setrisk {

namespace {

const char* kClosedSum = "closedness of A_{t,s} + A_s: automatic, the sum of two polyhedra is a polyhedron";

bool same_pair(const DualPair& a, const DualPair& b) { return a.t == b.t && a.q == b.q && a.w == b.w; }

void fail_with(ConsistencyReport& rep, Witness w) {
  rep.verdict = Verdict::Fail;
  rep.witnesses.push_back(std::move(w));
}

// Compares two sets exactly; on inequality records one witness per missing
// direction and a summary of how the sets relate.
void compare_sets(ConsistencyReport& rep, const ScenarioTree* tree, int payoff_time, const Polyhedron& lhs,
                  const Polyhedron& rhs, const std::string& lname, const std::string& rname) {
  ++rep.cases;
  auto missing_r = find_separation(rhs, lhs);  // point of lhs outside rhs
  auto missing_l = find_separation(lhs, rhs);  // point of rhs outside lhs
  if (!missing_r && !missing_l) return;
  auto add = [&](const Polyhedron& from, const Polyhedron& other, const SeparationCertificate<Rational>& cert,
                 const std::string& fname, const std::string& oname) {
    Witness w;
    w.description = "point of " + fname + " outside " + oname;
    w.point = separating_point(from, cert);
    w.separating = cert.constraint;
    w.sets = {from, other};
    if (tree) w.payoff = AdaptedVector::unflatten(*tree, payoff_time, *w.point);
    fail_with(rep, std::move(w));
  };
  if (missing_r) add(lhs, rhs, *missing_r, lname, rname);
  if (missing_l) add(rhs, lhs, *missing_l, rname, lname);
  if (missing_r && missing_l)
    rep.detail = lname + " and " + rname + " are incomparable";
  else if (missing_r)
    rep.detail = lname + " strictly contains " + rname;
  else
    rep.detail = rname + " strictly contains " + lname;
}

const AcceptanceSet& full_set(const RiskMeasure& r, int t) { return r.acceptance_set(t); }

void require_order(int t, int s, const RiskMeasure& r) {
  if (t >= s) throw PreconditionViolation("consistency checks require t < s");
  if (s > r.tree().horizon()) throw InvalidInput("time after the horizon");
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Inapplicable: return "inapplicable";
  }
  return "unknown";
}

Vector separating_point(const Polyhedron& subset, const SeparationCertificate<Rational>& cert) {
  using Gen = SeparationCertificate<Rational>::Generator;
  const auto& h = cert.constraint;
  if (cert.generator == Gen::Vertex) return cert.witness;
  const Vector& v0 = subset.vertices().front();
  Vector dir = cert.witness;
  Rational slope = h.a.dot(dir);
  if (cert.generator == Gen::Line && slope > 0) {
    dir = -dir;
    slope = -slope;
  }
  // a.(v0 + mu dir) < b for mu > (a.v0 - b) / (-slope).
  Rational mu = (h.a.dot(v0) - h.b) / (-slope);
  if (mu < 0) mu = 0;
  return v0 + (mu + 1) * dir;
}

bool reverify_witness(const Witness& w) {
  if (!w.point || !w.separating || w.sets.size() != 2) return false;
  const auto& h = *w.separating;
  if (!contains_point(w.sets[0], *w.point)) return false;
  if (!(h.a.dot(*w.point) < h.b)) return false;
  auto lp = lp_minimize<Rational>(h.a, w.sets[1].inequalities(), w.sets[1].equalities());
  using S = LpResult<Rational>::Status;
  if (lp.status == S::Infeasible) return true;
  return lp.status == S::Optimal && lp.value >= h.b;
}

ConsistencyReport check_mptc_acceptance(const RiskMeasure& r, int t, int s) {
  require_order(t, s, r);
  ConsistencyReport rep;
  rep.check = "mptc-acceptance";
  rep.discharged.push_back(kClosedSum);
  const AcceptanceSet& at = full_set(r, t);
  AcceptanceSet rhs = sum(r.tree(), r.stepped_acceptance_set(t, s), full_set(r, s));
  compare_sets(rep, &r.tree(), at.payoff_time, at.set, rhs.set, "A_t", "A_{t,s} + A_s");
  return rep;
}

ConsistencyReport check_recursion(const RiskMeasure& r, const AdaptedVector& x, int t, int s) {
  require_order(t, s, r);
  const ScenarioTree& tree = r.tree();
  const int m = r.eligible();
  const int horizon = tree.horizon();
  ConsistencyReport rep;
  rep.check = "recursion";
  rep.discharged.push_back(kClosedSum);
  Polyhedron lhs = r.value(x, t);
  Polyhedron rs = r.value(x, s);
  const Eigen::Index nt = m * tree.layer_size(t), ns = m * tree.layer_size(s);
  // (u, Z) with -Z + u in A_t and Z in R_s(X).
  Matrix map(tree.d() * tree.layer_size(horizon), nt + ns);
  map << embedding(tree, t, horizon) * eligible_embedding(tree, t, m),
      -(embedding(tree, s, horizon) * eligible_embedding(tree, s, m));
  Polyhedron lifted = intersect(affine_preimage(r.acceptance_set(t).set, map, Vector(Vector::Zero(map.rows()))),
                                product(Polyhedron::universe(nt), rs));
  std::vector<Eigen::Index> keep;
  for (Eigen::Index j = 0; j < nt; ++j) keep.push_back(j);
  Polyhedron rhs = project(lifted, keep);
  compare_sets(rep, nullptr, t, lhs, rhs, "R_t(X)", "R_t(-R_s(X))");
  for (auto& w : rep.witnesses) w.payoff = x;
  return rep;
}

ConsistencyReport check_cocycle(const RiskMeasure& r, const DualPair& pair, int s) {
  const int t = pair.t;
  require_order(t, s, r);
  const ScenarioTree& tree = r.tree();
  if (auto mem = in_W(tree, pair, r.eligible()); !mem)
    throw PreconditionViolation("cocycle check needs a pair in W_t: " + to_string(mem.violation) + " (" +
                                mem.detail + ")");
  ConsistencyReport rep;
  rep.check = "cocycle";
  rep.discharged.push_back(kClosedSum);
  rep.cases = 1;
  ExtendedRational bt = penalty_value(tree, full_set(r, t), pair);
  ExtendedRational bts = penalty_value(tree, r.stepped_acceptance_set(t, s), pair);
  ExtendedRational bs = penalty_value(tree, full_set(r, s), project_pair(tree, pair, s));
  if (!(bt == bts + bs)) {
    Witness w;
    w.description = "b_t = " + bt.to_string() + " but b_{t,s} + b_s = " + bts.to_string() + " + " + bs.to_string();
    w.pair = pair;
    w.scalars = {bt, bts, bs};
    fail_with(rep, std::move(w));
  }
  return rep;
}

std::vector<DualPair> cocycle_family(const RiskMeasure& r, int t, int s) {
  require_order(t, s, r);
  const ScenarioTree& tree = r.tree();
  const int m = r.eligible();
  AcceptanceSet stepped = r.stepped_acceptance_set(t, s);
  std::vector<DualPair> out;
  auto add = [&](const AcceptanceSet& a) {
    for (auto& p : facet_pairs(tree, a, t, m)) {
      if (!in_W(tree, p, m)) continue;
      bool seen = false;
      for (const auto& q : out) seen = seen || same_pair(p, q);
      if (!seen) out.push_back(std::move(p));
    }
  };
  add(full_set(r, t));
  add(sum(tree, stepped, full_set(r, s)));
  add(stepped);
  return out;
}

ConsistencyReport check_cocycle_family(const RiskMeasure& r, int t, int s) {
  std::vector<DualPair> family = cocycle_family(r, t, s);
  std::vector<ConsistencyReport> parts(family.size());
  parallel_for(family.size(), [&](std::size_t k) { parts[k] = check_cocycle(r, family[k], s); });
  ConsistencyReport rep;
  rep.check = "cocycle";
  rep.discharged.push_back(kClosedSum);
  rep.detail = "facet-derived family of " + std::to_string(family.size()) + " pairs";
  for (auto& p : parts) {
    rep.cases += p.cases;
    for (auto& w : p.witnesses) fail_with(rep, std::move(w));
  }
  return rep;
}

ConsistencyReport check_conditional_cocycle(const RiskMeasure& r, const DualPair& pair, int s) {
  const int t = pair.t;
  require_order(t, s, r);
  const ScenarioTree& tree = r.tree();
  if (auto mem = in_W(tree, pair, r.eligible()); !mem)
    throw PreconditionViolation("cocycle check needs a pair in W_t: " + to_string(mem.violation));
  ConsistencyReport rep;
  rep.check = "conditional-cocycle";
  rep.discharged.push_back(kClosedSum);
  rep.assumptions.push_back(
      "the measure has a conditional dual representation over equivalent measures; not verified for the input");
  auto ct = conditional_penalty_value(tree, full_set(r, t), pair);
  auto cts = conditional_penalty_value(tree, r.stepped_acceptance_set(t, s), pair);
  auto cs = conditional_penalty_value(tree, full_set(r, s), project_pair(tree, pair, s));
  for (Eigen::Index n : tree.nodes_at(t)) {
    ++rep.cases;
    const auto pos = static_cast<std::size_t>(tree.layer_pos(n));
    ExtendedRational rhs = cts[pos];
    for (Eigen::Index k : tree.descendants_at(n, s))
      rhs = rhs + tree.cond_prob(k, n) * cs[static_cast<std::size_t>(tree.layer_pos(k))];
    if (!(ct[pos] == rhs)) {
      Witness w;
      w.description = "node " + tree.id(n) + ": c_t = " + ct[pos].to_string() + " but the split gives " +
                      rhs.to_string();
      w.pair = pair;
      w.scalars = {ct[pos], cts[pos], rhs};
      fail_with(rep, std::move(w));
    }
  }
  return rep;
}

ConsistencyReport check_entropic_cocycle(const ScenarioTree& tree, const VectorMeasure& q, int t, int s, double tol) {
  const int horizon = tree.horizon();
  if (t > s || s > horizon) throw PreconditionViolation("entropic cocycle requires t <= s <= T");
  ConsistencyReport rep;
  rep.check = "entropic-cocycle";
  RealAdapted htt = relative_entropy(tree, q, t, horizon);
  RealAdapted hts = relative_entropy(tree, q, t, s);
  RealAdapted hst = relative_entropy(tree, q, s, horizon);
  DensityProcess dp(tree, q);
  double worst = 0;
  for (Eigen::Index n : tree.nodes_at(t)) {
    Eigen::VectorXd rhs = hts.values[tree.layer_pos(n)];
    for (Eigen::Index k : tree.descendants_at(n, s)) {
      Vector x = dp.xi_at(t, k);
      const double p = to_double(tree.cond_prob(k, n));
      for (Eigen::Index i = 0; i < tree.d(); ++i) rhs[i] += p * to_double(x[i]) * hst.values[tree.layer_pos(k)][i];
    }
    for (Eigen::Index i = 0; i < tree.d(); ++i) {
      ++rep.cases;
      const double res = std::abs(htt.values[tree.layer_pos(n)][i] - rhs[i]);
      worst = std::max(worst, res);
      if (!(res <= tol)) {
        Witness w;
        w.description = "node " + tree.id(n) + " component " + std::to_string(i) + ": residual " + std::to_string(res);
        fail_with(rep, std::move(w));
      }
    }
  }
  rep.detail = "max residual " + format_decimal(Rational(worst));
  return rep;
}

ConsistencyReport check_entropic_recursion(const ScenarioTree& tree, const EntropicParams& params,
                                           const RealAdapted& x, int t, int s, double tol) {
  if (t >= s || s > x.time) throw PreconditionViolation("entropic recursion requires t < s <= time(X)");
  ConsistencyReport rep;
  rep.check = "entropic-recursion";
  RealAdapted inner = entropic_value(tree, params, x, s);
  for (auto& v : inner.values) v = -v;
  RealAdapted lhs = entropic_value(tree, params, x, t);
  RealAdapted rhs = entropic_value(tree, params, inner, t);
  double worst = 0;
  for (std::size_t k = 0; k < lhs.values.size(); ++k) {
    for (Eigen::Index i = 0; i < lhs.values[k].size(); ++i) {
      ++rep.cases;
      const double res = std::abs(lhs.values[k][i] - rhs.values[k][i]);
      worst = std::max(worst, res);
      if (!(res <= tol)) {
        Witness w;
        w.description = "node " + tree.id(tree.nodes_at(t)[k]) + " component " + std::to_string(i) + ": residual " +
                        std::to_string(res);
        fail_with(rep, std::move(w));
      }
    }
  }
  rep.detail = "max residual " + format_decimal(Rational(worst));
  return rep;
}

ConsistencyReport check_stability(const RiskMeasure& r, int s, const std::vector<DualPair>& pairs,
                                  const std::vector<VectorMeasure>& partners) {
  if (!r.is_coherent()) throw PreconditionViolation("stability is defined for coherent measures");
  const ScenarioTree& tree = r.tree();
  const int m = r.eligible();
  ConsistencyReport rep;
  rep.check = "stability";
  rep.discharged.push_back(kClosedSum);
  struct Part {
    std::size_t cases = 0;
    std::vector<Witness> witnesses;
  };
  std::vector<Part> parts(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t idx) {
    const DualPair& pair = pairs[idx];
    const int t = pair.t;
    require_order(t, s, r);
    Part& part = parts[idx];
    const AcceptanceSet& at = full_set(r, t);
    const AcceptanceSet& as = full_set(r, s);
    if (in_W_max(tree, pair, at, m)) {
      ++part.cases;
      DualPair proj = project_pair(tree, pair, s);
      if (auto mem = in_W_max(tree, proj, as, m); !mem) {
        Witness w;
        w.description = "projection leaves W_s^max: " + to_string(mem.violation) + " (" + mem.detail + ")";
        w.pair = pair;
        part.witnesses.push_back(std::move(w));
      }
    }
    AcceptanceSet ats = r.stepped_acceptance_set(t, s);
    if (!in_W_max(tree, pair, ats, m)) return;
    AdaptedVector ws = weight_process(tree, pair, s);
    for (const auto& partner : partners) {
      DualPair later{s, partner, ws};
      if (!in_W_max(tree, later, as, m)) continue;
      ++part.cases;
      DualPair pasted{t, paste(tree, pair.q, partner, s), pair.w};
      if (auto mem = in_W_max(tree, pasted, at, m); !mem) {
        Witness w;
        w.description = "pasting leaves W_t^max: " + to_string(mem.violation) + " (" + mem.detail + ")";
        w.pair = pasted;
        part.witnesses.push_back(std::move(w));
      }
    }
  });
  for (auto& p : parts) {
    rep.cases += p.cases;
    for (auto& w : p.witnesses) fail_with(rep, std::move(w));
  }
  return rep;
}

std::vector<VectorMeasure> stability_partners(const RiskMeasure& r, int s) {
  const ScenarioTree& tree = r.tree();
  std::vector<VectorMeasure> out{VectorMeasure::physical(tree)};
  for (auto& p : facet_pairs(tree, full_set(r, s), s, r.eligible())) {
    bool seen = false;
    for (const auto& q : out) seen = seen || q == p.q;
    if (!seen) out.push_back(std::move(p.q));
  }
  return out;
}

ConsistencyReport check_Wmax_decomposition(const RiskMeasure& r, int s, const std::vector<DualPair>& pairs) {
  if (!r.is_coherent()) throw PreconditionViolation("the maximal dual set decomposition needs a coherent measure");
  const ScenarioTree& tree = r.tree();
  const int m = r.eligible();
  ConsistencyReport rep;
  rep.check = "wmax-decomposition";
  rep.discharged.push_back(kClosedSum);
  const AcceptanceSet& as = full_set(r, s);
  DualPredicate later = [&](const DualPair& p) { return static_cast<bool>(in_W_max(tree, p, as, m)); };
  std::vector<std::optional<Witness>> parts(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t k) {
    const DualPair& pair = pairs[k];
    require_order(pair.t, s, r);
    const bool lhs = static_cast<bool>(in_W_max(tree, pair, full_set(r, pair.t), m));
    const bool stepped = static_cast<bool>(in_W_max(tree, pair, r.stepped_acceptance_set(pair.t, s), m));
    const bool h = H_operator(tree, later, pair.t, s, m)(pair);
    if (lhs != (stepped && h)) {
      Witness w;
      w.description = std::string("W_t^max membership ") + (lhs ? "true" : "false") + " but W_{t,s}^max " +
                      (stepped ? "true" : "false") + ", H_t^s(W_s^max) " + (h ? "true" : "false");
      w.pair = pair;
      parts[k] = std::move(w);
    }
  });
  rep.cases = pairs.size();
  for (auto& p : parts)
    if (p) fail_with(rep, std::move(*p));
  return rep;
}

std::unique_ptr<ComposedMeasure> compose(const ScenarioTree& tree, int m, OneStepFamily family, std::string name,
                                         bool coherent) {
  return std::make_unique<ComposedMeasure>(tree, m, std::move(family), std::move(name), coherent);
}

ExtendedRational composed_penalty(const ComposedMeasure& r, const DualPair& pair) {
  const ScenarioTree& tree = r.tree();
  const int t = pair.t;
  if (t == tree.horizon()) return penalty_value(tree, embed(tree, r.family().terminal, t), pair);
  ExtendedRational step = penalty_value(tree, r.family().stepped[static_cast<std::size_t>(t)], pair);
  return step + composed_penalty(r, project_pair(tree, pair, t + 1));
}

DualPredicate composed_max_predicate(const ComposedMeasure& r, int t) {
  const ScenarioTree& tree = r.tree();
  const int m = r.eligible();
  if (t == tree.horizon()) {
    AcceptanceSet terminal = embed(tree, r.family().terminal, t);
    return [&tree, m, terminal](const DualPair& p) { return static_cast<bool>(in_W_max(tree, p, terminal, m)); };
  }
  const AcceptanceSet& stepped = r.family().stepped[static_cast<std::size_t>(t)];
  DualPredicate h = H_operator(tree, composed_max_predicate(r, t + 1), t, t + 1, m);
  return [&tree, m, &stepped, h](const DualPair& p) { return in_W_max(tree, p, stepped, m) && h(p); };
}

ConsistencyReport check_finiteness(const RiskMeasure& r) {
  const ScenarioTree& tree = r.tree();
  ConsistencyReport rep;
  rep.check = "finiteness";
  AdaptedVector zero = AdaptedVector::zero(tree, tree.horizon());
  for (int t = 0; t <= tree.horizon(); ++t) {
    ++rep.cases;
    Polyhedron v = r.value(zero, t);
    if (v.is_empty()) {
      Witness w;
      w.description = "R_" + std::to_string(t) + "(0) is empty";
      w.sets = {v};
      fail_with(rep, std::move(w));
      continue;
    }
    auto parts = split_nodes(tree, v, t, r.eligible());
    for (std::size_t k = 0; k < parts.size(); ++k) {
      if (parts[k].inequalities().empty() && parts[k].equalities().empty()) {
        Witness w;
        w.description = "R_" + std::to_string(t) + "(0) is all of M at node " + tree.id(tree.nodes_at(t)[k]);
        w.sets = {parts[k]};
        fail_with(rep, std::move(w));
      }
    }
  }
  return rep;
}

ConsistencyReport acceptance_witness_sweep(const RiskMeasure& r, int t, int s, const std::vector<Rational>& grid) {
  require_order(t, s, r);
  if (grid.empty()) throw InvalidInput("empty payoff grid");
  const ScenarioTree& tree = r.tree();
  ConsistencyReport rep;
  rep.check = "acceptance-witness-sweep";
  rep.discharged.push_back(kClosedSum);
  const Polyhedron& lhs = full_set(r, t).set;
  Polyhedron rhs = sum(tree, r.stepped_acceptance_set(t, s), full_set(r, s)).set;
  const Eigen::Index dim = lhs.dim();
  std::vector<std::size_t> digit(static_cast<std::size_t>(dim), 0);
  Vector x(dim);
  for (;;) {
    for (Eigen::Index j = 0; j < dim; ++j) x[j] = grid[digit[static_cast<std::size_t>(j)]];
    ++rep.cases;
    const bool in_l = contains_point(lhs, x), in_r = contains_point(rhs, x);
    if (in_l != in_r) {
      const Polyhedron& from = in_l ? lhs : rhs;
      const Polyhedron& other = in_l ? rhs : lhs;
      Witness w;
      w.description = in_l ? "payoff in A_t outside A_{t,s} + A_s" : "payoff in A_{t,s} + A_s outside A_t";
      w.point = x;
      w.payoff = AdaptedVector::unflatten(tree, tree.horizon(), x);
      for (const auto& h : other.equalities()) {
        if (h.a.dot(x) < h.b) w.separating = h;
        if (h.a.dot(x) > h.b) w.separating = HalfSpace<Rational>{-h.a, Rational(-h.b)};
        if (w.separating) break;
      }
      if (!w.separating)
        for (const auto& h : other.inequalities())
          if (h.a.dot(x) < h.b) {
            w.separating = h;
            break;
          }
      w.sets = {from, other};
      fail_with(rep, std::move(w));
      rep.detail = "witness found after " + std::to_string(rep.cases) + " payoffs";
      return rep;
    }
    Eigen::Index j = dim - 1;
    while (j >= 0 && ++digit[static_cast<std::size_t>(j)] == grid.size()) digit[static_cast<std::size_t>(j--)] = 0;
    if (j < 0) break;
  }
  rep.detail = "no witness among " + std::to_string(rep.cases) + " grid payoffs";
  return rep;
}

}  // namespace setrisk
