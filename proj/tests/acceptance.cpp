// Acceptance run: one pass/fail line per criterion. Rational criteria compare
// exactly; the entropic criterion uses an absolute tolerance of 1e-10.
// Exit status is the number of failed criteria.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "fixtures.hpp"
#include "kernel_properties.hpp"
#include "setrisk/axioms.hpp"
#include "setrisk/consistency.hpp"

using namespace setrisk;
using namespace testutil;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  int cases = 0;

  // Records one comparison; the first failure is kept as the detail.
  void expect(bool ok, const std::string& what) {
    ++cases;
    if (ok || !pass) {
      pass = pass && ok;
      return;
    }
    pass = false;
    detail = "first failure: " + what;
  }
};

AvarParams varied_params(const ScenarioTree& tree) {
  AvarParams p = AvarParams::constant(tree, q("1/2"));
  for (Eigen::Index n = 0; n < tree.num_nodes(); ++n)
    if (tree.time(n) == 1) p.lambda[static_cast<std::size_t>(n)].setConstant(n % 2 == 0 ? q("1/3") : q("2/3"));
  return p;
}

// 1. Recursive superhedging equals the direct acceptance-set route.
Outcome shp_routes() {
  Outcome o;
  std::mt19937 rng(1001);
  auto tree = binomial(2, 2);
  auto cones = bid_ask_cones(tree);
  Superhedging shp(tree, cones);
  for (int rep = 0; rep < 24; ++rep) {
    auto y = random_adapted(tree, 2, rng);
    for (int t = 0; t <= 1; ++t) {
      auto rec = shp_value(tree, cones, y, t);
      auto direct = split_nodes(tree, shp.value(-y, t), t, 2);
      bool eq = rec.size() == direct.size();
      for (std::size_t k = 0; eq && k < rec.size(); ++k) eq = set_equal(rec[k], direct[k]);
      o.expect(eq, "payoff " + std::to_string(rep) + " at t = " + std::to_string(t));
    }
  }
  o.detail = o.pass ? "24 random payoffs at t = 0, 1; binomial tree, d = 2, bid-ask cones" : o.detail;
  return o;
}

// 2. Superhedging passes the acceptance decomposition and the recursion.
Outcome shp_consistency() {
  Outcome o;
  std::mt19937 rng(1002);
  std::vector<ScenarioTree> trees = {binomial(2, 2), full_tree(2, 2, {q("1/3"), q("2/3")})};
  for (const auto& tree : trees) {
    Superhedging shp(tree, bid_ask_cones(tree));
    for (int t = 0; t < 2; ++t)
      for (int s = t + 1; s <= 2; ++s) {
        o.expect(check_mptc_acceptance(shp, t, s).passed(), "mptc " + std::to_string(t) + "," + std::to_string(s));
        for (int rep = 0; rep < 3; ++rep)
          o.expect(check_recursion(shp, random_adapted(tree, 2, rng), t, s).passed(),
                   "recursion " + std::to_string(t) + "," + std::to_string(s));
      }
  }
  if (o.pass) o.detail = "uniform and skewed binomial two-period trees, all t < s, 3 payoffs per split";
  return o;
}

// 3. Plain AV@R: the sweep finds a payoff separating A_0 from A_{0,1} + A_1.
Outcome avar_witness() {
  Outcome o;
  auto tree = full_tree(2, 1, {q("1/2"), q("1/2")});
  AverageValueAtRisk avar(tree, AvarParams::constant(tree, q("1/2")), 1);
  auto rep = acceptance_witness_sweep(avar, 0, 1, {-1, 0, 1});
  o.expect(rep.verdict == Verdict::Fail && !rep.witnesses.empty(), "sweep found no witness");
  if (!o.pass) return o;
  const Witness& w = rep.witnesses.front();
  o.expect(reverify_witness(w), "LP reverification");
  const Vector& x = *w.point;
  const bool in_a0 = contains_point(avar.acceptance_set(0).set, x);
  const bool in_sum = contains_point(sum(tree, avar.stepped_acceptance_set(0, 1), avar.acceptance_set(1)).set, x);
  o.expect(in_a0 != in_sum, "witness lies in both or neither set");
  if (o.pass) {
    std::string p;
    for (Eigen::Index i = 0; i < x.size(); ++i) p += (i ? "," : "") + format_rational(x[i]);
    o.detail = "witness X = (" + p + "): " + w.description + "; separating direction reverified by LP";
  }
  return o;
}

// 4. Composed AV@R: generic composition, decomposition and dual LP support.
Outcome composed_avar_checks() {
  Outcome o;
  std::mt19937 rng(1004);
  struct Fixture {
    ScenarioTree tree;
    std::function<AvarParams(const ScenarioTree&)> params;
  };
  std::vector<Fixture> fixtures;
  fixtures.push_back({full_tree(2, 1, {q("1/2"), q("1/2")}), [](const ScenarioTree& t) {
                        return AvarParams::constant(t, q("1/2"));
                      }});
  fixtures.push_back({binomial(2, 1), varied_params});
  fixtures.push_back({full_tree(2, 1, {q("1/4"), q("1/4"), q("1/2")}), [](const ScenarioTree& t) {
                        return AvarParams::constant(t, q("2/5"));
                      }});
  fixtures.push_back({binomial(2, 2), [](const ScenarioTree& t) { return AvarParams::constant(t, q("1/3")); }});
  int facets = 0;
  for (const auto& f : fixtures) {
    const ScenarioTree& tree = f.tree;
    const int m = tree.d();
    const int horizon = tree.horizon();
    AvarParams params = f.params(tree);
    AverageValueAtRisk base(tree, params, m);
    auto generic = compose(tree, m, one_step_family(base), "composed", true);
    auto direct = composed_avar(tree, params, m);
    for (int t = 0; t <= horizon; ++t)
      o.expect(set_equal(tree, generic->acceptance_set(t), direct->acceptance_set(t)), "compose vs composed_avar");
    for (int t = 0; t < horizon; ++t)
      for (int s = t + 1; s <= horizon; ++s) o.expect(check_mptc_acceptance(*direct, t, s).passed(), "mptc");
    for (int rep = 0; rep < 3; ++rep) {
      auto x = random_adapted(tree, horizon, rng);
      for (int t = 0; t <= horizon; ++t) {
        auto value = direct->value(x, t);
        o.expect(set_equal(value, generic->value(x, t)), "value vs composed value");
        for (const auto& h : value.inequalities()) {
          AdaptedVector w = AdaptedVector::unflatten(tree, t, h.a);
          for (Eigen::Index n : tree.nodes_at(t)) w.values[static_cast<std::size_t>(tree.layer_pos(n))] /= tree.prob(n);
          o.expect(composed_avar_dual_support(tree, params, x, w) == ExtendedRational(h.b), "facet support vs LP");
          ++facets;
        }
      }
    }
  }
  if (o.pass)
    o.detail = "4 fixtures (d = 1 and d = 2); " + std::to_string(facets) + " facet supports equal the dual LP exactly";
  return o;
}

// 5. Cocycle verdict over facet pairs equals the acceptance-set verdict.
Outcome cocycle_triangle() {
  Outcome o;
  int passes = 0, fails = 0;
  auto run = [&](const RiskMeasure& r, const std::string& name) {
    for (int t = 0; t < r.tree().horizon(); ++t)
      for (int s = t + 1; s <= r.tree().horizon(); ++s) {
        const Verdict a = check_mptc_acceptance(r, t, s).verdict;
        const Verdict c = check_cocycle_family(r, t, s).verdict;
        o.expect(a == c, name + " at " + std::to_string(t) + "," + std::to_string(s));
        (a == Verdict::Pass ? passes : fails) += 1;
      }
  };
  auto b22 = binomial(2, 2);
  Superhedging shp(b22, bid_ask_cones(b22));
  run(shp, "shp");
  auto fair = full_tree(2, 1, {q("1/2"), q("1/2")});
  AverageValueAtRisk avar(fair, AvarParams::constant(fair, q("1/2")), 1);
  run(avar, "avar");
  auto b21 = binomial(2, 1);
  AverageValueAtRisk avar_varied(b21, varied_params(b21), 1);
  run(avar_varied, "avar varied");
  auto composed = composed_avar(fair, AvarParams::constant(fair, q("1/2")), 1);
  run(*composed, "composed avar");
  auto composed_varied = composed_avar(b21, varied_params(b21), 1);
  run(*composed_varied, "composed avar varied");
  o.expect(passes > 0 && fails > 0, "both verdicts exercised");
  if (o.pass)
    o.detail = "5 coherent fixtures; " + std::to_string(passes) + " consistent and " + std::to_string(fails) +
               " inconsistent splits, verdicts agree";
  return o;
}

// 6. Stability of the superhedging dual set and the W^max decomposition.
Outcome shp_stability() {
  Outcome o;
  std::mt19937 rng(1006);
  std::vector<ScenarioTree> trees = {binomial(2, 2), full_tree(2, 2, {q("1/2"), q("1/2")})};
  std::size_t pastings = 0;
  for (const auto& tree : trees) {
    Superhedging shp(tree, bid_ask_cones(tree));
    for (int t = 0; t < 2; ++t)
      for (int s = t + 1; s <= 2; ++s) {
        auto pairs = cocycle_family(shp, t, s);
        auto rep = check_stability(shp, s, pairs, stability_partners(shp, s));
        o.expect(rep.passed(), "stability");
        pastings += rep.cases;
        o.expect(check_Wmax_decomposition(shp, s, pairs).passed(), "W^max decomposition on facet pairs");
      }
    std::vector<DualPair> random_pairs;
    for (int rep = 0; rep < 30; ++rep)
      if (auto p = pair_from_weights(tree, random_adapted(tree, 2, rng, 0, 3), 0, 2)) random_pairs.push_back(*p);
    o.expect(check_Wmax_decomposition(shp, 1, random_pairs).passed(), "W^max decomposition on random pairs");
  }
  if (o.pass)
    o.detail = std::to_string(pastings) + " stability cases on facet pairs and pastings; membership-wise W^max decomposition";
  return o;
}

// 7. Entropic chain rule and recursion within 1e-10.
Outcome entropic() {
  Outcome o;
  std::mt19937 rng(1007);
  const double tol = 1e-10;
  auto tree = full_tree(3, 2, {q("1/4"), q("1/4"), q("1/2")});
  for (int rep = 0; rep < 100; ++rep) {
    auto qm = random_measure(tree, rng);
    for (int s = 1; s <= 2; ++s) o.expect(check_entropic_cocycle(tree, qm, 0, s, tol).passed(), "cocycle");
    o.expect(check_entropic_cocycle(tree, qm, 1, 2, tol).passed(), "cocycle from t = 1");
  }
  EntropicParams params{Eigen::Vector2d(0.5, 2.0)};
  for (int rep = 0; rep < 50; ++rep) {
    auto x = to_real(random_adapted(tree, 3, rng));
    for (int s = 1; s <= 2; ++s) o.expect(check_entropic_recursion(tree, params, x, 0, s, tol).passed(), "recursion");
  }
  if (o.pass) o.detail = "100 strictly positive Q and 50 payoffs on a three-period ternary tree, tolerance 1e-10";
  return o;
}

// 8. Axioms for every implemented measure.
Outcome axioms() {
  Outcome o;
  std::mt19937 rng(1008);
  auto shift = [&](const ScenarioTree& tree, int t, int m) {
    AdaptedVector u = random_adapted(tree, t, rng, -2, 2);
    for (auto& v : u.values)
      for (Eigen::Index i = m; i < v.size(); ++i) v[i] = 0;
    return u;
  };
  auto above = [&](AdaptedVector x) {
    for (auto& v : x.values)
      for (Eigen::Index i = 0; i < v.size(); ++i) v[i] += random_rational(rng, 0, 2);
    return x;
  };
  auto split = [&](const ScenarioTree& tree, int t) {
    std::vector<bool> on;
    for (Eigen::Index k = 0; k < tree.layer_size(t); ++k) on.push_back(rng() % 2 == 0);
    return on;
  };
  auto polyhedral = [&](const RiskMeasure& r, bool coherent) {
    const ScenarioTree& tree = r.tree();
    const int horizon = tree.horizon();
    o.expect(check_finiteness(r).passed(), r.name() + " finiteness");
    for (int t = 0; t < horizon; ++t)
      for (int rep = 0; rep < 2; ++rep) {
        auto x = random_adapted(tree, horizon, rng);
        auto y = random_adapted(tree, horizon, rng);
        o.expect(check_translativity(r, x, shift(tree, t, r.eligible()), t).passed(), r.name() + " translativity");
        o.expect(check_monotonicity(r, x, above(x), t).passed(), r.name() + " monotonicity");
        o.expect(check_decomposability(r, x, y, split(tree, t), t).passed(), r.name() + " decomposability");
        if (!coherent) continue;
        o.expect(check_normalization(r, x, t).passed(), r.name() + " normalization");
        std::vector<Rational> k;
        for (Eigen::Index i = 0; i < tree.layer_size(t); ++i) k.push_back(Rational(1 + rng() % 4) / (1 + rng() % 3));
        o.expect(check_positive_homogeneity(r, x, k, t).passed(), r.name() + " positive homogeneity");
      }
  };
  auto b22 = binomial(2, 2);
  Superhedging shp(b22, bid_ask_cones(b22));
  polyhedral(shp, true);
  NodeSets regions;
  for (Eigen::Index n = 0; n < b22.num_nodes(); ++n)
    regions.push_back(Polyhedron::from_halfspaces(2, {ge({1, 1}, -1), ge({1, 2}, q("-3/2")), ge({2, 1}, q("-3/2"))}));
  polyhedral(*convex_superhedging(b22, regions), false);
  auto fair = full_tree(2, 1, {q("1/2"), q("1/2")});
  AverageValueAtRisk avar(fair, AvarParams::constant(fair, q("1/2")), 1);
  polyhedral(avar, true);
  auto leaf2 = two_leaf(2);
  AverageValueAtRisk avar_partial(leaf2, AvarParams::constant(leaf2, q("1/3")), 1);
  polyhedral(avar_partial, true);
  auto b21 = binomial(2, 1);
  polyhedral(*composed_avar(b21, varied_params(b21), 1), true);

  auto tree3 = full_tree(3, 2, {q("1/2"), q("1/2")});
  EntropicParams params{Eigen::Vector2d(0.5, 2.0)};
  const double tol = 1e-10;
  for (int t = 0; t < 3; ++t)
    for (int rep = 0; rep < 3; ++rep) {
      auto x = to_real(random_adapted(tree3, 3, rng));
      auto y = to_real(random_adapted(tree3, 3, rng));
      auto m = to_real(random_adapted(tree3, t, rng));
      auto up = to_real(above(random_adapted(tree3, 3, rng)));
      auto lo = up;
      for (auto& v : lo.values) v.array() -= 1.0;
      o.expect(check_entropic_translativity(tree3, params, x, m, t, tol).passed(), "entropic translativity");
      o.expect(check_entropic_monotonicity(tree3, params, lo, up, t, tol).passed(), "entropic monotonicity");
      o.expect(check_entropic_decomposability(tree3, params, x, y, split(tree3, t), t, tol).passed(),
               "entropic decomposability");
    }
  RealAdapted zero{3, std::vector<Eigen::VectorXd>(static_cast<std::size_t>(tree3.layer_size(3)), Eigen::Vector2d::Zero())};
  auto rho0 = entropic_value(tree3, params, zero, 0);
  o.expect(rho0.values[0].cwiseAbs().maxCoeff() <= tol, "entropic finiteness and normalization at zero");
  if (o.pass)
    o.detail = std::to_string(o.cases) +
               " checks over shp, convex shp, avar (m = d and m < d), composed avar and entropic";
  return o;
}

// 9. Randomized kernel properties against grid oracles.
Outcome kernel() {
  Outcome o;
  PropertyTally tally = run_kernel_properties(7);
  o.cases = tally.cases;
  o.pass = tally.failures == 0 && tally.cases == 500;
  o.detail = std::to_string(tally.cases) + " cases, " + std::to_string(tally.failures) + " failures" +
             (tally.notes.empty() ? "" : "; first: " + tally.notes.front());
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"SHP dual-route equality", shp_routes},
      {"SHP multiportfolio time consistency", shp_consistency},
      {"AV@R inconsistency witness", avar_witness},
      {"composed AV@R", composed_avar_checks},
      {"cocycle triangle", cocycle_triangle},
      {"SHP stability and W^max decomposition", shp_stability},
      {"entropic cocycle and recursion", entropic},
      {"axiom suite", axioms},
      {"polyhedral kernel properties", kernel},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failed;
    std::printf("criterion %zu %s: %s (%.1f s) %s\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first, secs,
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failed;
}
