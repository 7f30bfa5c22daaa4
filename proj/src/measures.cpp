#include "setrisk/measures.hpp"

#include <cmath>

#include "setrisk/error.hpp"
#include "setrisk/lp.hpp"
#include "setrisk/parallel.hpp"

namespace setrisk {

namespace {

void check_sizes(const ScenarioTree& tree, const NodeSets& sets, const char* what) {
  if (static_cast<Eigen::Index>(sets.size()) != tree.num_nodes())
    throw InvalidInput(std::string(what) + ": need one set per node");
  for (Eigen::Index n = 0; n < tree.num_nodes(); ++n)
    if (sets[n].dim() != tree.d())
      throw DimensionMismatch(std::string(what) + " at node '" + tree.id(n) + "'");
}

// AV@R block for one time-t node and component: the cone of x in R^L (one
// entry per payoff node below n) for which some z >= 0 satisfies
// x + z >= E_n[z] / lambda. Computed by lifting and projecting out z.
Polyhedron avar_block(const std::vector<Rational>& cond_probs, const Rational& lambda) {
  const Eigen::Index l = static_cast<Eigen::Index>(cond_probs.size());
  std::vector<HalfSpace<Rational>> cons;
  for (Eigen::Index j = 0; j < l; ++j) {
    cons.push_back({unit_vector(2 * l, l + j), Rational(0)});
    Vector a = Vector::Zero(2 * l);
    a[j] = 1;
    a[l + j] += 1;
    for (Eigen::Index k = 0; k < l; ++k) a[l + k] -= cond_probs[static_cast<std::size_t>(k)] / lambda;
    cons.push_back({std::move(a), Rational(0)});
  }
  std::vector<Eigen::Index> keep;
  for (Eigen::Index j = 0; j < l; ++j) keep.push_back(j);
  return project(Polyhedron::from_halfspaces(2 * l, std::move(cons)), keep);
}

// Places block constraints (over the nodes `below`, component i) into the
// time-r coordinates.
void place_block(const ScenarioTree& tree, const Polyhedron& block, const std::vector<Eigen::Index>& below,
                 Eigen::Index i, Eigen::Index dim, std::vector<HalfSpace<Rational>>& ineq,
                 std::vector<HalfSpace<Rational>>& eq) {
  const Eigen::Index d = tree.d();
  auto lift = [&](const HalfSpace<Rational>& h) {
    Vector a = Vector::Zero(dim);
    for (std::size_t j = 0; j < below.size(); ++j)
      a[tree.layer_pos(below[j]) * d + i] = h.a[static_cast<Eigen::Index>(j)];
    return HalfSpace<Rational>{std::move(a), h.b};
  };
  for (const auto& h : block.inequalities()) ineq.push_back(lift(h));
  for (const auto& h : block.equalities()) eq.push_back(lift(h));
}

AcceptanceSet avar_lifted(const ScenarioTree& tree, const AvarParams& params, int t, int r, int m) {
  const Eigen::Index d = tree.d();
  const Eigen::Index dim = d * tree.layer_size(r);
  std::vector<Eigen::Index> nodes = tree.nodes_at(t);
  std::vector<std::vector<Polyhedron>> blocks(nodes.size());
  parallel_for(nodes.size(), [&](std::size_t k) {
    Eigen::Index n = nodes[k];
    std::vector<Eigen::Index> below = tree.descendants_at(n, r);
    std::vector<Rational> probs;
    for (Eigen::Index b : below) probs.push_back(tree.cond_prob(b, n));
    for (Eigen::Index i = 0; i < std::min<Eigen::Index>(m, d); ++i) {
      Polyhedron block = avar_block(probs, params.lambda[n][i]);
      block.convert();
      blocks[k].push_back(std::move(block));
    }
  });
  std::vector<HalfSpace<Rational>> ineq, eq;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    std::vector<Eigen::Index> below = tree.descendants_at(nodes[k], r);
    for (Eigen::Index i = 0; i < d; ++i) {
      if (i < m) {
        place_block(tree, blocks[k][static_cast<std::size_t>(i)], below, i, dim, ineq, eq);
      } else {
        for (Eigen::Index b : below) eq.push_back({unit_vector(dim, tree.layer_pos(b) * d + i), Rational(0)});
      }
    }
  }
  return {r, Polyhedron::from_halfspaces(dim, std::move(ineq), std::move(eq))};
}

}  // namespace

void validate_solvency_regions(const ScenarioTree& tree, const NodeSets& regions) {
  check_sizes(tree, regions, "solvency region");
  const Polyhedron orth = Polyhedron::orthant(tree.d());
  for (Eigen::Index n = 0; n < tree.num_nodes(); ++n) {
    if (!contains_set(regions[n], orth))
      throw InvalidInput("solvency set at node '" + tree.id(n) + "' does not contain the nonnegative orthant");
    if (regions[n].inequalities().empty() && regions[n].equalities().empty())
      throw InvalidInput("solvency set at node '" + tree.id(n) + "' is all of R^d");
  }
}

void validate_solvency_cones(const ScenarioTree& tree, const NodeSets& cones) {
  validate_solvency_regions(tree, cones);
  for (Eigen::Index n = 0; n < tree.num_nodes(); ++n)
    if (!cones[n].is_cone()) throw InvalidInput("solvency cone at node '" + tree.id(n) + "' is not a cone at 0");
}

AcceptanceSet shp_acceptance(const ScenarioTree& tree, const NodeSets& cones, int t) {
  const int horizon = tree.horizon();
  const Eigen::Index d = tree.d();
  const Eigen::Index dim = d * tree.layer_size(horizon);
  std::vector<Vector> rays, lines;
  for (int s = t; s <= horizon; ++s) {
    for (Eigen::Index n : tree.nodes_at(s)) {
      std::vector<Eigen::Index> leaves = tree.descendants_at(n, horizon);
      auto spread = [&](const Vector& g) {
        Vector v = Vector::Zero(dim);
        for (Eigen::Index leaf : leaves) v.segment(tree.layer_pos(leaf) * d, d) = g;
        return v;
      };
      for (const auto& r : cones[n].rays()) rays.push_back(spread(r));
      for (const auto& l : cones[n].lines()) lines.push_back(spread(l));
    }
  }
  return {horizon, Polyhedron::from_generators(dim, {Vector::Zero(dim)}, std::move(rays), std::move(lines))};
}

std::vector<Polyhedron> shp_value(const ScenarioTree& tree, const NodeSets& cones, const AdaptedVector& y, int t) {
  check_sizes(tree, cones, "solvency cone");
  const int horizon = tree.horizon();
  if (y.time != horizon) throw InvalidInput("superhedging payoff must be adapted at the horizon");
  if (t < 0 || t > horizon) throw InvalidInput("evaluation time outside the horizon");
  std::vector<Polyhedron> current(static_cast<std::size_t>(tree.layer_size(horizon)));
  {
    const auto& leaves = tree.leaves();
    parallel_for(leaves.size(), [&](std::size_t k) {
      current[k] = translate(cones[leaves[k]], y.values[k]);
      current[k].convert();
    });
  }
  for (int s = horizon - 1; s >= t; --s) {
    const auto& layer = tree.nodes_at(s);
    std::vector<Polyhedron> next(layer.size());
    parallel_for(layer.size(), [&](std::size_t k) {
      Eigen::Index n = layer[k];
      const auto& kids = tree.children(n);
      Polyhedron meet = current[static_cast<std::size_t>(tree.layer_pos(kids.front()))];
      for (std::size_t c = 1; c < kids.size(); ++c)
        meet = intersect(meet, current[static_cast<std::size_t>(tree.layer_pos(kids[c]))]);
      if (meet.is_empty())
        throw ModelInconsistency("no portfolio at node '" + tree.id(n) + "' superhedges every successor");
      next[k] = minkowski_sum(meet, cones[n]);
      next[k].convert();
    });
    current = std::move(next);
  }
  return current;
}

Superhedging::Superhedging(const ScenarioTree& tree, NodeSets cones)
    : RiskMeasure(tree, tree.d()), cones_(std::move(cones)) {
  validate_solvency_cones(tree, cones_);
}

AcceptanceSet Superhedging::build_acceptance(int t) const { return shp_acceptance(tree(), cones_, t); }

AcceptanceSet selector_set(const ScenarioTree& tree, const NodeSets& regions, int s) {
  std::vector<Polyhedron> parts;
  for (Eigen::Index n : tree.nodes_at(s)) parts.push_back(regions[n]);
  return {s, join_nodes(parts)};
}

std::unique_ptr<ComposedMeasure> convex_superhedging(const ScenarioTree& tree, const NodeSets& regions) {
  validate_solvency_regions(tree, regions);
  const int horizon = tree.horizon();
  bool coherent = true;
  for (const auto& k : regions) coherent = coherent && k.is_cone();
  OneStepFamily family{{}, selector_set(tree, regions, horizon)};
  for (int t = 0; t < horizon; ++t) {
    AcceptanceSet lk = embed(tree, selector_set(tree, regions, t), t + 1);
    AcceptanceSet plus{t + 1, Polyhedron::orthant(tree.d() * tree.layer_size(t + 1))};
    family.stepped.push_back(sum(tree, lk, plus));
  }
  return std::make_unique<ComposedMeasure>(tree, tree.d(), std::move(family), "cshp", coherent);
}

std::vector<Polyhedron> convex_shp_value(const ScenarioTree& tree, const NodeSets& regions, const AdaptedVector& y,
                                         int t) {
  validate_solvency_regions(tree, regions);
  const int horizon = tree.horizon();
  if (y.time != horizon) throw InvalidInput("superhedging payoff must be adapted at the horizon");
  if (t < 0 || t > horizon) throw InvalidInput("evaluation time outside the horizon");
  const Polyhedron plus = Polyhedron::orthant(tree.d());
  std::vector<Polyhedron> current(static_cast<std::size_t>(tree.layer_size(horizon)));
  {
    const auto& leaves = tree.leaves();
    parallel_for(leaves.size(), [&](std::size_t k) {
      current[k] = translate(regions[leaves[k]], y.values[k]);
      current[k].convert();
    });
  }
  // V_t(n) = K_t(n) + ∩_c (V_{t+1}(c) + R^d_+): the orthant term is the free
  // disposal L_+(F_{t+1}) of the one-step set, absorbed only when K is a cone.
  for (int s = horizon - 1; s >= t; --s) {
    const auto& layer = tree.nodes_at(s);
    std::vector<Polyhedron> next(layer.size());
    parallel_for(layer.size(), [&](std::size_t k) {
      Eigen::Index n = layer[k];
      const auto& kids = tree.children(n);
      Polyhedron meet = minkowski_sum(current[static_cast<std::size_t>(tree.layer_pos(kids.front()))], plus);
      for (std::size_t c = 1; c < kids.size(); ++c)
        meet = intersect(meet, minkowski_sum(current[static_cast<std::size_t>(tree.layer_pos(kids[c]))], plus));
      if (meet.is_empty())
        throw ModelInconsistency("no portfolio at node '" + tree.id(n) + "' superhedges every successor");
      next[k] = minkowski_sum(meet, regions[n]);
      next[k].convert();
    });
    current = std::move(next);
  }
  return current;
}

AvarParams AvarParams::constant(const ScenarioTree& tree, const Rational& value) {
  AvarParams p;
  p.lambda.assign(static_cast<std::size_t>(tree.num_nodes()), Vector::Constant(tree.d(), value));
  p.validate(tree);
  return p;
}

void AvarParams::validate(const ScenarioTree& tree) const {
  if (static_cast<Eigen::Index>(lambda.size()) != tree.num_nodes())
    throw InvalidInput("AV@R parameters: need one vector per node");
  for (Eigen::Index n = 0; n < tree.num_nodes(); ++n) {
    if (lambda[n].size() != tree.d()) throw DimensionMismatch("AV@R parameter at node '" + tree.id(n) + "'");
    for (Eigen::Index i = 0; i < tree.d(); ++i)
      if (lambda[n][i] <= 0 || lambda[n][i] >= 1)
        throw InvalidInput("AV@R parameter at node '" + tree.id(n) + "' must lie in (0,1)");
  }
}

AcceptanceSet avar_acceptance(const ScenarioTree& tree, const AvarParams& params, int t) {
  return avar_lifted(tree, params, t, tree.horizon(), tree.d());
}

AcceptanceSet avar_stepped_acceptance(const ScenarioTree& tree, const AvarParams& params, int t, int s, int m) {
  if (s <= t) throw PreconditionViolation("stepped AV@R requires t < s");
  return avar_lifted(tree, params, t, s, m);
}

AverageValueAtRisk::AverageValueAtRisk(const ScenarioTree& tree, AvarParams params, int m)
    : RiskMeasure(tree, m), params_(std::move(params)) {
  params_.validate(tree);
}

AcceptanceSet AverageValueAtRisk::build_acceptance(int t) const { return avar_acceptance(tree(), params_, t); }

std::vector<Polyhedron> avar_value(const ScenarioTree& tree, const AvarParams& params, const AdaptedVector& x, int t,
                                   int m) {
  AverageValueAtRisk r(tree, params, m);
  return split_nodes(tree, r.value(x, t), t, m);
}

std::vector<DualPair> avar_vertex_pairs(const ScenarioTree& tree, const AvarParams& params, int t) {
  const Eigen::Index d = tree.d();
  const int horizon = tree.horizon();
  const auto& leaves = tree.leaves();
  std::vector<DualPair> out;
  for (Eigen::Index n : tree.nodes_at(t)) {
    std::vector<Eigen::Index> below = tree.descendants_at(n, horizon);
    const Eigen::Index l = static_cast<Eigen::Index>(below.size());
    for (Eigen::Index i = 0; i < d; ++i) {
      std::vector<HalfSpace<Rational>> cons;
      Vector mean(l);
      for (Eigen::Index j = 0; j < l; ++j) {
        cons.push_back({unit_vector(l, j), Rational(0)});
        cons.push_back({Vector(-unit_vector(l, j)), Rational(-1 / params.lambda[n][i])});
        mean[j] = tree.cond_prob(below[static_cast<std::size_t>(j)], n);
      }
      Polyhedron box = Polyhedron::from_halfspaces(l, std::move(cons), {{mean, Rational(1)}});
      for (const auto& y : box.vertices()) {
        std::vector<Vector> dens(leaves.size(), Vector::Constant(d, Rational(1)));
        for (Eigen::Index j = 0; j < l; ++j) dens[tree.layer_pos(below[static_cast<std::size_t>(j)])][i] = y[j];
        AdaptedVector w = AdaptedVector::zero(tree, t);
        w.values[tree.layer_pos(n)][i] = 1;
        out.push_back(DualPair{t, VectorMeasure(tree, std::move(dens)), std::move(w)});
      }
    }
  }
  return out;
}

Polyhedron avar_dual_value(const ScenarioTree& tree, const AvarParams& params, const AdaptedVector& x, int t) {
  std::vector<WeightedPair> family;
  for (auto& p : avar_vertex_pairs(tree, params, t)) family.push_back({std::move(p), ExtendedRational(0)});
  return evaluate_dual_representation(tree, family, x, tree.d());
}

std::unique_ptr<ComposedMeasure> composed_avar(const ScenarioTree& tree, const AvarParams& params, int m) {
  params.validate(tree);
  const int horizon = tree.horizon();
  OneStepFamily family{{}, avar_acceptance(tree, params, horizon)};
  for (int t = 0; t < horizon; ++t) family.stepped.push_back(avar_stepped_acceptance(tree, params, t, t + 1, m));
  return std::make_unique<ComposedMeasure>(tree, m, std::move(family), "composed-avar", true);
}

std::vector<Polyhedron> composed_avar_value(const ScenarioTree& tree, const AvarParams& params, const AdaptedVector& x,
                                            int t, int m) {
  auto r = composed_avar(tree, params, m);
  return split_nodes(tree, r->value(x, t), t, m);
}

ExtendedRational composed_avar_dual_support(const ScenarioTree& tree, const AvarParams& params, const AdaptedVector& x,
                                            const AdaptedVector& w) {
  const Eigen::Index d = tree.d();
  const int horizon = tree.horizon();
  const int t = w.time;
  if (x.time > horizon || t > horizon) throw InvalidInput("time outside horizon");
  AdaptedVector xt = AdaptedVector::unflatten(tree, horizon, embedding(tree, x.time, horizon) * x.flatten());

  // Variables: y(k, i) for nodes k with time(k) > t.
  std::vector<Eigen::Index> offset(static_cast<std::size_t>(tree.num_nodes()), -1);
  Eigen::Index nvars = 0;
  for (int s = t + 1; s <= horizon; ++s)
    for (Eigen::Index k : tree.nodes_at(s)) {
      offset[k] = nvars;
      nvars += d;
    }
  if (nvars == 0) {
    Rational val = 0;
    for (Eigen::Index n : tree.nodes_at(t)) val -= tree.prob(n) * w.at(tree, n).dot(xt.at(tree, n));
    return ExtendedRational(val);
  }

  std::vector<HalfSpace<Rational>> ineq, eq;
  for (int s = t + 1; s <= horizon; ++s) {
    for (Eigen::Index k : tree.nodes_at(s)) {
      Eigen::Index p = tree.parent(k);
      for (Eigen::Index i = 0; i < d; ++i) {
        ineq.push_back({unit_vector(nvars, offset[k] + i), Rational(0)});
        // y(p)/lambda(p) - y(k) >= 0
        Vector a = Vector::Zero(nvars);
        a[offset[k] + i] = -1;
        Rational b = 0;
        const Rational inv = 1 / params.lambda[p][i];
        if (tree.time(p) == t)
          b = -inv * w.at(tree, p)[i];
        else
          a[offset[p] + i] = inv;
        ineq.push_back({std::move(a), std::move(b)});
      }
    }
  }
  for (int s = t; s < horizon; ++s) {
    for (Eigen::Index k : tree.nodes_at(s)) {
      for (Eigen::Index i = 0; i < d; ++i) {
        Vector a = Vector::Zero(nvars);
        for (Eigen::Index c : tree.children(k)) a[offset[c] + i] = tree.branch_prob(c);
        Rational b = 0;
        if (s == t)
          b = w.at(tree, k)[i];
        else
          a[offset[k] + i] = -1;
        eq.push_back({std::move(a), std::move(b)});
      }
    }
  }
  Vector cost = Vector::Zero(nvars);
  for (Eigen::Index leaf : tree.leaves())
    for (Eigen::Index i = 0; i < d; ++i) cost[offset[leaf] + i] = tree.prob(leaf) * xt.at(tree, leaf)[i];
  auto res = lp_minimize<Rational>(cost, ineq, eq);
  using S = LpResult<Rational>::Status;
  if (res.status == S::Infeasible) throw PreconditionViolation("composed AV@R dual system is infeasible");
  if (res.status == S::Unbounded) return ExtendedRational::pos_inf();
  return ExtendedRational(Rational(-res.value));
}

void EntropicParams::validate(int d) const {
  if (lambda.size() != d) throw DimensionMismatch("entropic risk aversion vector");
  for (Eigen::Index i = 0; i < lambda.size(); ++i)
    if (!(lambda[i] > 0)) throw InvalidInput("entropic risk aversion must be positive");
}

RealAdapted to_real(const AdaptedVector& x) {
  RealAdapted out{x.time, {}};
  for (const auto& v : x.values) {
    Eigen::VectorXd r(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) r[i] = to_double(v[i]);
    out.values.push_back(std::move(r));
  }
  return out;
}

RealAdapted entropic_value(const ScenarioTree& tree, const EntropicParams& params, const RealAdapted& x, int t) {
  params.validate(tree.d());
  if (t > x.time) throw InvalidInput("entropic evaluation time after payoff time");
  const Eigen::Index d = tree.d();
  RealAdapted out{t, std::vector<Eigen::VectorXd>(static_cast<std::size_t>(tree.layer_size(t)), Eigen::VectorXd::Zero(d))};
  for (Eigen::Index n : tree.nodes_at(t)) {
    std::vector<Eigen::Index> below = tree.descendants_at(n, x.time);
    for (Eigen::Index i = 0; i < d; ++i) {
      // log-sum-exp with the largest exponent factored out.
      double top = -INFINITY;
      for (Eigen::Index k : below) top = std::max(top, -params.lambda[i] * x.values[tree.layer_pos(k)][i]);
      double acc = 0;
      for (Eigen::Index k : below)
        acc += to_double(tree.cond_prob(k, n)) * std::exp(-params.lambda[i] * x.values[tree.layer_pos(k)][i] - top);
      out.values[tree.layer_pos(n)][i] = (top + std::log(acc)) / params.lambda[i];
    }
  }
  return out;
}

RealAdapted relative_entropy(const ScenarioTree& tree, const VectorMeasure& q, int t, int s) {
  if (t > s) throw InvalidInput("relative entropy requires t <= s");
  const Eigen::Index d = tree.d();
  DensityProcess dp(tree, q);
  RealAdapted out{t, std::vector<Eigen::VectorXd>(static_cast<std::size_t>(tree.layer_size(t)), Eigen::VectorXd::Zero(d))};
  for (Eigen::Index k : tree.nodes_at(s)) {
    Eigen::Index n = tree.ancestor(k, t);
    Vector xi_k = dp.xi_at(t, k);
    const double p = to_double(tree.cond_prob(k, n));
    for (Eigen::Index i = 0; i < d; ++i) {
      const double x = to_double(xi_k[i]);
      if (x > 0) out.values[tree.layer_pos(n)][i] += p * x * std::log(x);
    }
  }
  return out;
}

RealAdapted entropic_penalty(const ScenarioTree& tree, const EntropicParams& params, const VectorMeasure& q, int t,
                             int s) {
  params.validate(tree.d());
  RealAdapted h = relative_entropy(tree, q, t, s);
  for (auto& v : h.values) v = -v.cwiseQuotient(params.lambda);
  return h;
}

}  // namespace setrisk
