#include "setrisk/scenario_tree.hpp"

#include "setrisk/error.hpp"

namespace setrisk {

ScenarioTree::ScenarioTree(std::vector<NodeSpec> nodes, int num_assets) : d_(num_assets) {
  if (num_assets < 1) throw InvalidInput("number of assets must be positive");
  if (nodes.empty()) throw InvalidInput("tree has no nodes");
  nodes_.reserve(nodes.size());
  for (auto& spec : nodes) {
    if (by_id_.count(spec.id)) throw InvalidInput("duplicate node id '" + spec.id + "'");
    by_id_[spec.id] = static_cast<Eigen::Index>(nodes_.size());
    nodes_.push_back(Node{std::move(spec)});
  }
  bool have_root = false;
  for (Eigen::Index i = 0; i < num_nodes(); ++i) {
    Node& n = nodes_[i];
    if (!n.spec.parent) {
      if (have_root) throw InvalidInput("second root '" + n.spec.id + "'");
      if (n.spec.time != 0) throw InvalidInput("root '" + n.spec.id + "' must have time 0");
      have_root = true;
      root_ = i;
      n.spec.prob = 1;
      continue;
    }
    auto it = by_id_.find(*n.spec.parent);
    if (it == by_id_.end()) throw InvalidInput("node '" + n.spec.id + "': unknown parent '" + *n.spec.parent + "'");
    n.parent = it->second;
    if (n.spec.prob <= 0) throw InvalidInput("node '" + n.spec.id + "': branch probability must be positive");
    nodes_[n.parent].children.push_back(i);
  }
  if (!have_root) throw InvalidInput("tree has no root");

  // Breadth-first from the root: checks times, reachability, computes P(n).
  std::vector<Eigen::Index> order{root_};
  std::vector<bool> seen(nodes_.size(), false);
  seen[root_] = true;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const Node& n = nodes_[order[k]];
    Rational total = 0;
    for (Eigen::Index c : n.children) {
      Node& child = nodes_[c];
      if (child.spec.time != n.spec.time + 1)
        throw InvalidInput("node '" + child.spec.id + "': time must be parent time + 1");
      child.abs_prob = n.abs_prob * child.spec.prob;
      total += child.spec.prob;
      seen[c] = true;
      order.push_back(c);
    }
    if (!n.children.empty() && total != 1)
      throw InvalidInput("children of '" + n.spec.id + "' have probabilities summing to " + format_rational(total));
    horizon_ = std::max(horizon_, n.spec.time);
  }
  if (order.size() != nodes_.size()) throw InvalidInput("tree is not connected");
  for (const Node& n : nodes_)
    if (n.children.empty() && n.spec.time != horizon_)
      throw InvalidInput("leaf '" + n.spec.id + "' must have time " + std::to_string(horizon_));

  layers_.assign(static_cast<std::size_t>(horizon_) + 1, {});
  for (Eigen::Index i = 0; i < num_nodes(); ++i) {
    auto& layer = layers_[static_cast<std::size_t>(nodes_[i].spec.time)];
    nodes_[i].layer_pos = static_cast<Eigen::Index>(layer.size());
    layer.push_back(i);
  }
}

const std::vector<Eigen::Index>& ScenarioTree::nodes_at(int t) const {
  if (t < 0 || t > horizon_) throw InvalidInput("time " + std::to_string(t) + " outside 0.." + std::to_string(horizon_));
  return layers_[static_cast<std::size_t>(t)];
}

std::optional<Eigen::Index> ScenarioTree::find(const std::string& id) const {
  auto it = by_id_.find(id);
  if (it == by_id_.end()) return std::nullopt;
  return it->second;
}

Eigen::Index ScenarioTree::index_of(const std::string& id) const {
  auto n = find(id);
  if (!n) throw InvalidInput("unknown node id '" + id + "'");
  return *n;
}

Eigen::Index ScenarioTree::ancestor(Eigen::Index n, int t) const {
  if (t > time(n)) throw InvalidInput("ancestor time after node time");
  while (time(n) > t) n = parent(n);
  return n;
}

std::vector<Eigen::Index> ScenarioTree::descendants_at(Eigen::Index n, int s) const {
  std::vector<Eigen::Index> out;
  for (Eigen::Index k : nodes_at(s))
    if (ancestor(k, time(n)) == n) out.push_back(k);
  return out;
}

std::vector<ScenarioTree::NodeSpec> ScenarioTree::specs() const {
  std::vector<NodeSpec> out;
  for (const Node& n : nodes_) out.push_back(n.spec);
  return out;
}

AdaptedVector AdaptedVector::constant(const ScenarioTree& tree, int t, const Vector& v) {
  if (v.size() != tree.d()) throw DimensionMismatch("constant adapted vector");
  return AdaptedVector{t, std::vector<Vector>(static_cast<std::size_t>(tree.layer_size(t)), v)};
}

AdaptedVector AdaptedVector::zero(const ScenarioTree& tree, int t) { return constant(tree, t, zero_vector(tree.d())); }

Vector AdaptedVector::flatten() const {
  if (values.empty()) return Vector(0);
  const Eigen::Index d = values.front().size();
  Vector out(d * static_cast<Eigen::Index>(values.size()));
  for (std::size_t k = 0; k < values.size(); ++k) out.segment(static_cast<Eigen::Index>(k) * d, d) = values[k];
  return out;
}

AdaptedVector AdaptedVector::unflatten(const ScenarioTree& tree, int t, const Vector& flat) {
  const Eigen::Index d = tree.d();
  if (flat.size() != d * tree.layer_size(t)) throw DimensionMismatch("adapted vector coordinates");
  AdaptedVector out{t, {}};
  for (Eigen::Index k = 0; k < tree.layer_size(t); ++k) out.values.push_back(flat.segment(k * d, d));
  return out;
}

bool operator==(const AdaptedVector& a, const AdaptedVector& b) { return a.time == b.time && a.values == b.values; }

AdaptedVector operator+(const AdaptedVector& a, const AdaptedVector& b) {
  if (a.time != b.time || a.values.size() != b.values.size()) throw DimensionMismatch("adapted vector sum");
  AdaptedVector out = a;
  for (std::size_t k = 0; k < a.values.size(); ++k) out.values[k] += b.values[k];
  return out;
}

AdaptedVector operator-(const AdaptedVector& a) {
  AdaptedVector out = a;
  for (auto& v : out.values) v = -v;
  return out;
}

AdaptedVector operator-(const AdaptedVector& a, const AdaptedVector& b) { return a + (-b); }

VectorMeasure::VectorMeasure(const ScenarioTree& tree, std::vector<Vector> leaf_densities)
    : densities_(std::move(leaf_densities)) {
  const auto& leaves = tree.leaves();
  if (densities_.size() != leaves.size()) throw DimensionMismatch("measure needs one density per leaf");
  Vector mass = zero_vector(tree.d());
  for (std::size_t k = 0; k < leaves.size(); ++k) {
    if (densities_[k].size() != tree.d()) throw DimensionMismatch("density vector size");
    for (Eigen::Index i = 0; i < tree.d(); ++i)
      if (densities_[k][i] < 0) throw InvalidInput("negative density at leaf '" + tree.id(leaves[k]) + "'");
    mass += tree.prob(leaves[k]) * densities_[k];
  }
  for (Eigen::Index i = 0; i < tree.d(); ++i)
    if (mass[i] != 1)
      throw InvalidInput("density component " + std::to_string(i) + " integrates to " + format_rational(mass[i]));
}

VectorMeasure VectorMeasure::physical(const ScenarioTree& tree) {
  Vector ones = Vector::Constant(tree.d(), Rational(1));
  return VectorMeasure(tree, std::vector<Vector>(tree.leaves().size(), ones));
}

bool VectorMeasure::is_equivalent() const {
  for (const auto& v : densities_)
    for (Eigen::Index i = 0; i < v.size(); ++i)
      if (v[i] <= 0) return false;
  return true;
}

DensityProcess::DensityProcess(const ScenarioTree& tree, const VectorMeasure& q) : tree_(&tree) {
  aggregate_.assign(static_cast<std::size_t>(tree.num_nodes()), zero_vector(tree.d()));
  const auto& leaves = tree.leaves();
  for (std::size_t k = 0; k < leaves.size(); ++k) aggregate_[leaves[k]] = q.density_at_leaf(static_cast<Eigen::Index>(k));
  for (int t = tree.horizon() - 1; t >= 0; --t)
    for (Eigen::Index n : tree.nodes_at(t))
      for (Eigen::Index c : tree.children(n)) aggregate_[n] += tree.branch_prob(c) * aggregate_[c];
}

Vector DensityProcess::xi_at(int t, Eigen::Index node_s) const {
  const Vector& num = aggregate_[node_s];
  const Vector& den = aggregate_[tree_->ancestor(node_s, t)];
  Vector out(num.size());
  for (Eigen::Index i = 0; i < num.size(); ++i) out[i] = den[i] > 0 ? Rational(num[i] / den[i]) : Rational(1);
  return out;
}

AdaptedVector DensityProcess::xi(int t, int s) const {
  if (t > s) throw InvalidInput("xi requires t <= s");
  AdaptedVector out{s, {}};
  for (Eigen::Index k : tree_->nodes_at(s)) out.values.push_back(xi_at(t, k));
  return out;
}

AdaptedVector conditional_expectation(const ScenarioTree& tree, const AdaptedVector& x, const VectorMeasure& q,
                                      int t) {
  const int s = x.time;
  if (t > s) throw InvalidInput("conditional expectation requires t <= time of X");
  if (static_cast<Eigen::Index>(x.values.size()) != tree.layer_size(s)) throw DimensionMismatch("adapted vector layer");
  DensityProcess dp(tree, q);
  AdaptedVector out = AdaptedVector::zero(tree, t);
  for (Eigen::Index k : tree.nodes_at(s)) {
    const Vector& v = x.values[tree.layer_pos(k)];
    if (v.size() != tree.d()) throw DimensionMismatch("adapted vector component count");
    Eigen::Index n = tree.ancestor(k, t);
    out.values[tree.layer_pos(n)] += tree.cond_prob(k, n) * dp.xi_at(t, k).cwiseProduct(v);
  }
  return out;
}

AdaptedVector conditional_expectation(const ScenarioTree& tree, const AdaptedVector& x, int t) {
  return conditional_expectation(tree, x, VectorMeasure::physical(tree), t);
}

AdaptedVector xi(const ScenarioTree& tree, const VectorMeasure& q, int t, int s) {
  return DensityProcess(tree, q).xi(t, s);
}

VectorMeasure paste(const ScenarioTree& tree, const VectorMeasure& q, const VectorMeasure& r, int s) {
  DensityProcess dq(tree, q), dr(tree, r);
  std::vector<Vector> dens;
  for (Eigen::Index leaf : tree.leaves())
    dens.push_back(dq.xi_at(0, tree.ancestor(leaf, s)).cwiseProduct(dr.xi_at(s, leaf)));
  return VectorMeasure(tree, std::move(dens));
}

bool restrict_equals_P(const ScenarioTree& tree, const VectorMeasure& q, int t) {
  DensityProcess dq(tree, q);
  for (Eigen::Index n : tree.nodes_at(t))
    for (Eigen::Index i = 0; i < tree.d(); ++i)
      if (dq.aggregate(n)[i] != 1) return false;
  return true;
}

VectorMeasure modify_after(const ScenarioTree& tree, const VectorMeasure& q, int s) {
  DensityProcess dq(tree, q);
  std::vector<Vector> dens;
  for (Eigen::Index leaf : tree.leaves()) dens.push_back(dq.xi_at(s, leaf));
  return VectorMeasure(tree, std::move(dens));
}

Matrix embedding(const ScenarioTree& tree, int s, int r) {
  if (s > r) throw InvalidInput("embedding requires s <= r");
  const Eigen::Index d = tree.d();
  Matrix m = Matrix::Zero(d * tree.layer_size(r), d * tree.layer_size(s));
  for (Eigen::Index k : tree.nodes_at(r)) {
    Eigen::Index a = tree.ancestor(k, s);
    for (Eigen::Index i = 0; i < d; ++i) m(tree.layer_pos(k) * d + i, tree.layer_pos(a) * d + i) = 1;
  }
  return m;
}

Matrix eligible_embedding(const ScenarioTree& tree, int s, int m) {
  const Eigen::Index d = tree.d();
  if (m < 1 || m > d) throw InvalidInput("eligible count must be in 1..d");
  const Eigen::Index n = tree.layer_size(s);
  Matrix e = Matrix::Zero(d * n, m * n);
  for (Eigen::Index k = 0; k < n; ++k)
    for (Eigen::Index i = 0; i < m; ++i) e(k * d + i, k * m + i) = 1;
  return e;
}

Matrix expectation_matrix(const ScenarioTree& tree, int t, int s) {
  if (t > s) throw InvalidInput("expectation requires t <= s");
  const Eigen::Index d = tree.d();
  Matrix m = Matrix::Zero(d * tree.layer_size(t), d * tree.layer_size(s));
  for (Eigen::Index k : tree.nodes_at(s)) {
    Eigen::Index a = tree.ancestor(k, t);
    for (Eigen::Index i = 0; i < d; ++i) m(tree.layer_pos(a) * d + i, tree.layer_pos(k) * d + i) = tree.cond_prob(k, a);
  }
  return m;
}

Vector probability_weighted(const ScenarioTree& tree, const AdaptedVector& v) {
  Vector flat = v.flatten();
  const Eigen::Index d = tree.d();
  for (Eigen::Index k : tree.nodes_at(v.time))
    flat.segment(tree.layer_pos(k) * d, d) *= tree.prob(k);
  return flat;
}

}  // namespace setrisk
