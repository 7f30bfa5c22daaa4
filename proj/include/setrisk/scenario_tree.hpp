#ifndef SETRISK_SCENARIO_TREE_HPP
#define SETRISK_SCENARIO_TREE_HPP

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "setrisk/rational.hpp"

namespace setrisk {

/// Finite filtered probability space as a rooted tree. Nodes at time t are the
/// atoms of F_t. Every branch probability is strictly positive and siblings
/// sum to one, so "almost surely" means "at every node".
///
/// Nodes are addressed by a dense index. Within each time layer nodes keep
/// their input order; `layer_pos` is the position inside the layer and fixes
/// the coordinate order of adapted vectors.
class ScenarioTree {
 public:
  struct NodeSpec {
    std::string id;
    std::optional<std::string> parent;
    int time = 0;
    Rational prob{1};  // conditional on the parent; ignored for the root
  };

  /// Validates the tree invariants; throws InvalidInput with the offending id.
  ScenarioTree(std::vector<NodeSpec> nodes, int num_assets);

  int d() const { return d_; }
  int horizon() const { return horizon_; }
  Eigen::Index num_nodes() const { return static_cast<Eigen::Index>(nodes_.size()); }
  Eigen::Index root() const { return root_; }

  const std::vector<Eigen::Index>& nodes_at(int t) const;
  Eigen::Index layer_size(int t) const { return static_cast<Eigen::Index>(nodes_at(t).size()); }
  const std::vector<Eigen::Index>& leaves() const { return nodes_at(horizon_); }

  const std::string& id(Eigen::Index n) const { return nodes_[n].spec.id; }
  std::optional<Eigen::Index> find(const std::string& id) const;
  Eigen::Index index_of(const std::string& id) const;  // throws InvalidInput
  int time(Eigen::Index n) const { return nodes_[n].spec.time; }
  Eigen::Index parent(Eigen::Index n) const { return nodes_[n].parent; }  // -1 at the root
  const std::vector<Eigen::Index>& children(Eigen::Index n) const { return nodes_[n].children; }
  Eigen::Index layer_pos(Eigen::Index n) const { return nodes_[n].layer_pos; }

  /// Conditional probability given the parent (1 at the root).
  const Rational& branch_prob(Eigen::Index n) const { return nodes_[n].spec.prob; }
  /// Unconditional probability P(n).
  const Rational& prob(Eigen::Index n) const { return nodes_[n].abs_prob; }
  /// P(k | n) for k a descendant of n (or n itself).
  Rational cond_prob(Eigen::Index k, Eigen::Index n) const { return prob(k) / prob(n); }

  /// The time-t ancestor of n (n itself when t == time(n)).
  Eigen::Index ancestor(Eigen::Index n, int t) const;
  /// Time-s descendants of n in layer order.
  std::vector<Eigen::Index> descendants_at(Eigen::Index n, int s) const;

  std::vector<NodeSpec> specs() const;

 private:
  struct Node {
    NodeSpec spec;
    Eigen::Index parent = -1;
    std::vector<Eigen::Index> children;
    Eigen::Index layer_pos = 0;
    Rational abs_prob{1};
  };
  int d_ = 1;
  int horizon_ = 0;
  Eigen::Index root_ = 0;
  std::vector<Node> nodes_;
  std::vector<std::vector<Eigen::Index>> layers_;
  std::unordered_map<std::string, Eigen::Index> by_id_;
};

/// A vector of d asset quantities at each node of one time layer, indexed by
/// layer position.
struct AdaptedVector {
  int time = 0;
  std::vector<Vector> values;

  static AdaptedVector constant(const ScenarioTree& tree, int t, const Vector& v);
  static AdaptedVector zero(const ScenarioTree& tree, int t);
  /// Coordinates: layer_pos * d + component.
  Vector flatten() const;
  static AdaptedVector unflatten(const ScenarioTree& tree, int t, const Vector& flat);

  const Vector& at(const ScenarioTree& tree, Eigen::Index node) const { return values[tree.layer_pos(node)]; }
  friend bool operator==(const AdaptedVector& a, const AdaptedVector& b);
};

AdaptedVector operator+(const AdaptedVector& a, const AdaptedVector& b);
AdaptedVector operator-(const AdaptedVector& a);
AdaptedVector operator-(const AdaptedVector& a, const AdaptedVector& b);

/// d component probability measures absolutely continuous w.r.t. P, given by
/// the density vector dQ/dP at each leaf (layer order).
class VectorMeasure {
 public:
  /// Throws InvalidInput unless each component integrates to one and all
  /// densities are non-negative.
  VectorMeasure(const ScenarioTree& tree, std::vector<Vector> leaf_densities);
  static VectorMeasure physical(const ScenarioTree& tree);

  const std::vector<Vector>& densities() const { return densities_; }
  const Vector& density_at_leaf(Eigen::Index layer_pos) const { return densities_[layer_pos]; }
  bool is_equivalent() const;  // all densities strictly positive
  friend bool operator==(const VectorMeasure& a, const VectorMeasure& b) { return a.densities_ == b.densities_; }

 private:
  std::vector<Vector> densities_;
};

/// Conditional density aggregates E[dQ/dP | F_t] at every node, computed once.
class DensityProcess {
 public:
  DensityProcess(const ScenarioTree& tree, const VectorMeasure& q);

  /// E[dQ_i/dP | F_t] at node n.
  const Vector& aggregate(Eigen::Index n) const { return aggregate_[n]; }
  /// xi_{t,s}(Q) as an adapted vector at time s; components whose time-t
  /// aggregate vanishes are 1 on that subtree.
  AdaptedVector xi(int t, int s) const;
  /// xi_{t,s}(Q) at a single time-s node.
  Vector xi_at(int t, Eigen::Index node_s) const;

 private:
  const ScenarioTree* tree_;
  std::vector<Vector> aggregate_;
};

/// E^Q_t[X] = E[diag(xi_{t,s}(Q)) X | F_t] for X adapted at time s >= t.
AdaptedVector conditional_expectation(const ScenarioTree& tree, const AdaptedVector& x, const VectorMeasure& q, int t);
/// Plain conditional expectation under P.
AdaptedVector conditional_expectation(const ScenarioTree& tree, const AdaptedVector& x, int t);

AdaptedVector xi(const ScenarioTree& tree, const VectorMeasure& q, int t, int s);
/// dS/dP = diag(xi_{0,s}(Q)) xi_{s,T}(R).
VectorMeasure paste(const ScenarioTree& tree, const VectorMeasure& q, const VectorMeasure& r, int s);
/// True iff Q_i(D) = P(D) for every D in F_t and every component.
bool restrict_equals_P(const ScenarioTree& tree, const VectorMeasure& q, int t);
/// dQ^s/dP = xi_{s,T}(Q).
VectorMeasure modify_after(const ScenarioTree& tree, const VectorMeasure& q, int s);

/// (d N_r) x (d N_s) matrix copying each time-s node value to its time-r
/// descendants, r >= s.
Matrix embedding(const ScenarioTree& tree, int s, int r);
/// (d N_s) x (m N_s) matrix placing the first m components of every node.
Matrix eligible_embedding(const ScenarioTree& tree, int s, int m);
/// (d N_t) x (d N_s) matrix of P(k | n), t <= s.
Matrix expectation_matrix(const ScenarioTree& tree, int t, int s);
/// Coordinates of a time-s adapted vector weighted by P(node).
Vector probability_weighted(const ScenarioTree& tree, const AdaptedVector& v);

}  // namespace setrisk

#endif  // SETRISK_SCENARIO_TREE_HPP
