#ifndef SETRISK_IO_HPP
#define SETRISK_IO_HPP

#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "setrisk/consistency.hpp"
#include "setrisk/measures.hpp"

namespace setrisk {

/// Insertion-ordered JSON so emitted documents are byte-stable.
using Json = nlohmann::ordered_json;

/// Two-space indented text with a trailing newline.
std::string dump(const Json& doc);
Json parse_json_text(const std::string& text, const std::string& source);
Json load_json_file(const std::string& path);

// Every reader below throws ParseError with a JSON path ("payoffs.X.values.r0[1]").

Rational rational_from_json(const Json& j, const std::string& path);
Vector vector_from_json(const Json& j, Eigen::Index size, const std::string& path);
Json vector_to_json(const Vector& v);

/// {"d": d, "nodes": [{"id", "parent", "time", "prob"}]}; parent null at the root.
ScenarioTree tree_from_json(const Json& doc, const std::string& path);
Json tree_to_json(const ScenarioTree& tree);

/// {"dim": n, "hrep": [{"a": [...], "b": "p/q"}], "vrep": {"vertices": [...], "rays": [...]}}.
/// Equalities are written as two opposite inequalities and lines as two
/// opposite rays. On input the H-representation wins when both are present.
Polyhedron polyhedron_from_json(const Json& j, const std::string& path);
Json polyhedron_to_json(const Polyhedron& p);

/// {"time": t, "values": {node id: [d rationals]}} covering every time-t node.
AdaptedVector adapted_from_json(const ScenarioTree& tree, const Json& j, const std::string& path);
Json adapted_to_json(const ScenarioTree& tree, const AdaptedVector& x);

/// {leaf id: [d densities]}.
VectorMeasure measure_from_json(const ScenarioTree& tree, const Json& j, const std::string& path);
Json measure_to_json(const ScenarioTree& tree, const VectorMeasure& q);

/// {"t": t, "w": {node: [...]}, "Q": {leaf: [...]}}; "Q" defaults to P.
DualPair pair_from_json(const ScenarioTree& tree, const Json& j, const std::string& path);
Json pair_to_json(const ScenarioTree& tree, const DualPair& pair);

/// {node id: polyhedron} with an optional "default" entry for unlisted nodes.
NodeSets node_sets_from_json(const ScenarioTree& tree, const Json& j, const std::string& path);

/// A rational (constant), an array of d rationals (constant per component) or
/// {node id: [d rationals]} with an optional "default".
AvarParams avar_params_from_json(const ScenarioTree& tree, const Json& j, const std::string& path);

/// Array of d positive decimals.
EntropicParams entropic_params_from_json(const Json& j, int d, const std::string& path);

/// A single-file workspace: a tree document plus named sections "payoffs",
/// "cones", "regions", "lambdas", "entropic", "measures" and "pairs", and an
/// optional eligible count "m".
class Workspace {
 public:
  static Workspace from_json(Json doc, const std::string& source = "workspace");
  static Workspace load(const std::string& path);

  const ScenarioTree& tree() const { return *tree_; }
  int eligible() const { return m_; }
  const Json& document() const { return doc_; }

  bool has(const std::string& section, const std::string& name) const;
  std::vector<std::string> names(const std::string& section) const;

  AdaptedVector payoff(const std::string& name) const;
  NodeSets cones(const std::string& name) const;
  NodeSets regions(const std::string& name) const;
  AvarParams lambda(const std::string& name) const;
  EntropicParams entropic(const std::string& name) const;
  VectorMeasure measure(const std::string& name) const;
  DualPair pair(const std::string& name) const;

  /// Parses every named entry; throws on the first invalid one.
  void validate() const;
  /// Canonical re-emission: rationals in lowest terms, polyhedra canonical.
  Json canonical() const;

 private:
  const Json& entry(const std::string& section, const std::string& name) const;

  Json doc_;
  std::string source_;
  std::shared_ptr<const ScenarioTree> tree_;
  int m_ = 1;
};

/// Array of {"node", "value", "summary"} for the time-t nodes; the summary
/// counts vertices, rays and lines and lists the support value of each node
/// factor in every direction (R^m each).
Json node_values_to_json(const ScenarioTree& tree, int t, const std::vector<Polyhedron>& values,
                         const std::vector<Vector>& directions);
/// Array of {"node", "rho"}; the only float-valued output, tagged by the caller.
Json entropic_values_to_json(const ScenarioTree& tree, const RealAdapted& rho);
Json report_to_json(const ScenarioTree& tree, const ConsistencyReport& rep);

/// CSV of the projection onto `coords`: header "kind,x<c0>,x<c1>,...", then
/// vertex rows and ray rows in canonical order; lines appear as two opposite
/// rays. An empty polyhedron yields the header only.
std::string plot_csv(const Polyhedron& p, const std::vector<Eigen::Index>& coords, int digits = 12);

}  // namespace setrisk

#endif  // SETRISK_IO_HPP
