#include "setrisk/io.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "setrisk/error.hpp"

namespace setrisk {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) { throw ParseError(path + ": " + what); }

std::string at(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

const Json& field(const Json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(path, "missing field \"" + key + "\"");
  return *it;
}

const Json& object(const Json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  return j;
}

const Json& array(const Json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array");
  return j;
}

int integer(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<int>();
}

const std::string& string(const Json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get_ref<const std::string&>();
}

void only_keys(const Json& j, std::initializer_list<const char*> keys, const std::string& path) {
  for (const auto& [k, v] : j.items())
    if (std::none_of(keys.begin(), keys.end(), [&](const char* a) { return k == a; }))
      fail(at(path, k), "unknown field");
}

Json rational_to_json(const Rational& v) { return format_rational(v); }

// Node-keyed object covering exactly the time-t nodes; values by layer position.
template <typename F>
void for_layer(const ScenarioTree& tree, int t, const Json& j, const std::string& path, F&& read) {
  object(j, path);
  for (const auto& [k, v] : j.items()) {
    auto n = tree.find(k);
    if (!n || tree.time(*n) != t) fail(at(path, k), "not a node at time " + std::to_string(t));
  }
  for (Eigen::Index n : tree.nodes_at(t)) {
    auto it = j.find(tree.id(n));
    if (it == j.end()) fail(path, "missing node \"" + tree.id(n) + "\"");
    read(n, *it, at(path, tree.id(n)));
  }
}

std::vector<Vector> layer_vectors(const ScenarioTree& tree, int t, const Json& j, const std::string& path) {
  std::vector<Vector> out(static_cast<std::size_t>(tree.layer_size(t)));
  for_layer(tree, t, j, path, [&](Eigen::Index n, const Json& v, const std::string& p) {
    out[static_cast<std::size_t>(tree.layer_pos(n))] = vector_from_json(v, tree.d(), p);
  });
  return out;
}

Json layer_to_json(const ScenarioTree& tree, int t, const std::vector<Vector>& values) {
  Json out = Json::object();
  for (Eigen::Index n : tree.nodes_at(t)) out[tree.id(n)] = vector_to_json(values[static_cast<std::size_t>(tree.layer_pos(n))]);
  return out;
}

int time_field(const ScenarioTree& tree, const Json& j, const char* key, const std::string& path) {
  int t = integer(field(j, key, path), at(path, key));
  if (t < 0 || t > tree.horizon()) fail(at(path, key), "time outside [0, " + std::to_string(tree.horizon()) + "]");
  return t;
}

// Rewrites every rational string in a lambda document to canonical form.
Json canonical_rationals(const Json& j, const std::string& path) {
  if (j.is_array()) {
    Json out = Json::array();
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(canonical_rationals(j[i], at(path, i)));
    return out;
  }
  if (j.is_object()) {
    Json out = Json::object();
    for (const auto& [k, v] : j.items()) out[k] = canonical_rationals(v, at(path, k));
    return out;
  }
  return rational_to_json(rational_from_json(j, path));
}

const char* const kSections[] = {"payoffs", "cones", "regions", "lambdas", "entropic", "measures", "pairs"};

}  // namespace

std::string dump(const Json& doc) { return doc.dump(2) + "\n"; }

Json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(source + ": " + e.what());
  }
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_json_text(buf.str(), path);
}

Rational rational_from_json(const Json& j, const std::string& path) {
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (!j.is_string()) fail(path, "expected a rational string \"p/q\"");
  try {
    return parse_rational(j.get_ref<const std::string&>());
  } catch (const ParseError& e) {
    fail(path, e.what());
  }
}

Vector vector_from_json(const Json& j, Eigen::Index size, const std::string& path) {
  array(j, path);
  if (static_cast<Eigen::Index>(j.size()) != size)
    fail(path, "expected " + std::to_string(size) + " entries, got " + std::to_string(j.size()));
  Vector v(size);
  for (Eigen::Index i = 0; i < size; ++i)
    v[i] = rational_from_json(j[static_cast<std::size_t>(i)], at(path, static_cast<std::size_t>(i)));
  return v;
}

Json vector_to_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(rational_to_json(v[i]));
  return out;
}

ScenarioTree tree_from_json(const Json& doc, const std::string& path) {
  const int d = integer(field(doc, "d", path), at(path, "d"));
  if (d < 1) fail(at(path, "d"), "must be positive");
  const std::string np = at(path, "nodes");
  const Json& nodes = array(field(doc, "nodes", path), np);
  std::vector<ScenarioTree::NodeSpec> specs;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::string p = at(np, i);
    const Json& n = object(nodes[i], p);
    only_keys(n, {"id", "parent", "time", "prob"}, p);
    ScenarioTree::NodeSpec s;
    s.id = string(field(n, "id", p), at(p, "id"));
    const Json& parent = field(n, "parent", p);
    if (!parent.is_null()) s.parent = string(parent, at(p, "parent"));
    s.time = integer(field(n, "time", p), at(p, "time"));
    if (n.contains("prob")) s.prob = rational_from_json(n["prob"], at(p, "prob"));
    else if (s.parent) fail(p, "missing field \"prob\"");
    specs.push_back(std::move(s));
  }
  try {
    return ScenarioTree(std::move(specs), d);
  } catch (const InvalidInput& e) {
    fail(np, e.what());
  }
}

Json tree_to_json(const ScenarioTree& tree) {
  Json nodes = Json::array();
  for (const auto& s : tree.specs()) {
    Json n = Json::object();
    n["id"] = s.id;
    n["parent"] = s.parent ? Json(*s.parent) : Json(nullptr);
    n["time"] = s.time;
    n["prob"] = rational_to_json(s.parent ? s.prob : Rational(1));
    nodes.push_back(std::move(n));
  }
  Json out = Json::object();
  out["d"] = tree.d();
  out["nodes"] = std::move(nodes);
  return out;
}

Polyhedron polyhedron_from_json(const Json& j, const std::string& path) {
  object(j, path);
  only_keys(j, {"dim", "hrep", "vrep"}, path);
  const int dim = integer(field(j, "dim", path), at(path, "dim"));
  if (dim < 0) fail(at(path, "dim"), "must be non-negative");
  std::optional<Polyhedron> h, v;
  if (j.contains("hrep")) {
    const std::string hp = at(path, "hrep");
    const Json& rows = array(j["hrep"], hp);
    std::vector<HalfSpace<Rational>> ineq;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const std::string p = at(hp, i);
      object(rows[i], p);
      only_keys(rows[i], {"a", "b"}, p);
      ineq.push_back({vector_from_json(field(rows[i], "a", p), dim, at(p, "a")),
                      rational_from_json(field(rows[i], "b", p), at(p, "b"))});
    }
    h = Polyhedron::from_halfspaces(dim, std::move(ineq));
  }
  if (j.contains("vrep")) {
    const std::string vp = at(path, "vrep");
    const Json& g = object(j["vrep"], vp);
    only_keys(g, {"vertices", "rays"}, vp);
    auto read = [&](const char* key) {
      std::vector<Vector> out;
      if (!g.contains(key)) return out;
      const Json& rows = array(g[key], at(vp, key));
      for (std::size_t i = 0; i < rows.size(); ++i) out.push_back(vector_from_json(rows[i], dim, at(at(vp, key), i)));
      return out;
    };
    v = Polyhedron::from_generators(dim, read("vertices"), read("rays"));
  }
  if (h && v) {
    if (!set_equal(*h, *v)) fail(path, "hrep and vrep describe different sets");
    return *h;
  }
  if (h) return *h;
  if (v) return *v;
  fail(path, "needs \"hrep\" or \"vrep\"");
}

Json polyhedron_to_json(const Polyhedron& p) {
  p.convert();
  Json hrep = Json::array();
  auto row = [&](const Vector& a, const Rational& b) {
    Json r = Json::object();
    r["a"] = vector_to_json(a);
    r["b"] = rational_to_json(b);
    hrep.push_back(std::move(r));
  };
  for (const auto& c : p.inequalities()) row(c.a, c.b);
  for (const auto& c : p.equalities()) {
    row(c.a, c.b);
    row(Vector(-c.a), Rational(-c.b));
  }
  Json vertices = Json::array(), rays = Json::array();
  for (const auto& x : p.vertices()) vertices.push_back(vector_to_json(x));
  for (const auto& r : p.rays()) rays.push_back(vector_to_json(r));
  for (const auto& l : p.lines()) {
    rays.push_back(vector_to_json(l));
    rays.push_back(vector_to_json(Vector(-l)));
  }
  Json out = Json::object();
  out["dim"] = p.dim();
  out["hrep"] = std::move(hrep);
  out["vrep"] = Json::object();
  out["vrep"]["vertices"] = std::move(vertices);
  out["vrep"]["rays"] = std::move(rays);
  return out;
}

AdaptedVector adapted_from_json(const ScenarioTree& tree, const Json& j, const std::string& path) {
  object(j, path);
  only_keys(j, {"time", "values"}, path);
  AdaptedVector x;
  x.time = time_field(tree, j, "time", path);
  x.values = layer_vectors(tree, x.time, field(j, "values", path), at(path, "values"));
  return x;
}

Json adapted_to_json(const ScenarioTree& tree, const AdaptedVector& x) {
  Json out = Json::object();
  out["time"] = x.time;
  out["values"] = layer_to_json(tree, x.time, x.values);
  return out;
}

VectorMeasure measure_from_json(const ScenarioTree& tree, const Json& j, const std::string& path) {
  auto densities = layer_vectors(tree, tree.horizon(), j, path);
  try {
    return VectorMeasure(tree, std::move(densities));
  } catch (const InvalidInput& e) {
    fail(path, e.what());
  }
}

Json measure_to_json(const ScenarioTree& tree, const VectorMeasure& q) {
  return layer_to_json(tree, tree.horizon(), q.densities());
}

DualPair pair_from_json(const ScenarioTree& tree, const Json& j, const std::string& path) {
  object(j, path);
  only_keys(j, {"t", "w", "Q"}, path);
  const int t = time_field(tree, j, "t", path);
  AdaptedVector w{t, layer_vectors(tree, t, field(j, "w", path), at(path, "w"))};
  VectorMeasure q = j.contains("Q") ? measure_from_json(tree, j["Q"], at(path, "Q")) : VectorMeasure::physical(tree);
  return DualPair{t, std::move(q), std::move(w)};
}

Json pair_to_json(const ScenarioTree& tree, const DualPair& pair) {
  Json out = Json::object();
  out["t"] = pair.t;
  out["w"] = layer_to_json(tree, pair.t, pair.w.values);
  out["Q"] = measure_to_json(tree, pair.q);
  return out;
}

NodeSets node_sets_from_json(const ScenarioTree& tree, const Json& j, const std::string& path) {
  object(j, path);
  for (const auto& [k, v] : j.items())
    if (k != "default" && !tree.find(k)) fail(at(path, k), "unknown node");
  std::optional<Polyhedron> fallback;
  if (j.contains("default")) fallback = polyhedron_from_json(j["default"], at(path, "default"));
  NodeSets out;
  for (Eigen::Index n = 0; n < tree.num_nodes(); ++n) {
    auto it = j.find(tree.id(n));
    if (it != j.end()) out.push_back(polyhedron_from_json(*it, at(path, tree.id(n))));
    else if (fallback) out.push_back(*fallback);
    else fail(path, "missing node \"" + tree.id(n) + "\" and no \"default\"");
    if (out.back().dim() != tree.d()) fail(at(path, tree.id(n)), "expected dim " + std::to_string(tree.d()));
  }
  return out;
}

AvarParams avar_params_from_json(const ScenarioTree& tree, const Json& j, const std::string& path) {
  AvarParams params;
  const auto nodes = static_cast<std::size_t>(tree.num_nodes());
  if (j.is_string() || j.is_number_integer()) {
    params.lambda.assign(nodes, Vector::Constant(tree.d(), rational_from_json(j, path)));
  } else if (j.is_array()) {
    params.lambda.assign(nodes, vector_from_json(j, tree.d(), path));
  } else if (j.is_object()) {
    for (const auto& [k, v] : j.items())
      if (k != "default" && !tree.find(k)) fail(at(path, k), "unknown node");
    std::optional<Vector> fallback;
    if (j.contains("default")) fallback = vector_from_json(j["default"], tree.d(), at(path, "default"));
    for (Eigen::Index n = 0; n < tree.num_nodes(); ++n) {
      auto it = j.find(tree.id(n));
      if (it != j.end()) params.lambda.push_back(vector_from_json(*it, tree.d(), at(path, tree.id(n))));
      else if (fallback) params.lambda.push_back(*fallback);
      else fail(path, "missing node \"" + tree.id(n) + "\" and no \"default\"");
    }
  } else {
    fail(path, "expected a rational, an array or a node-keyed object");
  }
  try {
    params.validate(tree);
  } catch (const InvalidInput& e) {
    fail(path, e.what());
  }
  return params;
}

EntropicParams entropic_params_from_json(const Json& j, int d, const std::string& path) {
  array(j, path);
  if (static_cast<int>(j.size()) != d) fail(path, "expected " + std::to_string(d) + " entries");
  EntropicParams p{Eigen::VectorXd(d)};
  for (int i = 0; i < d; ++i) {
    const Json& v = j[static_cast<std::size_t>(i)];
    if (!v.is_number()) fail(at(path, static_cast<std::size_t>(i)), "expected a number");
    p.lambda[i] = v.get<double>();
  }
  try {
    p.validate(d);
  } catch (const InvalidInput& e) {
    fail(path, e.what());
  }
  return p;
}

Workspace Workspace::from_json(Json doc, const std::string& source) {
  Workspace ws;
  ws.source_ = source;
  object(doc, source);
  for (const auto& [k, v] : doc.items()) {
    if (k == "d" || k == "m" || k == "nodes") continue;
    if (std::find(std::begin(kSections), std::end(kSections), k) == std::end(kSections)) fail(k, "unknown section");
    object(v, k);
  }
  ws.tree_ = std::make_shared<const ScenarioTree>(tree_from_json(doc, ""));
  ws.m_ = ws.tree_->d();
  if (doc.contains("m")) {
    ws.m_ = integer(doc["m"], "m");
    if (ws.m_ < 1 || ws.m_ > ws.tree_->d()) fail("m", "must lie in [1, d]");
  }
  ws.doc_ = std::move(doc);
  return ws;
}

Workspace Workspace::load(const std::string& path) { return from_json(load_json_file(path), path); }

bool Workspace::has(const std::string& section, const std::string& name) const {
  return doc_.contains(section) && doc_[section].contains(name);
}

std::vector<std::string> Workspace::names(const std::string& section) const {
  std::vector<std::string> out;
  if (doc_.contains(section))
    for (const auto& [k, v] : doc_[section].items()) out.push_back(k);
  return out;
}

const Json& Workspace::entry(const std::string& section, const std::string& name) const {
  if (!has(section, name)) throw InvalidInput("unknown " + section + " entry \"" + name + "\"");
  return doc_[section][name];
}

AdaptedVector Workspace::payoff(const std::string& name) const {
  return adapted_from_json(*tree_, entry("payoffs", name), "payoffs." + name);
}
NodeSets Workspace::cones(const std::string& name) const {
  return node_sets_from_json(*tree_, entry("cones", name), "cones." + name);
}
NodeSets Workspace::regions(const std::string& name) const {
  return node_sets_from_json(*tree_, entry("regions", name), "regions." + name);
}
AvarParams Workspace::lambda(const std::string& name) const {
  return avar_params_from_json(*tree_, entry("lambdas", name), "lambdas." + name);
}
EntropicParams Workspace::entropic(const std::string& name) const {
  return entropic_params_from_json(entry("entropic", name), tree_->d(), "entropic." + name);
}
VectorMeasure Workspace::measure(const std::string& name) const {
  return measure_from_json(*tree_, entry("measures", name), "measures." + name);
}
DualPair Workspace::pair(const std::string& name) const {
  return pair_from_json(*tree_, entry("pairs", name), "pairs." + name);
}

void Workspace::validate() const {
  for (const auto& n : names("payoffs")) payoff(n);
  for (const auto& n : names("cones")) {
    try {
      validate_solvency_cones(*tree_, cones(n));
    } catch (const InvalidInput& e) {
      fail("cones." + n, e.what());
    }
  }
  for (const auto& n : names("regions")) {
    try {
      validate_solvency_regions(*tree_, regions(n));
    } catch (const InvalidInput& e) {
      fail("regions." + n, e.what());
    }
  }
  for (const auto& n : names("lambdas")) lambda(n);
  for (const auto& n : names("entropic")) entropic(n);
  for (const auto& n : names("measures")) measure(n);
  for (const auto& n : names("pairs")) pair(n);
}

Json Workspace::canonical() const {
  Json out = tree_to_json(*tree_);
  if (doc_.contains("m")) out["m"] = m_;
  for (const char* section : kSections) {
    if (!doc_.contains(section)) continue;
    Json sec = Json::object();
    const std::string s = section;
    for (const auto& n : names(s)) {
      const std::string p = s + "." + n;
      const Json& e = doc_[s][n];
      if (s == "payoffs") {
        sec[n] = adapted_to_json(*tree_, payoff(n));
      } else if (s == "cones" || s == "regions") {
        Json sets = Json::object();
        for (const auto& [k, v] : e.items()) sets[k] = polyhedron_to_json(polyhedron_from_json(v, at(p, k)));
        sec[n] = std::move(sets);
      } else if (s == "lambdas") {
        lambda(n);
        sec[n] = canonical_rationals(e, p);
      } else if (s == "entropic") {
        entropic(n);
        sec[n] = e;
      } else if (s == "measures") {
        sec[n] = measure_to_json(*tree_, measure(n));
      } else {
        sec[n] = pair_to_json(*tree_, pair(n));
      }
    }
    out[section] = std::move(sec);
  }
  return out;
}

Json node_values_to_json(const ScenarioTree& tree, int t, const std::vector<Polyhedron>& values,
                         const std::vector<Vector>& directions) {
  if (static_cast<Eigen::Index>(values.size()) != tree.layer_size(t)) throw DimensionMismatch("one value per node");
  Json out = Json::array();
  for (Eigen::Index n : tree.nodes_at(t)) {
    const Polyhedron& v = values[static_cast<std::size_t>(tree.layer_pos(n))];
    v.convert();
    Json summary = Json::object();
    summary["empty"] = v.is_empty();
    summary["vertices"] = v.vertices().size();
    summary["rays"] = v.rays().size();
    summary["lines"] = v.lines().size();
    Json support = Json::array();
    for (const auto& a : directions) {
      if (a.size() != v.dim()) throw DimensionMismatch("support direction has " + std::to_string(a.size()) +
                                                       " entries, value has dim " + std::to_string(v.dim()));
      Json s = Json::object();
      s["direction"] = vector_to_json(a);
      s["value"] = v.is_empty() ? ExtendedRational::pos_inf().to_string() : support_value(v, a).to_string();
      support.push_back(std::move(s));
    }
    summary["support"] = std::move(support);
    Json node = Json::object();
    node["node"] = tree.id(n);
    node["value"] = polyhedron_to_json(v);
    node["summary"] = std::move(summary);
    out.push_back(std::move(node));
  }
  return out;
}

Json entropic_values_to_json(const ScenarioTree& tree, const RealAdapted& rho) {
  Json out = Json::array();
  for (Eigen::Index n : tree.nodes_at(rho.time)) {
    const auto& v = rho.values[static_cast<std::size_t>(tree.layer_pos(n))];
    Json node = Json::object();
    node["node"] = tree.id(n);
    node["rho"] = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) node["rho"].push_back(v[i]);
    out.push_back(std::move(node));
  }
  return out;
}

Json report_to_json(const ScenarioTree& tree, const ConsistencyReport& rep) {
  Json out = Json::object();
  out["check"] = rep.check;
  out["verdict"] = to_string(rep.verdict);
  out["detail"] = rep.detail;
  out["cases"] = rep.cases;
  out["discharged"] = rep.discharged;
  out["assumptions"] = rep.assumptions;
  Json witnesses = Json::array();
  for (const auto& w : rep.witnesses) {
    Json j = Json::object();
    j["description"] = w.description;
    if (w.payoff) j["payoff"] = adapted_to_json(tree, *w.payoff);
    if (w.pair) j["pair"] = pair_to_json(tree, *w.pair);
    if (w.point) j["point"] = vector_to_json(*w.point);
    if (w.separating) {
      j["separating"] = Json::object();
      j["separating"]["a"] = vector_to_json(w.separating->a);
      j["separating"]["b"] = rational_to_json(w.separating->b);
    }
    if (!w.sets.empty()) {
      j["sets"] = Json::array();
      for (const auto& s : w.sets) j["sets"].push_back(polyhedron_to_json(s));
    }
    if (!w.scalars.empty()) {
      j["scalars"] = Json::array();
      for (const auto& s : w.scalars) j["scalars"].push_back(s.to_string());
    }
    witnesses.push_back(std::move(j));
  }
  out["witnesses"] = std::move(witnesses);
  return out;
}

std::string plot_csv(const Polyhedron& p, const std::vector<Eigen::Index>& coords, int digits) {
  if (coords.size() < 2 || coords.size() > 3) throw InvalidInput("bad coordinate subset: project onto 2 or 3 coordinates");
  std::set<Eigen::Index> seen;
  for (Eigen::Index c : coords) {
    if (c < 0 || c >= p.dim()) throw InvalidInput("bad coordinate subset: " + std::to_string(c) + " outside [0, " +
                                                  std::to_string(p.dim()) + ")");
    if (!seen.insert(c).second) throw InvalidInput("bad coordinate subset: repeated " + std::to_string(c));
  }
  std::ostringstream out;
  out << "kind";
  for (Eigen::Index c : coords) out << ",x" << c;
  out << "\n";
  if (p.is_empty()) return out.str();
  Polyhedron q = project(p, coords);
  auto emit = [&](const char* kind, const Vector& v) {
    out << kind;
    for (Eigen::Index i = 0; i < v.size(); ++i) out << "," << format_decimal(v[i], digits);
    out << "\n";
  };
  for (const auto& v : q.vertices()) emit("vertex", v);
  for (const auto& r : q.rays()) emit("ray", r);
  for (const auto& l : q.lines()) {
    emit("ray", l);
    emit("ray", Vector(-l));
  }
  return out.str();
}

}  // namespace setrisk
