// setrisk: evaluate set-valued risk measures and check time consistency on a
// workspace document. Exit codes: 0 success or pass, 1 check failed, 2 usage,
// parse or validation error.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "setrisk/consistency.hpp"
#include "setrisk/error.hpp"
#include "setrisk/io.hpp"
#include "setrisk/measures.hpp"

namespace {

using namespace setrisk;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string tree, payoff, measure, lambda, cones, dirs, route = "auto", out, pair, grid = "-1,0,1", coords, node;
  std::string kind, result;
  int t = 0;
  int s = -1;
  double tol = 1e-10;
  int digits = 12;
  bool canonical = false;
};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, sep)) out.push_back(item);
  return out;
}

Vector parse_vector(const std::string& text) {
  auto parts = split(text, ',');
  Vector v(static_cast<Eigen::Index>(parts.size()));
  for (std::size_t i = 0; i < parts.size(); ++i) v[static_cast<Eigen::Index>(i)] = parse_rational(parts[i]);
  return v;
}

std::vector<Vector> parse_dirs(const std::string& text, int m) {
  std::vector<Vector> out;
  if (text.empty()) return out;
  for (const auto& item : split(text, ';')) {
    out.push_back(parse_vector(item));
    if (out.back().size() != m)
      throw UsageError("--dirs: direction \"" + item + "\" needs " + std::to_string(m) + " entries");
  }
  return out;
}

void write(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw InvalidInput("cannot write " + o.out);
  f << text;
}

// A measure resolved against the workspace. Entropic carries no RiskMeasure.
struct Resolved {
  std::string kind;
  std::unique_ptr<RiskMeasure> measure;
  NodeSets sets;
  AvarParams avar;
  std::optional<EntropicParams> entropic;
};

const char* const kMeasures = "shp, cshp, avar, composed-avar or entropic";

Resolved resolve(const Workspace& ws, const Options& o) {
  const ScenarioTree& tree = ws.tree();
  Resolved r;
  r.kind = o.measure;
  auto need = [&](const std::string& v, const char* flag) {
    if (v.empty()) throw UsageError(std::string("--measure ") + o.measure + " needs " + flag);
  };
  auto full_only = [&] {
    if (ws.eligible() != tree.d()) throw UsageError("--measure " + o.measure + " needs m = d");
  };
  if (o.measure == "shp") {
    need(o.cones, "--cones");
    full_only();
    r.sets = ws.cones(o.cones);
    validate_solvency_cones(tree, r.sets);
    r.measure = std::make_unique<Superhedging>(tree, r.sets);
  } else if (o.measure == "cshp") {
    need(o.cones, "--cones");
    full_only();
    r.sets = ws.regions(o.cones);
    validate_solvency_regions(tree, r.sets);
    r.measure = convex_superhedging(tree, r.sets);
  } else if (o.measure == "avar" || o.measure == "composed-avar") {
    need(o.lambda, "--lambda");
    if (ws.has("lambdas", o.lambda)) {
      r.avar = ws.lambda(o.lambda);
    } else {
      r.avar = AvarParams::constant(tree, parse_rational(o.lambda));
      r.avar.validate(tree);
    }
    if (o.measure == "avar") r.measure = std::make_unique<AverageValueAtRisk>(tree, r.avar, ws.eligible());
    else r.measure = composed_avar(tree, r.avar, ws.eligible());
  } else if (o.measure == "entropic") {
    need(o.lambda, "--lambda");
    full_only();
    if (ws.has("entropic", o.lambda)) {
      r.entropic = ws.entropic(o.lambda);
    } else {
      auto parts = split(o.lambda, ',');
      EntropicParams p{Eigen::VectorXd(static_cast<Eigen::Index>(parts.size()))};
      for (std::size_t i = 0; i < parts.size(); ++i) p.lambda[static_cast<Eigen::Index>(i)] = std::stod(parts[i]);
      p.validate(tree.d());
      r.entropic = p;
    }
  } else {
    throw UsageError("--measure must be " + std::string(kMeasures));
  }
  return r;
}

void check_times(const ScenarioTree& tree, const Options& o, bool need_s) {
  if (o.t < 0 || o.t > tree.horizon()) throw UsageError("--t outside [0, " + std::to_string(tree.horizon()) + "]");
  if (need_s && (o.s <= o.t || o.s > tree.horizon()))
    throw UsageError("--s must satisfy t < s <= " + std::to_string(tree.horizon()));
}

Json header(const Options& o, int m) {
  Json doc = Json::object();
  doc["measure"] = o.measure;
  if (!o.payoff.empty()) doc["payoff"] = o.payoff;
  doc["t"] = o.t;
  doc["m"] = m;
  return doc;
}

std::vector<Polyhedron> evaluate(const Workspace& ws, const Resolved& r, const Options& o, const AdaptedVector& x) {
  const ScenarioTree& tree = ws.tree();
  const int m = ws.eligible();
  const std::string& route = o.route;
  auto direct = [&] { return split_nodes(tree, r.measure->value(x, o.t), o.t, m); };
  // The superhedging recursions price the claim -X; R_t(X) = SHP_t(-X).
  auto claim = [&] {
    return -AdaptedVector::unflatten(tree, tree.horizon(), embedding(tree, x.time, tree.horizon()) * x.flatten());
  };
  if (r.kind == "shp") {
    if (route == "auto" || route == "recursive") return shp_value(tree, r.sets, claim(), o.t);
    if (route == "direct") return direct();
  } else if (r.kind == "cshp") {
    if (route == "auto" || route == "recursive") return convex_shp_value(tree, r.sets, claim(), o.t);
    if (route == "direct") return direct();
  } else if (r.kind == "avar") {
    if (route == "auto" || route == "direct") return direct();
    if (route == "dual") {
      if (m != tree.d()) throw UsageError("--route dual needs m = d");
      return split_nodes(tree, avar_dual_value(tree, r.avar, x, o.t), o.t, m);
    }
  } else if (r.kind == "composed-avar") {
    if (route == "auto" || route == "direct") return direct();
    if (route == "recursive") {
      AverageValueAtRisk base(tree, r.avar, m);
      auto composed = compose(tree, m, one_step_family(base), "composed-avar", true);
      return split_nodes(tree, composed->value(x, o.t), o.t, m);
    }
  }
  throw UsageError("--route " + route + " is not available for --measure " + r.kind);
}

int cmd_eval(const Options& o) {
  Workspace ws = Workspace::load(o.tree);
  if (o.payoff.empty()) throw UsageError("eval needs --payoff");
  Resolved r = resolve(ws, o);
  check_times(ws.tree(), o, false);
  AdaptedVector x = ws.payoff(o.payoff);
  if (x.time < o.t) throw UsageError("payoff time precedes --t");
  if (r.entropic) {
    Json doc = header(o, ws.tree().d());
    doc["numeric"] = "float64";
    doc["set"] = "rho + nonnegative orthant";
    doc["nodes"] = entropic_values_to_json(ws.tree(), entropic_value(ws.tree(), *r.entropic, to_real(x), o.t));
    write(o, dump(doc));
    return 0;
  }
  auto dirs = parse_dirs(o.dirs, ws.eligible());
  Json doc = header(o, ws.eligible());
  doc["nodes"] = node_values_to_json(ws.tree(), o.t, evaluate(ws, r, o, x), dirs);
  write(o, dump(doc));
  return 0;
}

int exit_code(Verdict v) { return v == Verdict::Fail ? 1 : 0; }

ConsistencyReport merge(std::string name, std::vector<ConsistencyReport> parts) {
  ConsistencyReport out;
  out.check = std::move(name);
  for (auto& p : parts) {
    out.cases += p.cases;
    if (p.verdict == Verdict::Fail) out.verdict = Verdict::Fail;
    for (auto& w : p.witnesses) out.witnesses.push_back(std::move(w));
    for (auto& a : p.assumptions)
      if (std::find(out.assumptions.begin(), out.assumptions.end(), a) == out.assumptions.end())
        out.assumptions.push_back(a);
  }
  return out;
}

// Cocycle measures for the entropic chain rule: every named measure, or P.
std::vector<VectorMeasure> entropic_measures(const Workspace& ws, const Options& o) {
  std::vector<VectorMeasure> qs;
  if (!o.pair.empty()) {
    qs.push_back(ws.has("measures", o.pair) ? ws.measure(o.pair) : ws.pair(o.pair).q);
    return qs;
  }
  for (const auto& n : ws.names("measures")) qs.push_back(ws.measure(n));
  if (qs.empty()) qs.push_back(VectorMeasure::physical(ws.tree()));
  return qs;
}

ConsistencyReport entropic_check(const Workspace& ws, const Resolved& r, const Options& o) {
  const ScenarioTree& tree = ws.tree();
  if (o.kind == "cocycle") {
    std::vector<ConsistencyReport> parts;
    for (const auto& q : entropic_measures(ws, o)) parts.push_back(check_entropic_cocycle(tree, q, o.t, o.s, o.tol));
    return merge("entropic-cocycle", std::move(parts));
  }
  if (o.kind == "recursion") {
    if (o.payoff.empty()) throw UsageError("check recursion needs --payoff");
    return check_entropic_recursion(tree, *r.entropic, to_real(ws.payoff(o.payoff)), o.t, o.s, o.tol);
  }
  throw UsageError("check " + o.kind + " is not available for --measure entropic");
}

int cmd_check(const Options& o_in) {
  Options o = o_in;
  Workspace ws = Workspace::load(o.tree);
  Resolved r = resolve(ws, o);
  if (o.s < 0) o.s = o.t + 1;
  const ScenarioTree& tree = ws.tree();
  const bool needs_s = o.kind != "finiteness";
  check_times(tree, o, needs_s);
  Json doc = Json::object();
  doc["measure"] = o.measure;
  doc["t"] = o.t;
  if (needs_s) doc["s"] = o.s;

  if (r.entropic) {
    if (o.kind == "mptc") {
      // Acceptance sets are not polyhedral; the chain rule stands in for them.
      ConsistencyReport rep;
      rep.check = "mptc-acceptance";
      rep.verdict = Verdict::Inapplicable;
      rep.detail = "acceptance sets are not polyhedral; rerouted to the penalty cocycle";
      Options c = o;
      c.kind = "cocycle";
      ConsistencyReport rerouted = entropic_check(ws, r, c);
      doc["report"] = report_to_json(tree, rep);
      doc["rerouted"] = report_to_json(tree, rerouted);
      write(o, dump(doc));
      return exit_code(rerouted.verdict);
    }
    ConsistencyReport rep = entropic_check(ws, r, o);
    doc["tol"] = o.tol;
    doc["report"] = report_to_json(tree, rep);
    write(o, dump(doc));
    return exit_code(rep.verdict);
  }

  const RiskMeasure& m = *r.measure;
  ConsistencyReport rep;
  if (o.kind == "mptc") {
    rep = check_mptc_acceptance(m, o.t, o.s);
  } else if (o.kind == "recursion") {
    if (o.payoff.empty()) throw UsageError("check recursion needs --payoff");
    rep = check_recursion(m, ws.payoff(o.payoff), o.t, o.s);
  } else if (o.kind == "cocycle") {
    rep = o.pair.empty() ? check_cocycle_family(m, o.t, o.s) : check_cocycle(m, ws.pair(o.pair), o.s);
  } else if (o.kind == "conditional-cocycle") {
    if (o.pair.empty()) throw UsageError("check conditional-cocycle needs --pair");
    rep = check_conditional_cocycle(m, ws.pair(o.pair), o.s);
  } else if (o.kind == "stability") {
    rep = check_stability(m, o.s, cocycle_family(m, o.t, o.s), stability_partners(m, o.s));
  } else if (o.kind == "wmax") {
    rep = check_Wmax_decomposition(m, o.s, cocycle_family(m, o.t, o.s));
  } else if (o.kind == "finiteness") {
    rep = check_finiteness(m);
  } else if (o.kind == "sweep") {
    std::vector<Rational> grid;
    for (const auto& g : split(o.grid, ',')) grid.push_back(parse_rational(g));
    rep = acceptance_witness_sweep(m, o.t, o.s, grid);
  } else {
    throw UsageError("unknown check \"" + o.kind + "\"");
  }
  doc["report"] = report_to_json(tree, rep);
  write(o, dump(doc));
  return exit_code(rep.verdict);
}

int cmd_compose(const Options& o) {
  Workspace ws = Workspace::load(o.tree);
  Resolved r = resolve(ws, o);
  if (r.entropic) throw UsageError("compose needs a polyhedral measure");
  const ScenarioTree& tree = ws.tree();
  const int m = ws.eligible();
  auto composed = compose(tree, m, one_step_family(*r.measure), "composed(" + r.kind + ")", r.measure->is_coherent());
  Json doc = Json::object();
  doc["measure"] = composed->name();
  Json sets = Json::array();
  for (int t = 0; t <= tree.horizon(); ++t) {
    Json e = Json::object();
    e["t"] = t;
    e["set"] = polyhedron_to_json(composed->acceptance_set(t).set);
    sets.push_back(std::move(e));
  }
  doc["acceptance"] = std::move(sets);
  Verdict verdict = Verdict::Pass;
  Json reports = Json::array();
  auto add = [&](const ConsistencyReport& rep) {
    if (rep.verdict == Verdict::Fail) verdict = Verdict::Fail;
    reports.push_back(report_to_json(tree, rep));
  };
  add(check_finiteness(*composed));
  for (int t = 0; t < tree.horizon(); ++t) add(check_mptc_acceptance(*composed, t, t + 1));
  doc["reports"] = std::move(reports);
  if (!o.payoff.empty()) {
    check_times(tree, o, false);
    doc["t"] = o.t;
    doc["payoff"] = o.payoff;
    doc["nodes"] = node_values_to_json(tree, o.t, split_nodes(tree, composed->value(ws.payoff(o.payoff), o.t), o.t, m),
                                       parse_dirs(o.dirs, m));
  }
  write(o, dump(doc));
  return exit_code(verdict);
}

int cmd_plot(const Options& o) {
  Json doc = load_json_file(o.result);
  if (!doc.contains("nodes") || !doc["nodes"].is_array() || doc["nodes"].empty())
    throw InvalidInput(o.result + ": not a result document with nodes");
  const Json* chosen = nullptr;
  for (const auto& n : doc["nodes"])
    if (o.node.empty() || (n.contains("node") && n["node"] == o.node)) {
      chosen = &n;
      break;
    }
  if (!chosen) throw UsageError("no node \"" + o.node + "\" in " + o.result);
  if (!chosen->contains("value")) throw InvalidInput(o.result + ": node has no polyhedral value");
  Polyhedron p = polyhedron_from_json((*chosen)["value"], "nodes." + (*chosen)["node"].get<std::string>() + ".value");
  std::vector<Eigen::Index> coords;
  for (const auto& c : split(o.coords, ',')) coords.push_back(std::stol(c));
  write(o, plot_csv(p, coords, o.digits));
  return 0;
}

int cmd_validate(const Options& o) {
  Workspace ws = Workspace::load(o.tree);
  ws.validate();
  if (o.canonical) write(o, dump(ws.canonical()));
  else write(o, "ok\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Set-valued dynamic risk measures on finite scenario trees"};
  app.require_subcommand(1);
  Options o;

  auto workspace = [&](CLI::App* c) { c->add_option("--tree", o.tree, "Workspace document")->required(); };
  auto measure = [&](CLI::App* c) {
    c->add_option("--measure", o.measure, kMeasures)->required();
    c->add_option("--lambda", o.lambda, "AV@R: lambdas entry or rational; entropic: entry or comma list");
    c->add_option("--cones", o.cones, "shp: cones entry; cshp: regions entry");
  };

  auto* eval = app.add_subcommand("eval", "Evaluate R_t(X) at every time-t node");
  workspace(eval);
  measure(eval);
  eval->add_option("--payoff", o.payoff, "Payoff entry")->required();
  eval->add_option("--t", o.t, "Evaluation time");
  eval->add_option("--dirs", o.dirs, "Support directions in R^m, e.g. \"1,0;0,1\"");
  eval->add_option("--route", o.route, "auto, recursive, direct or dual");
  eval->add_option("--out", o.out, "Output file (default stdout)");

  auto* check = app.add_subcommand("check", "Run a consistency check");
  check->add_option("kind", o.kind,
                    "mptc, recursion, cocycle, conditional-cocycle, stability, wmax, finiteness or sweep")
      ->required();
  workspace(check);
  measure(check);
  check->add_option("--t", o.t, "Base time");
  check->add_option("--s", o.s, "Split time (default t + 1)");
  check->add_option("--payoff", o.payoff, "Payoff entry (recursion)");
  check->add_option("--pair", o.pair, "Dual pair entry, or a measures entry for entropic");
  check->add_option("--tol", o.tol, "Entropic tolerance");
  check->add_option("--grid", o.grid, "Sweep grid, comma separated");
  check->add_option("--out", o.out, "Output file (default stdout)");

  auto* comp = app.add_subcommand("compose", "Compose the one-step sets of a measure");
  workspace(comp);
  measure(comp);
  comp->add_option("--payoff", o.payoff, "Optional payoff to evaluate");
  comp->add_option("--t", o.t, "Evaluation time");
  comp->add_option("--dirs", o.dirs, "Support directions in R^m");
  comp->add_option("--out", o.out, "Output file (default stdout)");

  auto* plot = app.add_subcommand("plot-data", "CSV of a projected node value");
  plot->add_option("result", o.result, "Result document")->required();
  plot->add_option("--coords", o.coords, "2 or 3 coordinates, e.g. \"0,1\"")->required();
  plot->add_option("--node", o.node, "Node id (default the first)");
  plot->add_option("--digits", o.digits, "Significant digits");
  plot->add_option("--out", o.out, "Output file (default stdout)");

  auto* val = app.add_subcommand("validate", "Validate a workspace");
  workspace(val);
  val->add_flag("--canonical", o.canonical, "Emit the canonical document");
  val->add_option("--out", o.out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*eval) return cmd_eval(o);
    if (*check) return cmd_check(o);
    if (*comp) return cmd_compose(o);
    if (*plot) return cmd_plot(o);
    return cmd_validate(o);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return 2;
}
