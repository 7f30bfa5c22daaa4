#include "setrisk/risk_measure.hpp"

#include "setrisk/error.hpp"

namespace setrisk {

RiskMeasure::RiskMeasure(const ScenarioTree& tree, int m)
    : tree_(&tree),
      m_(m),
      once_(new std::once_flag[static_cast<std::size_t>(tree.horizon()) + 1]),
      cache_(static_cast<std::size_t>(tree.horizon()) + 1) {
  if (m < 1 || m > tree.d()) throw InvalidInput("eligible count must be in 1..d");
}

const AcceptanceSet& RiskMeasure::acceptance_set(int t) const {
  if (t < 0 || t > tree_->horizon()) throw InvalidInput("time outside the tree horizon");
  const auto k = static_cast<std::size_t>(t);
  std::call_once(once_[k], [&] { cache_[k] = build_acceptance(t); });
  return *cache_[k];
}

AcceptanceSet RiskMeasure::stepped_acceptance_set(int t, int s) const {
  if (s < t) throw PreconditionViolation("stepped acceptance set requires t <= s");
  return restrict_to_time(*tree_, acceptance_set(t), s, m_);
}

Polyhedron RiskMeasure::value(const AdaptedVector& x, int t) const {
  return risk_value(*tree_, acceptance_set(t), x, t, m_);
}

Polyhedron risk_value(const ScenarioTree& tree, const AcceptanceSet& a, const AdaptedVector& x, int t, int m) {
  const int r = a.payoff_time;
  if (x.time > r) throw InvalidInput("payoff is not measurable at the acceptance set's payoff time");
  if (t > r) throw InvalidInput("evaluation time after payoff time");
  Matrix map = embedding(tree, t, r) * eligible_embedding(tree, t, m);
  Vector shift = embedding(tree, x.time, r) * x.flatten();
  return affine_preimage(a.set, map, shift);
}

std::vector<Polyhedron> split_nodes(const ScenarioTree& tree, const Polyhedron& value, int t, int m) {
  std::vector<Polyhedron> out;
  const Eigen::Index n = tree.layer_size(t);
  if (value.dim() != m * n) throw DimensionMismatch("value coordinates");
  for (Eigen::Index k = 0; k < n; ++k) {
    std::vector<Eigen::Index> coords;
    for (Eigen::Index i = 0; i < m; ++i) coords.push_back(k * m + i);
    out.push_back(project(value, coords));
  }
  return out;
}

Polyhedron join_nodes(const std::vector<Polyhedron>& parts) {
  if (parts.empty()) throw InvalidInput("join of no node sets");
  Polyhedron out = parts.front();
  for (std::size_t k = 1; k < parts.size(); ++k) out = product(out, parts[k]);
  return out;
}

OneStepFamily one_step_family(const RiskMeasure& r) {
  const int horizon = r.tree().horizon();
  OneStepFamily f{{}, r.acceptance_set(horizon)};
  for (int t = 0; t < horizon; ++t) f.stepped.push_back(r.stepped_acceptance_set(t, t + 1));
  return f;
}

ComposedMeasure::ComposedMeasure(const ScenarioTree& tree, int m, OneStepFamily family, std::string name,
                                 bool coherent)
    : RiskMeasure(tree, m), family_(std::move(family)), name_(std::move(name)), coherent_(coherent) {
  if (static_cast<int>(family_.stepped.size()) != tree.horizon())
    throw InvalidInput("one-step family needs one stepped set per period");
  for (int t = 0; t < tree.horizon(); ++t)
    if (family_.stepped[static_cast<std::size_t>(t)].payoff_time != t + 1)
      throw InvalidInput("stepped set " + std::to_string(t) + " must have payoff time " + std::to_string(t + 1));
}

AcceptanceSet ComposedMeasure::build_acceptance(int t) const {
  const int horizon = tree().horizon();
  if (t == horizon) return embed(tree(), family_.terminal, horizon);
  return sum(tree(), family_.stepped[static_cast<std::size_t>(t)], acceptance_set(t + 1));
}

}  // namespace setrisk
