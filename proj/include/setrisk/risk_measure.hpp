#ifndef SETRISK_RISK_MEASURE_HPP
#define SETRISK_RISK_MEASURE_HPP

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "setrisk/acceptance_set.hpp"
#include "setrisk/polyhedron.hpp"
#include "setrisk/scenario_tree.hpp"

namespace setrisk {

/// Dynamic risk measure (R_t) on a tree with polyhedral acceptance sets A_t
/// over payoffs at the horizon. R_t(X) = {u in M_t : X + u in A_t}, returned
/// in time-t eligible coordinates (m values per time-t node).
///
/// Acceptance sets are built on first use and cached; the object is safe to
/// share across threads. The tree must outlive the measure.
class RiskMeasure {
 public:
  RiskMeasure(const ScenarioTree& tree, int m);
  virtual ~RiskMeasure() = default;
  RiskMeasure(const RiskMeasure&) = delete;
  RiskMeasure& operator=(const RiskMeasure&) = delete;

  const ScenarioTree& tree() const { return *tree_; }
  int eligible() const { return m_; }
  virtual std::string name() const = 0;
  virtual bool is_coherent() const = 0;

  const AcceptanceSet& acceptance_set(int t) const;
  /// A_{t,s} = A_t ∩ M_s in time-s coordinates.
  AcceptanceSet stepped_acceptance_set(int t, int s) const;

  /// R_t(X) for X adapted at any time >= t.
  Polyhedron value(const AdaptedVector& x, int t) const;

 protected:
  virtual AcceptanceSet build_acceptance(int t) const = 0;

 private:
  const ScenarioTree* tree_;
  int m_;
  std::unique_ptr<std::once_flag[]> once_;
  mutable std::vector<std::optional<AcceptanceSet>> cache_;
};

/// {u in M_t : X + u in A} for an acceptance set A with payoff time >= time(X).
Polyhedron risk_value(const ScenarioTree& tree, const AcceptanceSet& a, const AdaptedVector& x, int t, int m);

/// The per-node factors of a value in time-t eligible coordinates (R^m each).
std::vector<Polyhedron> split_nodes(const ScenarioTree& tree, const Polyhedron& value, int t, int m);
/// The product of per-node sets in layer order.
Polyhedron join_nodes(const std::vector<Polyhedron>& parts);

/// One-step building blocks of a discrete-time measure: stepped[t] is
/// A_{t,t+1} (payoff time t+1) for t < T, and terminal is A_T.
struct OneStepFamily {
  std::vector<AcceptanceSet> stepped;
  AcceptanceSet terminal;
};

OneStepFamily one_step_family(const RiskMeasure& r);

/// Backward composition: Ã_T = A_T and Ã_t = A_{t,t+1} + Ã_{t+1}.
class ComposedMeasure : public RiskMeasure {
 public:
  ComposedMeasure(const ScenarioTree& tree, int m, OneStepFamily family, std::string name, bool coherent);
  std::string name() const override { return name_; }
  bool is_coherent() const override { return coherent_; }
  const OneStepFamily& family() const { return family_; }

 protected:
  AcceptanceSet build_acceptance(int t) const override;

 private:
  OneStepFamily family_;
  std::string name_;
  bool coherent_;
};

}  // namespace setrisk

#endif  // SETRISK_RISK_MEASURE_HPP
