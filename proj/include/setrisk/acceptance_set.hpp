#ifndef SETRISK_ACCEPTANCE_SET_HPP
#define SETRISK_ACCEPTANCE_SET_HPP

#include "setrisk/polyhedron.hpp"
#include "setrisk/scenario_tree.hpp"

namespace setrisk {

/// Polyhedron of payoffs adapted at `payoff_time`, in the coordinates of
/// AdaptedVector::flatten at that time (d values per node).
struct AcceptanceSet {
  int payoff_time = 0;
  Polyhedron set;
};

/// The same set viewed as payoffs at a later time r (image under embedding).
AcceptanceSet embed(const ScenarioTree& tree, const AcceptanceSet& a, int r);

/// {Z adapted at s with eligible support : Z in A}, in time-s coordinates.
/// With m == d this is A ∩ (time-s measurable payoffs).
AcceptanceSet restrict_to_time(const ScenarioTree& tree, const AcceptanceSet& a, int s, int m);

/// A + B after embedding both at the later payoff time.
AcceptanceSet sum(const ScenarioTree& tree, const AcceptanceSet& a, const AcceptanceSet& b);

/// Sets of payoffs at the same time compared as polyhedra after embedding.
bool set_equal(const ScenarioTree& tree, const AcceptanceSet& a, const AcceptanceSet& b);

}  // namespace setrisk

#endif  // SETRISK_ACCEPTANCE_SET_HPP
