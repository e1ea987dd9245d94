#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "fairslice/rational.hpp"

namespace fairslice {

/// A maximal interval of the cake on which every agent's value density is
/// constant. `densities[i]` is agent i's value per unit length.
struct Slice {
  Rational length;
  std::vector<Rational> densities;
};

/// A piecewise-homogeneous cake together with the agents valuing it.
///
/// Invariants, enforced at construction:
///  - at least one agent and at least one slice;
///  - every slice length is positive and every density non-negative;
///  - every agent assigns positive total value to the cake;
///  - every slice is positively valued by at least one agent.
class Cake {
 public:
  Cake(std::vector<std::string> agents, std::vector<Slice> slices);

  size_t num_agents() const { return agents_.size(); }
  size_t num_slices() const { return slices_.size(); }
  const std::vector<std::string>& agents() const { return agents_; }
  const std::string& agent_name(size_t i) const { return agents_.at(i); }
  const std::vector<Slice>& slices() const { return slices_; }
  const Slice& slice(size_t j) const { return slices_.at(j); }

  /// Agent i's value for the whole of slice j: density * length.
  const Rational& slice_value(size_t i, size_t j) const { return slice_values_[i][j]; }
  /// Agent i's value for the whole cake (always positive).
  const Rational& total_value(size_t i) const { return totals_[i]; }

  /// Index of a named agent; throws std::invalid_argument if unknown.
  size_t agent_index(const std::string& name) const;

 private:
  std::vector<std::string> agents_;
  std::vector<Slice> slices_;
  std::vector<std::vector<Rational>> slice_values_;  // [agent][slice]
  std::vector<Rational> totals_;                     // [agent]
};

/// A division of the cake: fractions[i][j] is the share of slice j held by
/// agent i. Shares lie in [0,1] and every slice column sums to exactly 1.
/// Within a slice all value densities are constant, so only the fraction
/// matters, not which part of the slice is taken.
class Allocation {
 public:
  Allocation(const Cake& cake, std::vector<std::vector<Rational>> fractions);

  size_t num_agents() const { return fractions_.size(); }
  size_t num_slices() const { return fractions_.empty() ? 0 : fractions_[0].size(); }
  const std::vector<std::vector<Rational>>& fractions() const { return fractions_; }
  const Rational& fraction(size_t i, size_t j) const { return fractions_.at(i).at(j); }

  /// Everything-to-one-agent division.
  static Allocation whole_cake_to(const Cake& cake, size_t agent);

 private:
  std::vector<std::vector<Rational>> fractions_;
};

/// Per-agent utilities of a division, in both gauges. `relative[i]` is
/// `absolute[i]` divided by agent i's value for the whole cake.
struct UtilityVector {
  std::vector<Rational> absolute;
  std::vector<Rational> relative;
};

/// Agent i's absolute value for their piece under `alloc`.
Rational absolute_utility(const Cake& cake, const Allocation& alloc, size_t agent);

/// Agent i's value for their piece as a fraction of their whole-cake value.
Rational relative_utility(const Cake& cake, const Allocation& alloc, size_t agent);

/// Both utility gauges for all agents.
UtilityVector utilities(const Cake& cake, const Allocation& alloc);

/// Agent `observer`'s absolute value for the piece held by `holder`.
Rational value_of_piece(const Cake& cake, const Allocation& alloc, size_t observer,
                        size_t holder);

/// Append extra slices at the right end of the cake. The extra slices must
/// carry one density per existing agent; the result is re-validated.
Cake enlarge(const Cake& cake, const std::vector<Slice>& extra);

/// Result of removing an agent: the reduced cake plus the indices (in the
/// original cake) of slices dropped because no remaining agent values them.
struct ReducedCake {
  Cake cake;
  std::vector<size_t> kept_slices;     // original indices of surviving slices
  std::vector<size_t> dropped_slices;  // original indices of pruned slices
};

/// Remove one agent and prune slices now worthless to everyone remaining.
/// Throws std::invalid_argument when asked to remove the last agent.
ReducedCake remove_agent(const Cake& cake, size_t agent);

}  // namespace fairslice
