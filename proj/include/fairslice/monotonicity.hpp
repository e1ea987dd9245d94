#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fairslice/axioms.hpp"
#include "fairslice/cake.hpp"
#include "fairslice/welfare.hpp"

namespace fairslice {

/// Before/after record of a monotonicity experiment. Utilities are compared
/// in the absolute gauge: relative utilities shrink mechanically when the
/// cake grows, so only absolute comparisons are meaningful across cakes.
struct MonotonicityReport {
  std::string experiment;  // "resource-monotonicity" | "population-monotonicity"
  std::string rule;
  bool pass = true;
  double tolerance = 0;
  std::vector<Rational> before_absolute;        // indexed by original agents
  std::vector<Rational> after_absolute;         // same indexing; PM: leaver's entry is 0
  std::vector<size_t> losers;                   // original agent indices that lost
  std::optional<size_t> removed_agent;          // PM only
  std::vector<size_t> dropped_slices;           // PM only: pruned original slices
  std::string detail;
};

/// Solve `cake` and its enlargement by `extra` (appended at the right end)
/// and require every agent's absolute utility not to drop by more than
/// tol * (their before-cake total value). tol = 0 compares exactly.
MonotonicityReport rm_experiment(const Cake& cake, const std::vector<Slice>& extra,
                                 const Rule& rule, double tol = 0);

/// Solve `cake` and the cake left after `leaving_agent` departs (worthless
/// slices pruned) and require every remaining agent not to lose.
MonotonicityReport pm_experiment(const Cake& cake, size_t leaving_agent, const Rule& rule,
                                 double tol = 0);

/// Two-agent divide-and-choose protocol: the first agent cuts at the
/// leftmost point splitting their value in half, the second takes the piece
/// they value more (tie: the left piece). Exact.
SolveResult cut_and_choose(const Cake& cake);

/// Like welfare's solve() but also dispatches CutAndChoose.
SolveResult solve_rule(const Cake& cake, const Rule& rule);

// --- Randomized search for monotonicity/fairness violations -----------------

struct FuzzConfig {
  uint64_t seed = 1;
  size_t trials = 100;
  size_t max_agents = 4;     // agents drawn from 2..max_agents
  size_t max_slices = 6;     // slices drawn from 1..max_slices
  size_t max_density = 9;    // densities drawn from 0..max_density
  size_t max_extra_slices = 2;
  double tol = 0;
  bool check_rm = true;
  bool check_pm = true;
  bool check_prop = false;
  bool check_ef = false;
};

/// One violation, with the offending cake greedily shrunk (drop slices, then
/// agents, while the violation persists) so witnesses stay readable.
struct FuzzFailure {
  size_t trial = 0;
  std::string check;  // rm | pm | prop | ef
  std::string detail;
  Cake cake;
  std::vector<Slice> extra;             // rm failures: the enlargement used
  std::optional<size_t> removed_agent;  // pm failures
};

struct FuzzReport {
  size_t trials = 0;
  std::map<std::string, size_t> checks_run;  // per check name
  std::map<std::string, size_t> failure_counts;
  std::vector<FuzzFailure> failures;
  bool clean() const { return failures.empty(); }
};

/// Deterministic seeded sweep: random small-integer cakes (plus random
/// enlargements / departures) pushed through `rule`, collecting RM/PM and
/// optional PROP/EF violations.
FuzzReport fuzz(const Rule& rule, const FuzzConfig& config);

}  // namespace fairslice
