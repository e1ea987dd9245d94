#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "fairslice/cake.hpp"
#include "fairslice/ceei.hpp"

namespace fairslice {

/// Raised when an iterative solver fails to converge or an enumeration-based
/// solver exceeds its size cap. Distinct from input/usage errors so callers
/// can map it to a dedicated exit path.
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SolveDiagnostics {
  size_t iterations = 0;   // iterations / LP solves / vertices visited
  double residual = 0;     // optimality-certificate residual at termination
  bool exact = true;       // result produced by the exact-arithmetic path
  std::string notes;
};

/// Outcome of a division rule: the allocation, exact utilities recomputed
/// from the (rational) fraction matrix, and for market-based rules the
/// supporting price system.
struct SolveResult {
  Allocation allocation;
  UtilityVector utility;
  std::optional<PriceVector> prices;
  SolveDiagnostics diagnostics;
};

/// The power family of welfare functions: w_p(x) = x^p / p for p != 0 and
/// w_0(x) = ln x. Classification of the induced division rule by exponent.
struct WelfareClassification {
  double p = 0;
  std::string family;       // convex / utilitarian / strictly-concave / nash / hyper-concave
  bool pareto_optimal = true;
  bool essentially_single_valued = false;
  bool proportional_absolute = false;
  bool proportional_relative = false;
  bool resource_monotone_absolute = false;
  bool resource_monotone_relative = false;
  bool population_monotone_absolute = false;
  bool population_monotone_relative = false;
};

/// Properties of the rule maximizing total w_p-welfare of absolute/relative
/// utilities, keyed purely on the exponent.
WelfareClassification classify_welfare(double p);

// --- Division rules ---------------------------------------------------------

/// Maximize the product of utilities (absolute and relative gauges agree on
/// the argmax). Runs proportional-response market dynamics, then tries to
/// reconstruct the exact rational equilibrium from the converged support; on
/// success the result carries exact prices and a zero-residual certificate.
SolveResult solve_nash(const Cake& cake, double tol = 1e-9);

/// Maximize sum of w_p over absolute utilities. p <= 1 is a concave program
/// (projected gradient ascent over the per-slice simplices; p = 1 delegates
/// to the utilitarian closed form); p > 1 enumerates whole-slice assignments
/// and throws SolverError past the enumeration cap.
SolveResult solve_wp_absolute(const Cake& cake, double p, double tol = 1e-9);

/// Same as solve_wp_absolute but over relative utilities.
SolveResult solve_wp_relative(const Cake& cake, double p, double tol = 1e-9);

/// Give each slice to the agent with the highest density (absolute) or
/// density share of total value (relative). Ties go to the lowest agent
/// index; the rule is not essentially single-valued, so the selection is
/// documented rather than canonical.
SolveResult solve_utilitarian_absolute(const Cake& cake);
SolveResult solve_utilitarian_relative(const Cake& cake);

/// Lexicographically maximize the sorted utility vector via iterated exact
/// LPs with saturation freezing. Fully rational; deterministic.
SolveResult solve_leximin_absolute(const Cake& cake);
SolveResult solve_leximin_relative(const Cake& cake);

/// Test oracle: exact best product of relative utilities over all fraction
/// matrices whose slice columns lie on a g-step grid. Exhaustive up to a
/// conservative dominance pre-pass (slices valued by exactly one agent go to
/// that agent) and sound branch-and-bound pruning; throws SolverError when
/// the configuration count exceeds the cap.
double nash_brute_oracle(const Cake& cake, int grid);

/// Product of relative utilities, the quantity nash_brute_oracle bounds.
double nash_product(const UtilityVector& utility);

// --- Rule handles ------------------------------------------------------------

enum class RuleKind {
  Nash,
  LeximinAbsolute,
  LeximinRelative,
  UtilitarianAbsolute,
  UtilitarianRelative,
  PowerAbsolute,
  PowerRelative,
  CutAndChoose,
};

struct Rule {
  RuleKind kind = RuleKind::Nash;
  double p = 0;        // PowerAbsolute / PowerRelative only
  double tol = 1e-9;   // iterative solvers only
};

/// CLI-facing names: nash, leximin-abs, leximin-rel, util-abs, util-rel,
/// wp-abs, wp-rel, cut-and-choose.
std::string rule_name(const Rule& rule);
std::optional<RuleKind> parse_rule_kind(const std::string& name);

/// Dispatch to the rule's solver. CutAndChoose lives with the monotonicity
/// harness (it needs the cut/choose protocol, not a welfare objective) and
/// is rejected here with std::invalid_argument.
SolveResult solve(const Cake& cake, const Rule& rule);

}  // namespace fairslice
