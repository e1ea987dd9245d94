#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fairslice/cake.hpp"

namespace fairslice {

struct SolveResult;  // welfare.hpp

/// Verdict of a fairness/efficiency check. A failing report always carries
/// enough of a witness (agent, pair, or counter-division) to re-check the
/// violation independently of the checker.
struct AxiomReport {
  std::string axiom;
  bool pass = true;
  double tolerance = 0;  // 0 means the check ran as exact rational comparisons
  std::string detail;
  std::optional<size_t> witness_agent;
  std::optional<std::pair<size_t, size_t>> witness_pair;  // (envier, envied)
  // A division witnessing the failure of an efficiency axiom: all agents gain
  // at least `witness_gains`, summing positive (PO) / all positive (weak PO).
  std::optional<std::vector<std::vector<Rational>>> witness_fractions;
  std::optional<std::vector<Rational>> witness_gains;  // relative-utility gains
};

/// Every agent values their piece at >= 1/n of their whole-cake value
/// (within tol, in relative units).
AxiomReport check_proportional(const Cake& cake, const Allocation& alloc, double tol = 0);

/// No agent values another's piece above their own (within tol, relative).
AxiomReport check_envy_free(const Cake& cake, const Allocation& alloc, double tol = 0);

/// No division gives some agent more without giving anyone less. Decided by
/// an exact LP maximizing the sum of per-agent relative-utility gains; the
/// allocation passes iff the optimum is <= tol.
AxiomReport check_pareto_optimal(const Cake& cake, const Allocation& alloc, double tol = 0);

/// No division gives *every* agent strictly more: LP maximizing the uniform
/// gain t; passes iff the optimum is <= tol.
AxiomReport check_weak_pareto_optimal(const Cake& cake, const Allocation& alloc,
                                      double tol = 0);

/// Probe whether a rule is essentially single-valued on this cake: re-solve
/// under seeded agent/slice permutations and require per-agent utilities to
/// match the baseline within tol (exactly when tol = 0). The solver callback
/// owns any solver-seed perturbation it wants to add per call.
AxiomReport check_esv_probe(const Cake& cake,
                            const std::function<SolveResult(const Cake&)>& rule,
                            int trials = 10, uint64_t seed = 1, double tol = 0);

}  // namespace fairslice
