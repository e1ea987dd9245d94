#include "fairslice/axioms.hpp"

#include <random>

#include "fairslice/lp.hpp"
#include "fairslice/welfare.hpp"

namespace fairslice {

AxiomReport check_proportional(const Cake& cake, const Allocation& alloc, double tol) {
  const Rational rtol = rational_from_double(tol);
  const Rational share = Rational(1) / Rational(static_cast<long>(cake.num_agents()));
  AxiomReport rep;
  rep.axiom = "proportional";
  rep.tolerance = tol;
  for (size_t i = 0; i < cake.num_agents(); ++i) {
    const Rational rel = relative_utility(cake, alloc, i);
    if (rel < share - rtol) {
      rep.pass = false;
      rep.witness_agent = i;
      rep.detail = "agent '" + cake.agent_name(i) + "' gets " + format_rational(rel) +
                   " of their total value, below 1/" + std::to_string(cake.num_agents());
      return rep;
    }
  }
  rep.detail = "every agent holds at least a 1/n share of their value";
  return rep;
}

AxiomReport check_envy_free(const Cake& cake, const Allocation& alloc, double tol) {
  const Rational rtol = rational_from_double(tol);
  AxiomReport rep;
  rep.axiom = "envy-free";
  rep.tolerance = tol;
  for (size_t i = 0; i < cake.num_agents(); ++i) {
    const Rational own = absolute_utility(cake, alloc, i);
    for (size_t k = 0; k < cake.num_agents(); ++k) {
      if (k == i) continue;
      const Rational theirs = value_of_piece(cake, alloc, i, k);
      if ((theirs - own) / cake.total_value(i) > rtol) {
        rep.pass = false;
        rep.witness_pair = std::make_pair(i, k);
        rep.detail = "agent '" + cake.agent_name(i) + "' values '" + cake.agent_name(k) +
                     "'s piece at " + format_rational(theirs) + ", above their own " +
                     format_rational(own);
        return rep;
      }
    }
  }
  rep.detail = "no agent prefers another agent's piece";
  return rep;
}

namespace {

// Shared LP skeleton for the efficiency checks: fractions y_ij >= 0 with
// slice columns summing to 1, utilities measured relatively so tolerances
// are scale-free.
LinearProgram improvement_lp(const Cake& cake, size_t extra_vars) {
  const size_t n = cake.num_agents();
  const size_t m = cake.num_slices();
  LinearProgram lp;
  for (size_t k = 0; k < n * m + extra_vars; ++k) lp.add_variable(0, Rational(0), std::nullopt);
  for (size_t j = 0; j < m; ++j) {
    std::vector<Rational> row(lp.num_vars, Rational(0));
    for (size_t i = 0; i < n; ++i) row[i * m + j] = 1;
    lp.add_row(std::move(row), RowSense::Equal, Rational(1));
  }
  return lp;
}

std::vector<std::vector<Rational>> unpack_fractions(const Cake& cake,
                                                    const std::vector<Rational>& x) {
  std::vector<std::vector<Rational>> f(cake.num_agents(),
                                       std::vector<Rational>(cake.num_slices()));
  for (size_t i = 0; i < cake.num_agents(); ++i)
    for (size_t j = 0; j < cake.num_slices(); ++j) f[i][j] = x[i * cake.num_slices() + j];
  return f;
}

}  // namespace

AxiomReport check_pareto_optimal(const Cake& cake, const Allocation& alloc, double tol) {
  const size_t n = cake.num_agents();
  const size_t m = cake.num_slices();
  // maximize sum eps_i  s.t.  rel_i(y) - eps_i >= rel_i(x), eps_i >= 0.
  LinearProgram lp = improvement_lp(cake, n);
  for (size_t i = 0; i < n; ++i) {
    lp.objective[n * m + i] = 1;
    std::vector<Rational> row(lp.num_vars, Rational(0));
    for (size_t j = 0; j < m; ++j)
      row[i * m + j] = cake.slice_value(i, j) / cake.total_value(i);
    row[n * m + i] = -1;
    lp.add_row(std::move(row), RowSense::GreaterEq, relative_utility(cake, alloc, i));
  }
  LpSolution sol = lp_solve(lp);
  if (sol.status != LpStatus::Optimal)
    throw std::logic_error("pareto check: improvement LP must be solvable");

  AxiomReport rep;
  rep.axiom = "pareto-optimal";
  rep.tolerance = tol;
  if (sol.objective_value > rational_from_double(tol)) {
    rep.pass = false;
    rep.witness_fractions = unpack_fractions(cake, sol.x);
    rep.witness_gains =
        std::vector<Rational>(sol.x.begin() + static_cast<long>(n * m), sol.x.end());
    Rational best_gain = 0;
    size_t best_agent = 0;
    for (size_t i = 0; i < n; ++i)
      if ((*rep.witness_gains)[i] > best_gain) {
        best_gain = (*rep.witness_gains)[i];
        best_agent = i;
      }
    rep.witness_agent = best_agent;
    rep.detail = "another division raises total relative utility by " +
                 format_rational(sol.objective_value) + " (agent '" +
                 cake.agent_name(best_agent) + "' gains " + format_rational(best_gain) +
                 ") without hurting anyone";
  } else {
    rep.detail = "no division improves an agent without hurting another";
  }
  return rep;
}

AxiomReport check_weak_pareto_optimal(const Cake& cake, const Allocation& alloc, double tol) {
  const size_t n = cake.num_agents();
  const size_t m = cake.num_slices();
  // maximize t  s.t.  rel_i(y) >= rel_i(x) + t for every agent.
  LinearProgram lp = improvement_lp(cake, 1);
  const size_t t_var = n * m;
  lp.objective[t_var] = 1;
  for (size_t i = 0; i < n; ++i) {
    std::vector<Rational> row(lp.num_vars, Rational(0));
    for (size_t j = 0; j < m; ++j)
      row[i * m + j] = cake.slice_value(i, j) / cake.total_value(i);
    row[t_var] = -1;
    lp.add_row(std::move(row), RowSense::GreaterEq, relative_utility(cake, alloc, i));
  }
  LpSolution sol = lp_solve(lp);
  if (sol.status != LpStatus::Optimal)
    throw std::logic_error("weak pareto check: improvement LP must be solvable");

  AxiomReport rep;
  rep.axiom = "weak-pareto-optimal";
  rep.tolerance = tol;
  if (sol.objective_value > rational_from_double(tol)) {
    rep.pass = false;
    rep.witness_fractions = unpack_fractions(cake, sol.x);
    rep.witness_gains = std::vector<Rational>(n, sol.objective_value);
    rep.detail = "another division gives every agent at least " +
                 format_rational(sol.objective_value) + " more relative utility";
  } else {
    rep.detail = "no division improves every agent simultaneously";
  }
  return rep;
}

namespace {

// Deterministic Fisher-Yates with our own draw so results do not depend on
// the standard library's unspecified shuffle/distribution algorithms.
std::vector<size_t> seeded_permutation(size_t count, std::mt19937_64& rng) {
  std::vector<size_t> perm(count);
  for (size_t i = 0; i < count; ++i) perm[i] = i;
  for (size_t i = count; i > 1; --i) {
    const size_t k = static_cast<size_t>(rng() % i);
    std::swap(perm[i - 1], perm[k]);
  }
  return perm;
}

}  // namespace

AxiomReport check_esv_probe(const Cake& cake,
                            const std::function<SolveResult(const Cake&)>& rule, int trials,
                            uint64_t seed, double tol) {
  const Rational rtol = rational_from_double(tol);
  AxiomReport rep;
  rep.axiom = "essentially-single-valued";
  rep.tolerance = tol;

  const SolveResult base = rule(cake);
  std::mt19937_64 rng(seed);
  for (int trial = 0; trial < trials; ++trial) {
    const auto agent_perm = seeded_permutation(cake.num_agents(), rng);
    const auto slice_perm = seeded_permutation(cake.num_slices(), rng);

    // permuted[p] = original[perm[p]]
    std::vector<std::string> agents(cake.num_agents());
    for (size_t p = 0; p < agent_perm.size(); ++p) agents[p] = cake.agent_name(agent_perm[p]);
    std::vector<Slice> slices(cake.num_slices());
    for (size_t q = 0; q < slice_perm.size(); ++q) {
      const Slice& s = cake.slice(slice_perm[q]);
      Slice t{s.length, std::vector<Rational>(cake.num_agents())};
      for (size_t p = 0; p < agent_perm.size(); ++p) t.densities[p] = s.densities[agent_perm[p]];
      slices[q] = std::move(t);
    }
    const SolveResult permuted = rule(Cake(std::move(agents), std::move(slices)));

    for (size_t p = 0; p < agent_perm.size(); ++p) {
      const size_t original = agent_perm[p];
      const Rational diff =
          abs(permuted.utility.relative[p] - base.utility.relative[original]);
      if (diff > rtol) {
        rep.pass = false;
        rep.witness_agent = original;
        rep.detail = "relabeling trial " + std::to_string(trial + 1) + " moved agent '" +
                     cake.agent_name(original) + "' from " +
                     format_rational(base.utility.absolute[original]) + " to " +
                     format_rational(permuted.utility.absolute[p]) +
                     "; the rule's utilities depend on presentation order";
        return rep;
      }
    }
  }
  rep.detail = "utilities stable across " + std::to_string(trials) + " relabeled re-solves";
  return rep;
}

}  // namespace fairslice
