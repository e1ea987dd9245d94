#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>

#include "fairslice/lp.hpp"
#include "fairslice/welfare.hpp"

namespace fairslice {

namespace {

// Union-find over agents (0..n-1) and slices (n..n+m-1).
struct DisjointSets {
  std::vector<size_t> parent;
  explicit DisjointSets(size_t k) : parent(k) { std::iota(parent.begin(), parent.end(), 0); }
  size_t find(size_t a) { return parent[a] == a ? a : parent[a] = find(parent[a]); }
  void unite(size_t a, size_t b) { parent[find(a)] = find(b); }
};

// Attempt to reconstruct the exact equilibrium whose allocation support is
// (a subset of) `support`. At equilibrium, agent i's value-per-money is
// u_i on every held slice: P_j * u_i = D_ij for (i,j) in the support. Over
// each connected component of the support graph this pins all u_i and P_j
// up to one scalar, which the budget normalization (each agent spends 1)
// resolves; a feasibility LP then recovers a fraction matrix realizing the
// utilities. The KKT check at the end makes a wrong support guess harmless:
// verification failure just returns nullopt.
struct ExactEquilibrium {
  std::vector<std::vector<Rational>> fractions;
  std::vector<Rational> utility;      // absolute
  std::vector<Rational> slice_price;  // whole-slice prices
};

std::optional<ExactEquilibrium> snap_to_equilibrium(
    const Cake& cake, const std::vector<std::vector<double>>& x, double support_eps) {
  const size_t n = cake.num_agents();
  const size_t m = cake.num_slices();

  std::vector<std::vector<bool>> in_support(n, std::vector<bool>(m, false));
  std::vector<size_t> agent_degree(n, 0), slice_degree(m, 0);
  DisjointSets sets(n + m);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < m; ++j) {
      if (x[i][j] <= support_eps || cake.slice_value(i, j) == 0) continue;
      in_support[i][j] = true;
      ++agent_degree[i];
      ++slice_degree[j];
      sets.unite(i, n + j);
    }
  for (size_t i = 0; i < n; ++i)
    if (agent_degree[i] == 0) return std::nullopt;
  for (size_t j = 0; j < m; ++j)
    if (slice_degree[j] == 0) return std::nullopt;

  // Propagate u_i = a_i * g, P_j = b_j / g over each component (g unknown),
  // checking consistency of every non-tree edge: a_i * b_j == D_ij.
  std::vector<Rational> a(n, Rational(0)), b(m, Rational(0));
  std::vector<bool> seen_agent(n, false), seen_slice(m, false);
  for (size_t root = 0; root < n; ++root) {
    if (seen_agent[root]) continue;
    std::vector<size_t> frontier_agents{root};
    std::vector<size_t> comp_agents, comp_slices;
    seen_agent[root] = true;
    a[root] = 1;
    std::vector<size_t> frontier_slices;
    while (!frontier_agents.empty() || !frontier_slices.empty()) {
      if (!frontier_agents.empty()) {
        size_t i = frontier_agents.back();
        frontier_agents.pop_back();
        comp_agents.push_back(i);
        for (size_t j = 0; j < m; ++j) {
          if (!in_support[i][j]) continue;
          Rational need = cake.slice_value(i, j) / a[i];  // b_j = D_ij / a_i
          if (seen_slice[j]) {
            if (b[j] != need) return std::nullopt;  // inconsistent support
          } else {
            seen_slice[j] = true;
            b[j] = need;
            frontier_slices.push_back(j);
          }
        }
      } else {
        size_t j = frontier_slices.back();
        frontier_slices.pop_back();
        comp_slices.push_back(j);
        for (size_t i = 0; i < n; ++i) {
          if (!in_support[i][j]) continue;
          Rational need = cake.slice_value(i, j) / b[j];  // a_i = D_ij / b_j
          if (seen_agent[i]) {
            if (a[i] != need) return std::nullopt;
          } else {
            seen_agent[i] = true;
            a[i] = need;
            frontier_agents.push_back(i);
          }
        }
      }
    }
    // Budget closure for the component: agents spend their whole budget of 1,
    // slices absorb their whole price, so sum of prices = number of agents.
    Rational price_sum = 0;
    for (size_t j : comp_slices) price_sum += b[j];
    const Rational g = price_sum / Rational(static_cast<long>(comp_agents.size()));
    if (g <= 0) return std::nullopt;
    for (size_t i : comp_agents) a[i] *= g;        // u_i
    for (size_t j : comp_slices) b[j] /= g;        // P_j
  }

  // KKT / competitive-equilibrium verification over *all* pairs: value per
  // money never beats the utility an agent already attains. Sufficient for
  // global optimality of the product objective, so any support guess that
  // reaches this point and passes is correct.
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < m; ++j) {
      if (b[j] <= 0) return std::nullopt;
      if (cake.slice_value(i, j) > a[i] * b[j]) return std::nullopt;
    }

  // Recover fractions on the support realizing the utilities exactly.
  LinearProgram lp;
  std::vector<std::vector<size_t>> var(n, std::vector<size_t>(m, SIZE_MAX));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < m; ++j)
      if (in_support[i][j]) var[i][j] = lp.add_variable(0, Rational(0), Rational(1));
  for (size_t j = 0; j < m; ++j) {
    std::vector<Rational> row(lp.num_vars, Rational(0));
    for (size_t i = 0; i < n; ++i)
      if (var[i][j] != SIZE_MAX) row[var[i][j]] = 1;
    lp.add_row(std::move(row), RowSense::Equal, Rational(1));
  }
  for (size_t i = 0; i < n; ++i) {
    std::vector<Rational> row(lp.num_vars, Rational(0));
    for (size_t j = 0; j < m; ++j)
      if (var[i][j] != SIZE_MAX) row[var[i][j]] = cake.slice_value(i, j);
    lp.add_row(std::move(row), RowSense::Equal, a[i]);
  }
  LpSolution sol = lp_solve(lp);
  if (sol.status != LpStatus::Optimal) return std::nullopt;

  ExactEquilibrium eq;
  eq.fractions.assign(n, std::vector<Rational>(m, Rational(0)));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < m; ++j)
      if (var[i][j] != SIZE_MAX) eq.fractions[i][j] = sol.x[var[i][j]];
  eq.utility = std::move(a);
  eq.slice_price = std::move(b);
  return eq;
}

}  // namespace

SolveResult solve_nash(const Cake& cake, double tol) {
  if (!(tol > 0)) throw std::invalid_argument("solve_nash: tol must be positive");
  const size_t n = cake.num_agents();
  const size_t m = cake.num_slices();

  std::vector<std::vector<double>> D(n, std::vector<double>(m));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < m; ++j) D[i][j] = to_double(cake.slice_value(i, j));

  // Proportional response: bids are budget shares; each round every agent
  // re-bids proportionally to the value received from each slice.
  std::vector<std::vector<double>> bid(n, std::vector<double>(m, 1.0 / static_cast<double>(m)));
  std::vector<std::vector<double>> x(n, std::vector<double>(m, 0.0));
  std::vector<double> money(m), util(n);

  const size_t max_iters = 1000000;
  double delta = 1.0;
  double residual = std::numeric_limits<double>::infinity();
  double next_snap_delta = 1e-4;
  size_t iters = 0;

  auto compute_state = [&] {
    for (size_t j = 0; j < m; ++j) {
      money[j] = 0;
      for (size_t i = 0; i < n; ++i) money[j] += bid[i][j];
    }
    for (size_t i = 0; i < n; ++i) {
      util[i] = 0;
      for (size_t j = 0; j < m; ++j) {
        x[i][j] = money[j] > 0 ? bid[i][j] / money[j] : 0.0;
        util[i] += x[i][j] * D[i][j];
      }
      if (!(util[i] > 0)) throw SolverError("nash: dynamics collapsed to zero utility");
    }
  };

  // Certificate residual: max shortfall of held value-per-money against the
  // best available, plus budget slack (bids sum to 1 by construction).
  auto certificate_residual = [&] {
    double worst = 0;
    for (size_t i = 0; i < n; ++i) {
      double best = 0;
      for (size_t j = 0; j < m; ++j)
        if (money[j] > 0) best = std::max(best, D[i][j] / money[j]);
      if (best <= 0) return std::numeric_limits<double>::infinity();
      for (size_t j = 0; j < m; ++j) {
        if (x[i][j] <= tol) continue;
        const double mine = money[j] > 0 ? D[i][j] / money[j] : 0.0;
        worst = std::max(worst, (best - mine) / best * std::min(1.0, x[i][j] / tol));
      }
    }
    return worst;
  };

  auto finish_exact = [&](const ExactEquilibrium& eq, size_t used_iters) {
    SolveResult r{Allocation(cake, eq.fractions), {}, std::nullopt, {}};
    r.utility = utilities(cake, r.allocation);
    PriceVector prices;
    prices.density.resize(m);
    for (size_t j = 0; j < m; ++j) prices.density[j] = eq.slice_price[j] / cake.slice(j).length;
    r.prices = std::move(prices);
    r.diagnostics.exact = true;
    r.diagnostics.iterations = used_iters;
    r.diagnostics.residual = 0;
    r.diagnostics.notes = "exact equilibrium reconstructed from the converged support";
    return r;
  };

  for (iters = 0; iters < max_iters; ++iters) {
    compute_state();

    const bool settled = delta < tol / 10;
    if (settled || delta < next_snap_delta) {
      for (double eps : {1e-3, 1e-5, 1e-7}) {
        if (auto eq = snap_to_equilibrium(cake, x, eps)) return finish_exact(*eq, iters);
      }
      next_snap_delta = std::max(delta / 100, 1e-14);
    }
    if (settled) break;
    if (iters % 64 == 0) {
      residual = certificate_residual();
      if (residual < tol) break;
    }

    delta = 0;
    for (size_t i = 0; i < n; ++i) {
      for (size_t j = 0; j < m; ++j) {
        const double nb = x[i][j] * D[i][j] / util[i];
        delta = std::max(delta, std::abs(nb - bid[i][j]));
        bid[i][j] = nb;
      }
    }
  }
  if (iters >= max_iters)
    throw SolverError("nash: no convergence within the iteration cap");

  compute_state();
  residual = certificate_residual();

  // Approximate fallback: drop dust holdings, renormalize each slice column
  // exactly, recompute utilities in rationals, and report float prices.
  std::vector<std::vector<Rational>> f(n, std::vector<Rational>(m));
  for (size_t j = 0; j < m; ++j) {
    Rational col = 0;
    for (size_t i = 0; i < n; ++i) {
      double v = x[i][j];
      if (v < tol) v = 0;
      if (v > 1 - tol) v = 1;
      f[i][j] = rational_from_double(v);
      col += f[i][j];
    }
    if (col == 0) {
      // Every bid on this slice was dust (can only happen for slices nobody
      // values); park it with agent 0 to keep the column sum exact.
      f[0][j] = 1;
      col = 1;
    }
    for (size_t i = 0; i < n; ++i) f[i][j] /= col;
  }
  SolveResult r{Allocation(cake, std::move(f)), {}, std::nullopt, {}};
  r.utility = utilities(cake, r.allocation);
  PriceVector prices;
  prices.density.resize(m);
  for (size_t j = 0; j < m; ++j)
    prices.density[j] = rational_from_double(money[j]) / cake.slice(j).length;
  r.prices = std::move(prices);
  r.diagnostics.exact = false;
  r.diagnostics.iterations = iters;
  r.diagnostics.residual = residual;
  r.diagnostics.notes = "approximate proportional-response fixed point";
  return r;
}

}  // namespace fairslice
