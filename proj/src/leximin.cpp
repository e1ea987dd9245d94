#include <algorithm>
#include <optional>

#include "fairslice/lp.hpp"
#include "fairslice/welfare.hpp"

namespace fairslice {

namespace {

// Iterated exact maximin: raise the common floor of the unfrozen agents,
// freeze every agent who provably cannot exceed the floor, repeat. Frozen
// agents keep ">= level" constraints; saturation guarantees they end at
// their level exactly. Everything runs on rational LPs, so the utility
// vector is the leximin optimum exactly, not approximately.
class LeximinSolver {
 public:
  LeximinSolver(const Cake& cake, bool relative) : cake_(cake), n_(cake.num_agents()),
                                                   m_(cake.num_slices()) {
    value_.assign(n_, std::vector<Rational>(m_));
    for (size_t i = 0; i < n_; ++i)
      for (size_t j = 0; j < m_; ++j) {
        value_[i][j] = cake.slice_value(i, j);
        if (relative) value_[i][j] /= cake.total_value(i);
      }
  }

  SolveResult run() {
    std::vector<std::optional<Rational>> level(n_);
    std::vector<std::vector<Rational>> last_fractions;
    size_t lp_count = 0;

    while (true) {
      std::vector<size_t> open;
      for (size_t i = 0; i < n_; ++i)
        if (!level[i]) open.push_back(i);
      if (open.empty()) break;

      // Stage LP: maximize the common floor t of the open agents.
      LpSolution stage = solve_stage(level, open, &lp_count);
      const Rational floor = stage.objective_value;
      last_fractions = unpack(stage.x);

      // Probe saturation only for agents sitting exactly on the floor; an
      // agent already above it in the stage optimum is its own witness.
      bool froze = false;
      for (size_t i : open) {
        Rational u = utility_of(last_fractions, i);
        if (u > floor) continue;
        LpSolution probe = solve_probe(level, open, i, floor, &lp_count);
        if (probe.objective_value == floor) {
          level[i] = floor;
          froze = true;
        }
      }
      if (!froze)
        throw SolverError("leximin: no agent saturated at the stage optimum");
    }

    SolveResult r{Allocation(cake_, std::move(last_fractions)), {}, std::nullopt, {}};
    r.utility = utilities(cake_, r.allocation);
    r.diagnostics.exact = true;
    r.diagnostics.iterations = lp_count;
    return r;
  }

 private:
  // Variable layout: x[i*m + j] = agent i's share of slice j, plus one floor
  // variable t at the end for stage LPs.
  LinearProgram base_lp(bool with_floor) const {
    LinearProgram lp;
    for (size_t k = 0; k < n_ * m_; ++k) lp.add_variable(0, Rational(0), std::nullopt);
    if (with_floor) lp.add_variable(1, Rational(0), std::nullopt);
    for (size_t j = 0; j < m_; ++j) {
      std::vector<Rational> row(lp.num_vars, Rational(0));
      for (size_t i = 0; i < n_; ++i) row[i * m_ + j] = 1;
      lp.add_row(std::move(row), RowSense::Equal, Rational(1));
    }
    return lp;
  }

  void add_utility_row(LinearProgram& lp, size_t agent, std::optional<size_t> floor_var,
                       const Rational& rhs) const {
    std::vector<Rational> row(lp.num_vars, Rational(0));
    for (size_t j = 0; j < m_; ++j) row[agent * m_ + j] = value_[agent][j];
    if (floor_var) row[*floor_var] = -1;
    lp.add_row(std::move(row), RowSense::GreaterEq, rhs);
  }

  LpSolution solve_stage(const std::vector<std::optional<Rational>>& level,
                         const std::vector<size_t>& open, size_t* lp_count) const {
    LinearProgram lp = base_lp(true);
    const size_t t_var = n_ * m_;
    for (size_t i : open) add_utility_row(lp, i, t_var, Rational(0));
    for (size_t i = 0; i < n_; ++i)
      if (level[i]) add_utility_row(lp, i, std::nullopt, *level[i]);
    ++*lp_count;
    LpSolution sol = lp_solve(lp);
    if (sol.status != LpStatus::Optimal)
      throw SolverError("leximin: stage LP not optimal");
    return sol;
  }

  LpSolution solve_probe(const std::vector<std::optional<Rational>>& level,
                         const std::vector<size_t>& open, size_t agent, const Rational& floor,
                         size_t* lp_count) const {
    LinearProgram lp = base_lp(false);
    for (size_t j = 0; j < m_; ++j) lp.objective[agent * m_ + j] = value_[agent][j];
    for (size_t i : open) add_utility_row(lp, i, std::nullopt, floor);
    for (size_t i = 0; i < n_; ++i)
      if (level[i]) add_utility_row(lp, i, std::nullopt, *level[i]);
    ++*lp_count;
    LpSolution sol = lp_solve(lp);
    if (sol.status != LpStatus::Optimal)
      throw SolverError("leximin: saturation probe LP not optimal");
    return sol;
  }

  std::vector<std::vector<Rational>> unpack(const std::vector<Rational>& x) const {
    std::vector<std::vector<Rational>> f(n_, std::vector<Rational>(m_));
    for (size_t i = 0; i < n_; ++i)
      for (size_t j = 0; j < m_; ++j) f[i][j] = x[i * m_ + j];
    return f;
  }

  Rational utility_of(const std::vector<std::vector<Rational>>& f, size_t i) const {
    Rational u = 0;
    for (size_t j = 0; j < m_; ++j) u += f[i][j] * value_[i][j];
    return u;
  }

  const Cake& cake_;
  size_t n_, m_;
  std::vector<std::vector<Rational>> value_;
};

}  // namespace

SolveResult solve_leximin_absolute(const Cake& cake) {
  return LeximinSolver(cake, false).run();
}

SolveResult solve_leximin_relative(const Cake& cake) {
  return LeximinSolver(cake, true).run();
}

}  // namespace fairslice
