#include "fairslice/welfare.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fairslice {

WelfareClassification classify_welfare(double p) {
  WelfareClassification c;
  c.p = p;
  if (p > 1)
    c.family = "convex";
  else if (p == 1)
    c.family = "utilitarian";
  else if (p > 0)
    c.family = "strictly-concave";
  else if (p == 0)
    c.family = "nash";
  else
    c.family = "hyper-concave";

  c.pareto_optimal = true;
  c.essentially_single_valued = p < 1;
  c.proportional_absolute = p == 0;
  c.proportional_relative = p <= 0;  // x * w'(x) non-increasing
  c.resource_monotone_absolute = p <= 1;
  c.resource_monotone_relative = p == 0;
  c.population_monotone_absolute = p <= 1;
  c.population_monotone_relative = p <= 1;
  return c;
}

double nash_product(const UtilityVector& utility) {
  double prod = 1;
  for (const auto& r : utility.relative) prod *= to_double(r);
  return prod;
}

// --- Utilitarian -------------------------------------------------------------

namespace {

SolveResult solve_utilitarian(const Cake& cake, bool relative) {
  const size_t n = cake.num_agents();
  const size_t m = cake.num_slices();
  std::vector<std::vector<Rational>> f(n, std::vector<Rational>(m, Rational(0)));
  for (size_t j = 0; j < m; ++j) {
    size_t winner = 0;
    Rational best = -1;
    for (size_t i = 0; i < n; ++i) {
      Rational score = cake.slice(j).densities[i];
      if (relative) score /= cake.total_value(i);
      if (score > best) {  // strict: ties stay with the lowest agent index
        best = score;
        winner = i;
      }
    }
    f[winner][j] = 1;
  }
  SolveResult r{Allocation(cake, std::move(f)), {}, std::nullopt, {}};
  r.utility = utilities(cake, r.allocation);
  r.diagnostics.exact = true;
  r.diagnostics.notes = "slice ties broken toward the lowest agent index";
  return r;
}

// --- p > 1: exact enumeration of whole-slice assignments ----------------------

constexpr double kEnumerationCap = 2.5e7;

bool near_integer(double p) { return p == std::floor(p); }

SolveResult solve_wp_enumerate(const Cake& cake, double p, bool relative) {
  const size_t n = cake.num_agents();
  const size_t m = cake.num_slices();
  if (std::pow(static_cast<double>(n), static_cast<double>(m)) > kEnumerationCap)
    throw SolverError("power-welfare solver with p > 1: assignment enumeration cap exceeded");

  std::vector<std::vector<Rational>> value(n, std::vector<Rational>(m));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < m; ++j) {
      value[i][j] = cake.slice_value(i, j);
      if (relative) value[i][j] /= cake.total_value(i);
    }

  // Integer exponents allow exact rational welfare comparison: sum of u^p
  // (the 1/p factor is a common positive constant). Otherwise compare in
  // doubles. Ties keep the first assignment in enumeration order (slice 0
  // advances fastest), a documented deterministic selection.
  const bool exact = near_integer(p) && p <= 64;
  const long ip = static_cast<long>(p);

  std::vector<size_t> assign(m, 0), best_assign;
  std::vector<Rational> u(n);
  Rational best_exact;
  double best_double = -std::numeric_limits<double>::infinity();
  bool have_best = false;
  size_t visited = 0;

  for (;;) {
    ++visited;
    std::fill(u.begin(), u.end(), Rational(0));
    for (size_t j = 0; j < m; ++j) u[assign[j]] += value[assign[j]][j];
    if (exact) {
      Rational w = 0;
      for (size_t i = 0; i < n; ++i) {
        Rational t = 1;
        for (long k = 0; k < ip; ++k) t *= u[i];
        w += t;
      }
      if (!have_best || w > best_exact) {
        best_exact = w;
        best_assign = assign;
        have_best = true;
      }
    } else {
      double w = 0;
      for (size_t i = 0; i < n; ++i) w += std::pow(to_double(u[i]), p) / p;
      if (!have_best || w > best_double) {
        best_double = w;
        best_assign = assign;
        have_best = true;
      }
    }
    size_t j = 0;
    while (j < m && ++assign[j] == n) assign[j++] = 0;
    if (j == m) break;
  }

  std::vector<std::vector<Rational>> f(n, std::vector<Rational>(m, Rational(0)));
  for (size_t j = 0; j < m; ++j) f[best_assign[j]][j] = 1;
  SolveResult r{Allocation(cake, std::move(f)), {}, std::nullopt, {}};
  r.utility = utilities(cake, r.allocation);
  r.diagnostics.exact = exact;
  r.diagnostics.iterations = visited;
  r.diagnostics.notes =
      "whole-slice assignment enumeration; welfare ties keep the first assignment in "
      "enumeration order";
  return r;
}

// --- p < 1: projected gradient ascent over the per-slice simplices ------------

// Euclidean projection of v onto the probability simplex (Held et al.).
void project_simplex(std::vector<double>& v) {
  static thread_local std::vector<double> sorted;
  sorted = v;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double acc = 0, theta = 0;
  size_t k = 0;
  for (size_t i = 0; i < sorted.size(); ++i) {
    acc += sorted[i];
    const double t = (acc - 1) / static_cast<double>(i + 1);
    if (sorted[i] - t > 0) {
      theta = t;
      k = i + 1;
    }
  }
  (void)k;
  for (auto& x : v) x = std::max(0.0, x - theta);
}

struct PgaProblem {
  size_t n, m;
  std::vector<std::vector<double>> value;  // c_ij, per-slice values in the chosen gauge
  double p;

  double wp(double x) const {
    if (p == 0) return std::log(x);
    return std::pow(x, p) / p;
  }
  double wp_grad(double u) const { return std::pow(u, p - 1.0); }

  double objective(const std::vector<std::vector<double>>& x) const {
    double F = 0;
    for (size_t i = 0; i < n; ++i) {
      double u = 0;
      for (size_t j = 0; j < m; ++j) u += x[i][j] * value[i][j];
      if (u <= 0 && p <= 0) return -std::numeric_limits<double>::infinity();
      F += wp(std::max(u, 1e-300));
    }
    return F;
  }
};

SolveResult solve_wp_pga(const Cake& cake, double p, bool relative, double tol) {
  const size_t n = cake.num_agents();
  const size_t m = cake.num_slices();
  PgaProblem prob{n, m, {}, p};
  prob.value.assign(n, std::vector<double>(m));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < m; ++j) {
      Rational v = cake.slice_value(i, j);
      if (relative) v /= cake.total_value(i);
      prob.value[i][j] = to_double(v);
    }

  // Utilities are floored at a scale-relative epsilon before the gradient is
  // taken: for p < 1 the marginal welfare u^(p-1) blows up as u -> 0, and an
  // infinite gradient would poison the simplex projection with NaNs.
  std::vector<double> ufloor(n);
  for (size_t i = 0; i < n; ++i) {
    double scale = 0;
    for (size_t j = 0; j < m; ++j) scale += prob.value[i][j];
    ufloor[i] = std::max(scale * 1e-14, 1e-300);
  }

  std::vector<std::vector<double>> x(n, std::vector<double>(m, 1.0 / static_cast<double>(n)));
  std::vector<std::vector<double>> cand(n, std::vector<double>(m));
  std::vector<std::vector<double>> grad(n, std::vector<double>(m));
  std::vector<double> u(n), grad_col(n);
  double step = 1.0;
  double F = prob.objective(x);
  const size_t max_iters = 400000;
  const double cert_tol = std::max(tol, 1e-12);
  double residual = 1;
  size_t it = 0;

  for (; it < max_iters; ++it) {
    for (size_t i = 0; i < n; ++i) {
      u[i] = 0;
      for (size_t j = 0; j < m; ++j) u[i] += x[i][j] * prob.value[i][j];
      u[i] = std::max(u[i], ufloor[i]);
    }
    for (size_t i = 0; i < n; ++i) {
      const double wg = prob.wp_grad(u[i]);
      for (size_t j = 0; j < m; ++j) grad[i][j] = wg * prob.value[i][j];
    }

    // First-order residual: every held share must (nearly) maximize
    // marginal welfare w'(u_i) * c_ij within its slice.
    residual = 0;
    for (size_t j = 0; j < m; ++j) {
      double mbest = 0;
      for (size_t i = 0; i < n; ++i) mbest = std::max(mbest, grad[i][j]);
      if (mbest <= 0) continue;
      for (size_t i = 0; i < n; ++i) {
        if (x[i][j] <= 1e-9) continue;
        residual =
            std::max(residual, (mbest - grad[i][j]) / mbest * std::min(1.0, x[i][j] * 1e6));
      }
    }
    if (residual <= cert_tol) break;

    // Backtracking ascent with an Armijo test: a candidate is accepted only
    // if it realizes a fraction of the first-order predicted gain. Accepting
    // merely non-worsening moves looks harmless but lets the iterate hop
    // along a level set between symmetric near-optima without ever
    // converging. The step grows after accepted moves but is capped so the
    // backtracking budget can always walk it back down.
    bool accepted = false;
    bool stalled = false;
    for (int bt = 0; bt < 80 && !accepted; ++bt) {
      for (size_t j = 0; j < m; ++j) {
        for (size_t i = 0; i < n; ++i) grad_col[i] = x[i][j] + step * grad[i][j];
        project_simplex(grad_col);
        for (size_t i = 0; i < n; ++i) cand[i][j] = grad_col[i];
      }
      double predicted = 0;
      for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < m; ++j) predicted += grad[i][j] * (cand[i][j] - x[i][j]);
      const double Fc = prob.objective(cand);
      if (std::isfinite(Fc) && Fc - F >= 1e-4 * predicted - 1e-15) {
        double moved = 0;
        for (size_t i = 0; i < n; ++i)
          for (size_t j = 0; j < m; ++j) moved = std::max(moved, std::abs(cand[i][j] - x[i][j]));
        x.swap(cand);
        F = Fc;
        accepted = true;
        step = std::min(step * 2, 1e6);
        stalled = moved < 1e-16;
      } else {
        step *= 0.5;
      }
    }
    if (!accepted || stalled) break;  // no further admissible progress at this precision
  }

  // Round to rational, drop dust, renormalize columns exactly, then recompute
  // utilities in exact arithmetic.
  std::vector<std::vector<Rational>> f(n, std::vector<Rational>(m));
  for (size_t j = 0; j < m; ++j) {
    Rational col = 0;
    for (size_t i = 0; i < n; ++i) {
      double v = x[i][j];
      if (v < 1e-9) v = 0;
      if (v > 1 - 1e-9) v = 1;
      f[i][j] = rational_from_double(v);
      col += f[i][j];
    }
    for (size_t i = 0; i < n; ++i) f[i][j] /= col;
  }
  SolveResult r{Allocation(cake, std::move(f)), {}, std::nullopt, {}};
  r.utility = utilities(cake, r.allocation);
  r.diagnostics.exact = false;
  r.diagnostics.iterations = it;
  r.diagnostics.residual = residual;
  return r;
}

SolveResult solve_wp(const Cake& cake, double p, bool relative, double tol) {
  if (!std::isfinite(p)) throw std::invalid_argument("welfare exponent must be finite");
  if (p > 1) return solve_wp_enumerate(cake, p, relative);
  if (p == 1) {
    SolveResult r = solve_utilitarian(cake, relative);
    r.diagnostics.notes = "p = 1 delegates to the utilitarian closed form; " +
                          r.diagnostics.notes;
    return r;
  }
  return solve_wp_pga(cake, p, relative, tol);
}

}  // namespace

SolveResult solve_utilitarian_absolute(const Cake& cake) { return solve_utilitarian(cake, false); }
SolveResult solve_utilitarian_relative(const Cake& cake) { return solve_utilitarian(cake, true); }

SolveResult solve_wp_absolute(const Cake& cake, double p, double tol) {
  return solve_wp(cake, p, false, tol);
}
SolveResult solve_wp_relative(const Cake& cake, double p, double tol) {
  return solve_wp(cake, p, true, tol);
}

// --- Grid oracle ---------------------------------------------------------------

namespace {

double compositions_count(size_t n, int grid) {
  // C(grid + n - 1, n - 1) in doubles; only used for the cap estimate.
  double c = 1;
  for (size_t k = 1; k < n; ++k) c = c * (grid + k) / k;
  return c;
}

struct OracleState {
  size_t n, m;
  int grid;
  std::vector<std::vector<double>> value;  // relative slice values
  std::vector<double> remaining;           // per agent, over slices >= depth
  std::vector<double> u;
  double best = -1;

  void recurse(size_t j) {
    if (j == m) {
      double prod = 1;
      for (size_t i = 0; i < n; ++i) prod *= u[i];
      if (prod > best) best = prod;
      return;
    }
    double bound = 1;
    for (size_t i = 0; i < n; ++i) bound *= u[i] + remaining[i];
    if (bound <= best) return;  // no completion can beat the incumbent
    for (size_t i = 0; i < n; ++i) remaining[i] -= value[i][j];
    descend(j, 0, grid);
    for (size_t i = 0; i < n; ++i) remaining[i] += value[i][j];
  }

  // Enumerate grid splits of slice j: agent k takes take/grid of it. Each
  // level saves and restores u[k] by assignment so deeper levels cannot
  // disturb the rollback.
  void descend(size_t j, size_t k, int left) {
    const double saved = u[k];
    if (k + 1 == n) {
      u[k] = saved + value[k][j] * left / static_cast<double>(grid);
      recurse(j + 1);
      u[k] = saved;
      return;
    }
    for (int take = 0; take <= left; ++take) {
      u[k] = saved + value[k][j] * take / static_cast<double>(grid);
      descend(j, k + 1, left - take);
    }
    u[k] = saved;
  }
};

}  // namespace

double nash_brute_oracle(const Cake& cake, int grid) {
  if (grid < 1) throw std::invalid_argument("nash_brute_oracle: grid must be >= 1");
  const size_t n = cake.num_agents();
  const size_t m = cake.num_slices();

  OracleState st;
  st.n = n;
  st.grid = grid;
  st.u.assign(n, 0.0);
  st.value.assign(n, {});

  // Dominance pre-pass: a slice valued by exactly one agent contributes to
  // the objective only through that agent, so the best grid point gives it
  // to them wholly. Only multi-valued slices enter the enumeration.
  size_t free_slices = 0;
  for (size_t j = 0; j < m; ++j) {
    size_t interested = 0, who = 0;
    for (size_t i = 0; i < n; ++i)
      if (cake.slice(j).densities[i] > 0) {
        ++interested;
        who = i;
      }
    if (interested == 1) {
      st.u[who] += to_double(cake.slice_value(who, j) / cake.total_value(who));
    } else {
      ++free_slices;
      for (size_t i = 0; i < n; ++i)
        st.value[i].push_back(to_double(cake.slice_value(i, j) / cake.total_value(i)));
    }
  }
  st.m = free_slices;
  st.remaining.assign(n, 0.0);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < free_slices; ++j) st.remaining[i] += st.value[i][j];

  const double configs =
      std::pow(compositions_count(n, grid), static_cast<double>(free_slices));
  if (configs > 6e7)
    throw SolverError("nash_brute_oracle: grid enumeration cap exceeded");

  st.recurse(0);
  return st.best;
}

// --- Rule handles ----------------------------------------------------------------

std::string rule_name(const Rule& rule) {
  switch (rule.kind) {
    case RuleKind::Nash: return "nash";
    case RuleKind::LeximinAbsolute: return "leximin-abs";
    case RuleKind::LeximinRelative: return "leximin-rel";
    case RuleKind::UtilitarianAbsolute: return "util-abs";
    case RuleKind::UtilitarianRelative: return "util-rel";
    case RuleKind::PowerAbsolute: return "wp-abs";
    case RuleKind::PowerRelative: return "wp-rel";
    case RuleKind::CutAndChoose: return "cut-and-choose";
  }
  return "?";
}

std::optional<RuleKind> parse_rule_kind(const std::string& name) {
  if (name == "nash") return RuleKind::Nash;
  if (name == "leximin-abs") return RuleKind::LeximinAbsolute;
  if (name == "leximin-rel") return RuleKind::LeximinRelative;
  if (name == "util-abs") return RuleKind::UtilitarianAbsolute;
  if (name == "util-rel") return RuleKind::UtilitarianRelative;
  if (name == "wp-abs") return RuleKind::PowerAbsolute;
  if (name == "wp-rel") return RuleKind::PowerRelative;
  if (name == "cut-and-choose") return RuleKind::CutAndChoose;
  return std::nullopt;
}

SolveResult solve(const Cake& cake, const Rule& rule) {
  switch (rule.kind) {
    case RuleKind::Nash: return solve_nash(cake, rule.tol);
    case RuleKind::LeximinAbsolute: return solve_leximin_absolute(cake);
    case RuleKind::LeximinRelative: return solve_leximin_relative(cake);
    case RuleKind::UtilitarianAbsolute: return solve_utilitarian_absolute(cake);
    case RuleKind::UtilitarianRelative: return solve_utilitarian_relative(cake);
    case RuleKind::PowerAbsolute: return solve_wp_absolute(cake, rule.p, rule.tol);
    case RuleKind::PowerRelative: return solve_wp_relative(cake, rule.p, rule.tol);
    case RuleKind::CutAndChoose:
      throw std::invalid_argument("cut-and-choose dispatches via the monotonicity harness");
  }
  throw std::invalid_argument("unknown rule");
}

}  // namespace fairslice
