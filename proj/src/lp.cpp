#include "fairslice/lp.hpp"

#include <stdexcept>

namespace fairslice {

size_t LinearProgram::add_variable(Rational objective_coeff, std::optional<Rational> lo,
                                   std::optional<Rational> hi) {
  objective.push_back(std::move(objective_coeff));
  lower.push_back(std::move(lo));
  upper.push_back(std::move(hi));
  return num_vars++;
}

void LinearProgram::add_row(std::vector<Rational> coeffs, RowSense sense, Rational rhs) {
  if (coeffs.size() != num_vars)
    throw std::invalid_argument("lp: row width does not match variable count");
  rows.push_back(Row{std::move(coeffs), sense, std::move(rhs)});
}

namespace {

// Dense simplex tableau over mpq_t. Row 0..m-1 are constraints with rhs in the
// last column; the working objective lives in a separate cost row.
class Tableau {
 public:
  Tableau(size_t rows, size_t cols) : rows_(rows), cols_(cols), cells_(rows * (cols + 1)) {
    mpq_init(tmp_);
  }
  ~Tableau() { mpq_clear(tmp_); }
  Tableau(const Tableau&) = delete;
  Tableau& operator=(const Tableau&) = delete;

  Rational& at(size_t r, size_t c) { return cells_[r * (cols_ + 1) + c]; }
  Rational& rhs(size_t r) { return at(r, cols_); }
  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }

  // row[r] -= factor * row[p], sparing zero work; uses a preallocated mpq
  // scratch because this is the hot loop of every pivot.
  void eliminate(std::vector<Rational>& row, size_t p, const Rational& factor) {
    if (factor == 0) return;
    const size_t base = p * (cols_ + 1);
    for (size_t c = 0; c <= cols_; ++c) {
      const Rational& src = cells_[base + c];
      if (src.get_num() == 0) continue;
      mpq_mul(tmp_, factor.get_mpq_t(), src.get_mpq_t());
      mpq_sub(row[c].get_mpq_t(), row[c].get_mpq_t(), tmp_);
    }
  }

  void eliminate_row(size_t r, size_t p, const Rational& factor) {
    if (factor == 0) return;
    const size_t base_r = r * (cols_ + 1);
    const size_t base_p = p * (cols_ + 1);
    for (size_t c = 0; c <= cols_; ++c) {
      const Rational& src = cells_[base_p + c];
      if (src.get_num() == 0) continue;
      mpq_mul(tmp_, factor.get_mpq_t(), src.get_mpq_t());
      mpq_sub(cells_[base_r + c].get_mpq_t(), cells_[base_r + c].get_mpq_t(), tmp_);
    }
  }

  // Scale row p so the pivot cell becomes 1, then clear column q everywhere else.
  void pivot(size_t p, size_t q, std::vector<Rational>& cost_row,
             std::vector<size_t>& basis) {
    const Rational piv = at(p, q);
    for (size_t c = 0; c <= cols_; ++c) {
      Rational& cell = at(p, c);
      if (cell.get_num() != 0) cell /= piv;
    }
    at(p, q) = 1;
    for (size_t r = 0; r < rows_; ++r) {
      if (r == p) continue;
      Rational factor = at(r, q);
      eliminate_row(r, p, factor);
      at(r, q) = 0;  // enforce exactness against residual forms
    }
    Rational cfac = cost_row[q];
    eliminate(cost_row, p, cfac);
    cost_row[q] = 0;
    basis[p] = q;
  }

 private:
  size_t rows_, cols_;
  std::vector<Rational> cells_;
  mpq_t tmp_;
};

enum class RunResult { Optimal, Unbounded };

// Bland's rule: entering column = lowest-index nonbasic with positive reduced
// cost; leaving row = lexicographic min ratio, ties by lowest basic index.
RunResult run_simplex(Tableau& t, std::vector<Rational>& cost, std::vector<size_t>& basis,
                      const std::vector<bool>& allowed) {
  const size_t m = t.rows();
  std::vector<bool> is_basic(t.cols(), false);
  for (size_t r = 0; r < m; ++r) is_basic[basis[r]] = true;

  for (;;) {
    size_t enter = t.cols();
    for (size_t c = 0; c < t.cols(); ++c) {
      if (is_basic[c] || !allowed[c]) continue;
      if (cost[c] > 0) {
        enter = c;
        break;
      }
    }
    if (enter == t.cols()) return RunResult::Optimal;

    size_t leave = m;
    Rational best_ratio;
    for (size_t r = 0; r < m; ++r) {
      const Rational& a = t.at(r, enter);
      if (a <= 0) continue;
      Rational ratio = t.rhs(r) / a;
      if (leave == m || ratio < best_ratio ||
          (ratio == best_ratio && basis[r] < basis[leave])) {
        leave = r;
        best_ratio = ratio;
      }
    }
    if (leave == m) return RunResult::Unbounded;

    is_basic[basis[leave]] = false;
    is_basic[enter] = true;
    t.pivot(leave, enter, cost, basis);
  }
}

}  // namespace

LpSolution lp_solve(const LinearProgram& lp) {
  if (lp.objective.size() != lp.num_vars || lp.lower.size() != lp.num_vars ||
      lp.upper.size() != lp.num_vars)
    throw std::invalid_argument("lp: inconsistent variable metadata");
  for (const auto& row : lp.rows)
    if (row.coeffs.size() != lp.num_vars)
      throw std::invalid_argument("lp: row width does not match variable count");

  // --- Bound presolve: express every original variable over y >= 0. ---
  // x = shift + sign * y[col]   (free variables use a second, negated column)
  struct VarMap {
    size_t col;
    Rational shift;
    int sign;                       // +1 or -1
    std::optional<size_t> neg_col;  // for free variables: x = y[col] - y[neg_col]
  };
  std::vector<VarMap> vmap(lp.num_vars);
  size_t ycount = 0;
  struct ExtraRow {
    size_t ycol;
    Rational bound;  // y[ycol] <= bound
  };
  std::vector<ExtraRow> range_rows;

  for (size_t v = 0; v < lp.num_vars; ++v) {
    const auto& lo = lp.lower[v];
    const auto& hi = lp.upper[v];
    if (lo && hi && *hi < *lo) return LpSolution{LpStatus::Infeasible, {}, 0};
    if (lo) {
      vmap[v] = VarMap{ycount++, *lo, +1, std::nullopt};
      if (hi) range_rows.push_back(ExtraRow{vmap[v].col, *hi - *lo});
    } else if (hi) {
      vmap[v] = VarMap{ycount++, *hi, -1, std::nullopt};
    } else {
      const size_t pos = ycount++;
      const size_t neg = ycount++;
      vmap[v] = VarMap{pos, 0, +1, neg};
    }
  }

  // --- Assemble rows in y-space with rhs >= 0. ---
  struct NormRow {
    std::vector<Rational> a;
    RowSense sense;
    Rational b;
  };
  std::vector<NormRow> norm;
  norm.reserve(lp.rows.size() + range_rows.size());
  auto push_row = [&](const std::vector<Rational>& coeffs, RowSense sense, Rational b) {
    NormRow r{std::vector<Rational>(ycount, Rational(0)), sense, std::move(b)};
    for (size_t v = 0; v < lp.num_vars; ++v) {
      const Rational& c = coeffs[v];
      if (c == 0) continue;
      r.b -= c * vmap[v].shift;
      r.a[vmap[v].col] += (vmap[v].sign > 0 ? c : -c);
      if (vmap[v].neg_col) r.a[*vmap[v].neg_col] -= c;
    }
    if (r.b < 0) {
      for (auto& c : r.a) c = -c;
      r.b = -r.b;
      if (r.sense == RowSense::LessEq)
        r.sense = RowSense::GreaterEq;
      else if (r.sense == RowSense::GreaterEq)
        r.sense = RowSense::LessEq;
    }
    norm.push_back(std::move(r));
  };
  for (const auto& row : lp.rows) push_row(row.coeffs, row.sense, row.rhs);
  for (const auto& er : range_rows) {
    std::vector<Rational> unit(ycount, Rational(0));
    // Already in y-space; bypass push_row's substitution.
    NormRow r{std::move(unit), RowSense::LessEq, er.bound};
    r.a[er.ycol] = 1;
    if (r.b < 0) return LpSolution{LpStatus::Infeasible, {}, 0};  // hi < lo caught above
    norm.push_back(std::move(r));
  }

  const size_t m = norm.size();
  // Column layout: [structural y | slack/surplus | artificial].
  size_t nslack = 0, nartif = 0;
  for (const auto& r : norm) {
    if (r.sense != RowSense::Equal) ++nslack;
    if (r.sense != RowSense::LessEq) ++nartif;
  }
  const size_t slack0 = ycount;
  const size_t artif0 = ycount + nslack;
  const size_t ncols = ycount + nslack + nartif;

  Tableau t(m, ncols);
  std::vector<size_t> basis(m);
  {
    size_t s = slack0, a = artif0;
    for (size_t r = 0; r < m; ++r) {
      for (size_t c = 0; c < ycount; ++c) t.at(r, c) = norm[r].a[c];
      t.rhs(r) = norm[r].b;
      switch (norm[r].sense) {
        case RowSense::LessEq:
          t.at(r, s) = 1;
          basis[r] = s++;
          break;
        case RowSense::GreaterEq:
          t.at(r, s) = -1;
          ++s;
          t.at(r, a) = 1;
          basis[r] = a++;
          break;
        case RowSense::Equal:
          t.at(r, a) = 1;
          basis[r] = a++;
          break;
      }
    }
  }

  std::vector<bool> allowed(ncols, true);

  // --- Phase 1: drive the artificial variables to zero. ---
  if (nartif > 0) {
    // maximize -(sum of artificials): reduced costs = sum of artificial rows.
    std::vector<Rational> cost(ncols + 1, Rational(0));
    for (size_t r = 0; r < m; ++r) {
      if (basis[r] < artif0) continue;
      for (size_t c = 0; c <= ncols; ++c) {
        const Rational& cell = t.at(r, c);
        if (cell.get_num() != 0) cost[c == ncols ? ncols : c] += cell;
      }
    }
    for (size_t c = artif0; c < ncols; ++c) cost[c] = 0;  // artificials cost themselves
    run_simplex(t, cost, basis, allowed);                 // bounded above by 0
    if (cost[ncols] != 0) {
      // Residual infeasibility equals the leftover artificial mass.
      return LpSolution{LpStatus::Infeasible, {}, 0};
    }
    // Pivot lingering zero-valued artificials out of the basis when possible.
    for (size_t r = 0; r < m; ++r) {
      if (basis[r] < artif0) continue;
      size_t q = ncols;
      for (size_t c = 0; c < artif0; ++c)
        if (t.at(r, c) != 0) {
          q = c;
          break;
        }
      if (q < ncols) {
        std::vector<Rational> dummy(ncols + 1, Rational(0));
        t.pivot(r, q, dummy, basis);
      }
      // else: the row is 0 = 0 over real columns (redundant); its artificial
      // stays basic at zero and is barred from re-entering below.
    }
    for (size_t c = artif0; c < ncols; ++c) allowed[c] = false;
  }

  // --- Phase 2: the real objective over y. ---
  std::vector<Rational> cost(ncols + 1, Rational(0));
  for (size_t v = 0; v < lp.num_vars; ++v) {
    const Rational& c = lp.objective[v];
    if (c == 0) continue;
    cost[vmap[v].col] += (vmap[v].sign > 0 ? c : -c);
    if (vmap[v].neg_col) cost[*vmap[v].neg_col] -= c;
  }
  // Reduce against the current basis.
  for (size_t r = 0; r < m; ++r) {
    Rational cb = cost[basis[r]];
    if (cb == 0) continue;
    t.eliminate(cost, r, cb);
    cost[basis[r]] = 0;
  }
  if (run_simplex(t, cost, basis, allowed) == RunResult::Unbounded)
    return LpSolution{LpStatus::Unbounded, {}, 0};

  std::vector<Rational> y(ncols, Rational(0));
  for (size_t r = 0; r < m; ++r) y[basis[r]] = t.rhs(r);

  LpSolution sol;
  sol.status = LpStatus::Optimal;
  sol.x.resize(lp.num_vars);
  for (size_t v = 0; v < lp.num_vars; ++v) {
    Rational val = vmap[v].shift;
    val += (vmap[v].sign > 0 ? y[vmap[v].col] : -y[vmap[v].col]);
    if (vmap[v].neg_col) val -= y[*vmap[v].neg_col];
    sol.x[v] = val;
    sol.objective_value += lp.objective[v] * val;
  }
  return sol;
}

}  // namespace fairslice
