#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "doctest.h"
#include "fairslice/lp.hpp"
#include "support.hpp"

using namespace fairslice;
using testsupport::Q;

namespace {

// Independent oracle: enumerate candidate vertices of
//   max c.x  s.t.  A x <= b,  x >= 0
// by solving every n-subset of the m+n hyperplanes {rows, axes} with exact
// Gaussian elimination, keeping feasible points, and taking the best.
// Only usable for tiny instances; that is the point.
struct DenseLp {
  std::vector<Rational> c;
  std::vector<std::vector<Rational>> A;
  std::vector<Rational> b;
};

std::optional<std::vector<Rational>> solve_square(std::vector<std::vector<Rational>> M,
                                                  std::vector<Rational> r) {
  const size_t n = r.size();
  for (size_t col = 0; col < n; ++col) {
    size_t pivot = col;
    while (pivot < n && M[pivot][col] == 0) ++pivot;
    if (pivot == n) return std::nullopt;  // singular
    std::swap(M[pivot], M[col]);
    std::swap(r[pivot], r[col]);
    for (size_t i = 0; i < n; ++i) {
      if (i == col || M[i][col] == 0) continue;
      const Rational f = M[i][col] / M[col][col];
      for (size_t j = col; j < n; ++j) M[i][j] -= f * M[col][j];
      r[i] -= f * r[col];
    }
  }
  std::vector<Rational> x(n);
  for (size_t i = 0; i < n; ++i) x[i] = r[i] / M[i][i];
  return x;
}

std::optional<Rational> vertex_oracle(const DenseLp& lp) {
  const size_t n = lp.c.size();
  const size_t m = lp.A.size();
  // Hyperplane k: k < m is row k tight; otherwise axis (k - m) is zero.
  std::vector<size_t> pick(n, 0);
  std::optional<Rational> best;
  const size_t total = m + n;

  std::vector<size_t> idx(n);
  // Enumerate all n-subsets of [0, total).
  std::function<void(size_t, size_t)> rec = [&](size_t start, size_t depth) {
    if (depth == n) {
      std::vector<std::vector<Rational>> M;
      std::vector<Rational> r;
      for (size_t k : idx) {
        if (k < m) {
          M.push_back(lp.A[k]);
          r.push_back(lp.b[k]);
        } else {
          std::vector<Rational> row(n, Rational(0));
          row[k - m] = 1;
          M.push_back(std::move(row));
          r.push_back(0);
        }
      }
      auto x = solve_square(std::move(M), std::move(r));
      if (!x) return;
      for (size_t j = 0; j < n; ++j)
        if ((*x)[j] < 0) return;
      for (size_t i = 0; i < m; ++i) {
        Rational lhs = 0;
        for (size_t j = 0; j < n; ++j) lhs += lp.A[i][j] * (*x)[j];
        if (lhs > lp.b[i]) return;
      }
      Rational val = 0;
      for (size_t j = 0; j < n; ++j) val += lp.c[j] * (*x)[j];
      if (!best || val > *best) best = val;
      return;
    }
    for (size_t k = start; k < total; ++k) {
      idx[depth] = k;
      rec(k + 1, depth + 1);
    }
  };
  rec(0, 0);
  (void)pick;
  return best;
}

LinearProgram to_program(const DenseLp& lp) {
  LinearProgram prog;
  for (const Rational& cj : lp.c) prog.add_variable(cj);
  for (size_t i = 0; i < lp.A.size(); ++i) prog.add_row(lp.A[i], RowSense::LessEq, lp.b[i]);
  return prog;
}

}  // namespace

TEST_CASE("lp_solve solves simple maximization exactly") {
  LinearProgram lp;
  lp.add_variable(Q(1));
  lp.add_variable(Q(1));
  lp.add_row({Q(1), Q(0)}, RowSense::LessEq, Q(1));
  lp.add_row({Q(0), Q(1)}, RowSense::LessEq, Q(2));
  const LpSolution sol = lp_solve(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.objective_value == Q(3));
  CHECK(sol.x == std::vector<Rational>{Q(1), Q(2)});
}

TEST_CASE("lp_solve handles equality and >= rows via phase 1") {
  LinearProgram lp;
  lp.add_variable(Q(2));
  lp.add_variable(Q(3));
  lp.add_row({Q(1), Q(1)}, RowSense::Equal, Q(1));
  const LpSolution sol = lp_solve(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.objective_value == Q(3));  // all weight on the better variable
  CHECK(sol.x == std::vector<Rational>{Q(0), Q(1)});

  LinearProgram lp2;
  lp2.add_variable(Q(-1));  // minimize x via max -x
  lp2.add_row({Q(1)}, RowSense::GreaterEq, Q(5, 2));
  const LpSolution sol2 = lp_solve(lp2);
  REQUIRE(sol2.status == LpStatus::Optimal);
  CHECK(sol2.x == std::vector<Rational>{Q(5, 2)});
}

TEST_CASE("lp_solve reports infeasible and unbounded programs") {
  LinearProgram lp;
  lp.add_variable(Q(1));
  lp.add_row({Q(1)}, RowSense::GreaterEq, Q(2));
  lp.add_row({Q(1)}, RowSense::LessEq, Q(1));
  CHECK(lp_solve(lp).status == LpStatus::Infeasible);

  LinearProgram lp2;
  lp2.add_variable(Q(1));  // max x, x >= 0, no ceiling
  CHECK(lp_solve(lp2).status == LpStatus::Unbounded);
}

TEST_CASE("lp_solve honors general variable bounds") {
  LinearProgram lp;
  lp.add_variable(Q(1), Q(-2), Q(7, 2));       // x in [-2, 7/2]
  lp.add_variable(Q(-1), std::nullopt, Q(4));  // y in (-inf, 4], objective -y
  lp.add_row({Q(1), Q(-1)}, RowSense::LessEq, Q(3));  // x - y <= 3
  const LpSolution sol = lp_solve(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  // Best: x at its ceiling 7/2, y as small as the row allows: y >= x - 3 = 1/2.
  CHECK(sol.x == std::vector<Rational>{Q(7, 2), Q(1, 2)});
  CHECK(sol.objective_value == Q(3));
}

TEST_CASE("lp_solve survives a classic degenerate pivot cycle") {
  // Beale's cycling example; Bland's rule must terminate at optimum 1/20.
  LinearProgram lp;
  lp.add_variable(Q(3, 4));
  lp.add_variable(Q(-150));
  lp.add_variable(Q(1, 50));
  lp.add_variable(Q(-6));
  lp.add_row({Q(1, 4), Q(-60), Q(-1, 25), Q(9)}, RowSense::LessEq, Q(0));
  lp.add_row({Q(1, 2), Q(-90), Q(-1, 50), Q(3)}, RowSense::LessEq, Q(0));
  lp.add_row({Q(0), Q(0), Q(1), Q(0)}, RowSense::LessEq, Q(1));
  const LpSolution sol = lp_solve(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.objective_value == Q(1, 20));
}

TEST_CASE("lp_solve agrees with exhaustive vertex enumeration on random programs") {
  std::mt19937_64 rng(20240911);
  int optimal_seen = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const size_t n = 2 + trial % 2;  // 2 or 3 variables
    const size_t m = 2 + (trial / 2) % 3;
    DenseLp lp;
    for (size_t j = 0; j < n; ++j)
      lp.c.push_back(Q(static_cast<long>(rng() % 11) - 5));
    for (size_t i = 0; i < m; ++i) {
      std::vector<Rational> row;
      for (size_t j = 0; j < n; ++j)
        row.push_back(Q(static_cast<long>(rng() % 9) - 4));
      lp.A.push_back(std::move(row));
      lp.b.push_back(Q(static_cast<long>(rng() % 7)));
    }
    const LpSolution got = lp_solve(to_program(lp));
    // x = 0 is feasible iff all b >= 0 (always true here), so never infeasible.
    REQUIRE(got.status != LpStatus::Infeasible);
    const auto want = vertex_oracle(lp);
    if (got.status == LpStatus::Optimal) {
      ++optimal_seen;
      REQUIRE_MESSAGE(want.has_value(), "oracle found no vertex but solver optimized");
      CHECK(got.objective_value == *want);
      // The returned point must itself be feasible and achieve the optimum.
      Rational val = 0;
      for (size_t j = 0; j < n; ++j) {
        REQUIRE(got.x[j] >= 0);
        val += lp.c[j] * got.x[j];
      }
      CHECK(val == got.objective_value);
      for (size_t i = 0; i < m; ++i) {
        Rational lhs = 0;
        for (size_t j = 0; j < n; ++j) lhs += lp.A[i][j] * got.x[j];
        CHECK(lhs <= lp.b[i]);
      }
    }
    // Unbounded claims are not cross-checked: the oracle only sees vertices.
  }
  CHECK(optimal_seen > 50);  // the corpus genuinely exercises the optimal path
}
