#pragma once

#include <optional>
#include <vector>

#include "fairslice/rational.hpp"

namespace fairslice {

enum class RowSense { LessEq, Equal, GreaterEq };

enum class LpStatus { Optimal, Infeasible, Unbounded };

/// maximize objective . x  subject to row constraints and variable bounds.
/// Bounds default to [0, +inf); pass std::nullopt for an unbounded side.
/// All data is exact-rational; the solver never touches floating point.
struct LinearProgram {
  struct Row {
    std::vector<Rational> coeffs;  // one per variable
    RowSense sense = RowSense::LessEq;
    Rational rhs = 0;
  };

  size_t num_vars = 0;
  std::vector<Rational> objective;                // one per variable
  std::vector<Row> rows;
  std::vector<std::optional<Rational>> lower;     // default 0
  std::vector<std::optional<Rational>> upper;     // default +inf

  /// Append a variable, returning its index.
  size_t add_variable(Rational objective_coeff = 0,
                      std::optional<Rational> lo = Rational(0),
                      std::optional<Rational> hi = std::nullopt);

  void add_row(std::vector<Rational> coeffs, RowSense sense, Rational rhs);
};

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  std::vector<Rational> x;      // variable values; empty unless Optimal
  Rational objective_value = 0; // defined only when Optimal
};

/// Exact two-phase dense-tableau simplex with Bland's anti-cycling rule.
/// Deterministic: identical input yields the identical optimal vertex.
LpSolution lp_solve(const LinearProgram& lp);

}  // namespace fairslice
