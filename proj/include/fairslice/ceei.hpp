#pragma once

#include <optional>
#include <vector>

#include "fairslice/axioms.hpp"
#include "fairslice/cake.hpp"

namespace fairslice {

/// A price system over the cake: `density[j]` is the price per unit length
/// of slice j. When a split slice carries different rates for different
/// holders (as the standard price measure of a non-equilibrium allocation
/// can), `sub_density[i][j]` refines the per-slice figure; entries are only
/// meaningful where agent i holds part of slice j.
struct PriceVector {
  std::vector<Rational> density;
  std::optional<std::vector<std::vector<Rational>>> sub_density;

  /// Price of the whole of slice j (density * length).
  Rational slice_price(const Cake& cake, size_t j) const;
  /// Total price of the cake; equals the number of agents for any price
  /// measure supporting an equal-incomes equilibrium.
  Rational total(const Cake& cake) const;
};

/// The price measure induced by an allocation: on the part of slice j held
/// by agent i the price density is density_ij / (i's absolute utility), so
/// every agent's own piece costs exactly 1. Requires every agent to hold
/// positive value. The per-agent refinement is retained when holders of one
/// slice imply different rates.
PriceVector standard_price_measure(const Cake& cake, const Allocation& alloc);

/// Competitive equilibrium from equal incomes: every agent's piece costs 1
/// (EI) and no agent can afford a piece they value more (CE, decided by an
/// exact fractional-knapsack argmax over the priced cake). tol = 0 means
/// exact rational comparison.
AxiomReport verify_ceei(const Cake& cake, const Allocation& alloc, const PriceVector& prices,
                        double tol = 0);

/// The strict refinement: additionally every slice has positive price and
/// every held portion maximizes value-per-price among all slices, which
/// forces (weak) Pareto optimality of the outcome.
AxiomReport verify_sceei(const Cake& cake, const Allocation& alloc, const PriceVector& prices,
                         double tol = 0);

/// Dual-route consistency check: the product-maximizing allocation, priced
/// by its standard measure, must verify as an s-CEEI, and the solver's own
/// price certificate must agree with the standard measure.
AxiomReport nash_sceei_equivalence_check(const Cake& cake, double tol = 1e-6);

}  // namespace fairslice
