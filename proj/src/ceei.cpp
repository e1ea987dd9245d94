#include "fairslice/ceei.hpp"

#include <algorithm>
#include <stdexcept>

#include "fairslice/welfare.hpp"

namespace fairslice {

Rational PriceVector::slice_price(const Cake& cake, size_t j) const {
  return density.at(j) * cake.slice(j).length;
}

Rational PriceVector::total(const Cake& cake) const {
  Rational t = 0;
  for (size_t j = 0; j < density.size(); ++j) t += slice_price(cake, j);
  return t;
}

PriceVector standard_price_measure(const Cake& cake, const Allocation& alloc) {
  const size_t n = cake.num_agents();
  const size_t m = cake.num_slices();
  std::vector<Rational> util(n);
  for (size_t i = 0; i < n; ++i) {
    util[i] = absolute_utility(cake, alloc, i);
    if (util[i] == 0)
      throw std::invalid_argument(
          "standard_price_measure: agent '" + cake.agent_name(i) +
          "' holds zero value; the measure is undefined");
  }

  // On agent i's part of slice j the rate is density_ij / util_i, making the
  // agent's own piece cost exactly 1. The per-slice figure mixes the
  // holders' rates by held measure.
  std::vector<std::vector<Rational>> sub(n, std::vector<Rational>(m, Rational(0)));
  std::vector<Rational> per_slice(m, Rational(0));
  bool heterogeneous = false;
  for (size_t j = 0; j < m; ++j) {
    std::optional<Rational> first_rate;
    for (size_t i = 0; i < n; ++i) {
      if (alloc.fraction(i, j) == 0) continue;
      sub[i][j] = cake.slice(j).densities[i] / util[i];
      per_slice[j] += alloc.fraction(i, j) * sub[i][j];
      if (!first_rate)
        first_rate = sub[i][j];
      else if (*first_rate != sub[i][j])
        heterogeneous = true;
    }
  }

  PriceVector p;
  p.density = std::move(per_slice);
  if (heterogeneous) p.sub_density = std::move(sub);
  return p;
}

namespace {

struct PricedPortion {
  Rational measure;        // length of the portion
  Rational price_density;  // price per unit length
  Rational value_density;  // evaluating agent's value per unit length
};

// Best value agent can buy with budget 1: exact fractional knapsack over the
// priced portions (free valuable portions first, then by value per money).
Rational best_affordable_value(std::vector<PricedPortion> portions) {
  Rational value = 0;
  Rational budget = 1;
  std::stable_sort(portions.begin(), portions.end(),
                   [](const PricedPortion& a, const PricedPortion& b) {
                     const bool a_free = a.price_density == 0;
                     const bool b_free = b.price_density == 0;
                     if (a_free != b_free) return a_free;
                     if (a_free) return false;
                     // a.value/a.price > b.value/b.price, cross-multiplied.
                     return a.value_density * b.price_density >
                            b.value_density * a.price_density;
                   });
  for (const auto& p : portions) {
    if (p.price_density == 0) {
      value += p.value_density * p.measure;
      continue;
    }
    if (budget == 0) break;
    if (p.value_density == 0) continue;
    const Rational cost = p.price_density * p.measure;
    if (cost <= budget) {
      value += p.value_density * p.measure;
      budget -= cost;
    } else {
      value += p.value_density * (budget / p.price_density);
      budget = 0;
    }
  }
  return value;
}

// The portions visible to one evaluating agent: per (holder, slice) when a
// sub-price refinement is present, else one portion per slice.
std::vector<PricedPortion> portions_for(const Cake& cake, const Allocation& alloc,
                                        const PriceVector& prices, size_t evaluator) {
  std::vector<PricedPortion> out;
  const size_t n = cake.num_agents();
  for (size_t j = 0; j < cake.num_slices(); ++j) {
    const Rational& d = cake.slice(j).densities[evaluator];
    if (prices.sub_density) {
      for (size_t h = 0; h < n; ++h) {
        const Rational& f = alloc.fraction(h, j);
        if (f == 0) continue;
        out.push_back({f * cake.slice(j).length, (*prices.sub_density)[h][j], d});
      }
    } else {
      out.push_back({cake.slice(j).length, prices.density[j], d});
    }
  }
  return out;
}

Rational spend_of(const Cake& cake, const Allocation& alloc, const PriceVector& prices,
                  size_t agent) {
  Rational s = 0;
  for (size_t j = 0; j < cake.num_slices(); ++j) {
    const Rational& f = alloc.fraction(agent, j);
    if (f == 0) continue;
    const Rational& rate =
        prices.sub_density ? (*prices.sub_density)[agent][j] : prices.density[j];
    s += f * cake.slice(j).length * rate;
  }
  return s;
}

void check_price_shape(const Cake& cake, const PriceVector& prices) {
  if (prices.density.size() != cake.num_slices())
    throw std::invalid_argument("price vector: one density per slice required");
  for (const auto& d : prices.density)
    if (d < 0) throw std::invalid_argument("price vector: negative price density");
}

}  // namespace

AxiomReport verify_ceei(const Cake& cake, const Allocation& alloc, const PriceVector& prices,
                        double tol) {
  check_price_shape(cake, prices);
  const Rational rtol = rational_from_double(tol);
  AxiomReport rep;
  rep.axiom = "ceei";
  rep.tolerance = tol;

  for (size_t i = 0; i < cake.num_agents(); ++i) {
    const Rational spend = spend_of(cake, alloc, prices, i);
    if (abs(spend - 1) > rtol) {
      rep.pass = false;
      rep.witness_agent = i;
      rep.detail = "equal-incomes failure: agent '" + cake.agent_name(i) + "' pays " +
                   format_rational(spend) + " instead of 1";
      return rep;
    }
  }
  for (size_t i = 0; i < cake.num_agents(); ++i) {
    const Rational mine = absolute_utility(cake, alloc, i);
    const Rational best = best_affordable_value(portions_for(cake, alloc, prices, i));
    // Compare in relative units so tol is scale-free.
    if (best / cake.total_value(i) > mine / cake.total_value(i) + rtol) {
      rep.pass = false;
      rep.witness_agent = i;
      rep.detail = "competitive failure: agent '" + cake.agent_name(i) +
                   "' can afford value " + format_rational(best) + " but holds " +
                   format_rational(mine);
      return rep;
    }
  }
  rep.detail = "every piece costs 1 and no agent can afford a better piece";
  return rep;
}

AxiomReport verify_sceei(const Cake& cake, const Allocation& alloc, const PriceVector& prices,
                         double tol) {
  check_price_shape(cake, prices);
  const Rational rtol = rational_from_double(tol);
  AxiomReport rep;
  rep.axiom = "sceei";
  rep.tolerance = tol;

  for (size_t j = 0; j < cake.num_slices(); ++j) {
    if (prices.density[j] <= 0) {
      rep.pass = false;
      rep.detail = "positivity failure: slice " + std::to_string(j) + " has price 0";
      return rep;
    }
    if (prices.sub_density) {
      for (size_t h = 0; h < cake.num_agents(); ++h) {
        if (alloc.fraction(h, j) > 0 && (*prices.sub_density)[h][j] <= 0) {
          rep.pass = false;
          rep.witness_pair = std::make_pair(h, j);
          rep.detail = "positivity failure: the portion of slice " + std::to_string(j) +
                       " held by '" + cake.agent_name(h) + "' is priced 0";
          return rep;
        }
      }
    }
  }
  for (size_t i = 0; i < cake.num_agents(); ++i) {
    const Rational spend = spend_of(cake, alloc, prices, i);
    if (abs(spend - 1) > rtol) {
      rep.pass = false;
      rep.witness_agent = i;
      rep.detail = "equal-incomes failure: agent '" + cake.agent_name(i) + "' pays " +
                   format_rational(spend) + " instead of 1";
      return rep;
    }
  }

  // Strict competitiveness: every held portion must maximize value per money
  // over the whole cake (the cheapest available rate on each slice).
  for (size_t i = 0; i < cake.num_agents(); ++i) {
    Rational best_num = 0, best_den = 1;  // best ratio as a fraction
    for (size_t j = 0; j < cake.num_slices(); ++j) {
      Rational rate = prices.density[j];
      if (prices.sub_density)
        for (size_t h = 0; h < cake.num_agents(); ++h)
          if (alloc.fraction(h, j) > 0 && (*prices.sub_density)[h][j] > 0)
            rate = std::min(rate, (*prices.sub_density)[h][j]);
      const Rational& d = cake.slice(j).densities[i];
      if (d * best_den > best_num * rate) {
        best_num = d;
        best_den = rate;
      }
    }
    for (size_t j = 0; j < cake.num_slices(); ++j) {
      if (alloc.fraction(i, j) == 0) continue;
      const Rational rate =
          prices.sub_density ? (*prices.sub_density)[i][j] : prices.density[j];
      const Rational& d = cake.slice(j).densities[i];
      // d/rate >= best * (1 - tol), cross-multiplied to stay exact.
      if (d * best_den < best_num * rate * (1 - rtol)) {
        rep.pass = false;
        rep.witness_agent = i;
        rep.witness_pair = std::make_pair(i, j);
        rep.detail = "agent '" + cake.agent_name(i) + "' holds part of slice " +
                     std::to_string(j) + " but gets better value per money elsewhere";
        return rep;
      }
    }
  }
  rep.detail = "positive prices, pieces cost 1, every held portion maximizes value per money";
  return rep;
}

AxiomReport nash_sceei_equivalence_check(const Cake& cake, double tol) {
  SolveResult r = solve_nash(cake, tol);
  const PriceVector standard = standard_price_measure(cake, r.allocation);
  AxiomReport rep = verify_sceei(cake, r.allocation, standard, tol);
  rep.axiom = "nash-sceei-equivalence";
  if (!rep.pass) {
    rep.detail = "product-optimal division is not an s-CEEI under its standard prices: " +
                 rep.detail;
    return rep;
  }
  if (r.prices) {
    const Rational rtol = rational_from_double(tol);
    for (size_t j = 0; j < cake.num_slices(); ++j) {
      const Rational diff = abs(r.prices->density[j] - standard.density[j]);
      if (diff > rtol * (1 + standard.density[j])) {
        rep.pass = false;
        rep.detail = "solver price certificate disagrees with the standard measure on slice " +
                     std::to_string(j);
        return rep;
      }
    }
  }
  rep.detail = "product-optimal division verifies as s-CEEI under its standard price measure";
  return rep;
}

}  // namespace fairslice
