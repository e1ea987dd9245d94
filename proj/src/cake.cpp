#include "fairslice/cake.hpp"

#include <stdexcept>

namespace fairslice {

namespace {

std::string ordinal(size_t j) { return std::to_string(j); }

}  // namespace

Cake::Cake(std::vector<std::string> agents, std::vector<Slice> slices)
    : agents_(std::move(agents)), slices_(std::move(slices)) {
  if (agents_.empty()) throw std::invalid_argument("cake: needs at least one agent");
  if (slices_.empty()) throw std::invalid_argument("cake: needs at least one slice");
  for (size_t a = 0; a < agents_.size(); ++a)
    for (size_t b = a + 1; b < agents_.size(); ++b)
      if (agents_[a] == agents_[b])
        throw std::invalid_argument("cake: duplicate agent name '" + agents_[a] + "'");

  const size_t n = agents_.size();
  for (size_t j = 0; j < slices_.size(); ++j) {
    const Slice& s = slices_[j];
    if (s.length <= 0)
      throw std::invalid_argument("cake: slice " + ordinal(j) + " has non-positive length");
    if (s.densities.size() != n)
      throw std::invalid_argument("cake: slice " + ordinal(j) + " has " +
                                  std::to_string(s.densities.size()) + " densities for " +
                                  std::to_string(n) + " agents");
    bool valued = false;
    for (size_t i = 0; i < n; ++i) {
      if (s.densities[i] < 0)
        throw std::invalid_argument("cake: negative density in slice " + ordinal(j));
      if (s.densities[i] > 0) valued = true;
    }
    if (!valued)
      throw std::invalid_argument("cake: slice " + ordinal(j) + " is worthless to every agent");
  }

  slice_values_.assign(n, std::vector<Rational>(slices_.size()));
  totals_.assign(n, Rational(0));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < slices_.size(); ++j) {
      slice_values_[i][j] = slices_[j].densities[i] * slices_[j].length;
      totals_[i] += slice_values_[i][j];
    }
    if (totals_[i] == 0)
      throw std::invalid_argument("cake: agent '" + agents_[i] + "' values the whole cake at 0");
  }
}

size_t Cake::agent_index(const std::string& name) const {
  for (size_t i = 0; i < agents_.size(); ++i)
    if (agents_[i] == name) return i;
  throw std::invalid_argument("cake: unknown agent '" + name + "'");
}

Allocation::Allocation(const Cake& cake, std::vector<std::vector<Rational>> fractions)
    : fractions_(std::move(fractions)) {
  const size_t n = cake.num_agents();
  const size_t m = cake.num_slices();
  if (fractions_.size() != n)
    throw std::invalid_argument("allocation: expected one fraction row per agent");
  for (const auto& row : fractions_)
    if (row.size() != m)
      throw std::invalid_argument("allocation: expected one fraction per slice");
  for (size_t j = 0; j < m; ++j) {
    Rational col = 0;
    for (size_t i = 0; i < n; ++i) {
      const Rational& f = fractions_[i][j];
      if (f < 0 || f > 1)
        throw std::invalid_argument("allocation: fraction outside [0,1] in slice " +
                                    std::to_string(j));
      col += f;
    }
    if (col != 1)
      throw std::invalid_argument("allocation: slice " + std::to_string(j) +
                                  " fractions sum to " + format_rational(col) + ", not 1");
  }
}

Allocation Allocation::whole_cake_to(const Cake& cake, size_t agent) {
  std::vector<std::vector<Rational>> f(cake.num_agents(),
                                       std::vector<Rational>(cake.num_slices(), Rational(0)));
  for (size_t j = 0; j < cake.num_slices(); ++j) f.at(agent)[j] = 1;
  return Allocation(cake, std::move(f));
}

Rational absolute_utility(const Cake& cake, const Allocation& alloc, size_t agent) {
  Rational u = 0;
  for (size_t j = 0; j < cake.num_slices(); ++j)
    u += alloc.fraction(agent, j) * cake.slice_value(agent, j);
  return u;
}

Rational relative_utility(const Cake& cake, const Allocation& alloc, size_t agent) {
  return absolute_utility(cake, alloc, agent) / cake.total_value(agent);
}

UtilityVector utilities(const Cake& cake, const Allocation& alloc) {
  UtilityVector u;
  u.absolute.reserve(cake.num_agents());
  u.relative.reserve(cake.num_agents());
  for (size_t i = 0; i < cake.num_agents(); ++i) {
    u.absolute.push_back(absolute_utility(cake, alloc, i));
    u.relative.push_back(u.absolute.back() / cake.total_value(i));
  }
  return u;
}

Rational value_of_piece(const Cake& cake, const Allocation& alloc, size_t observer,
                        size_t holder) {
  Rational v = 0;
  for (size_t j = 0; j < cake.num_slices(); ++j)
    v += alloc.fraction(holder, j) * cake.slice_value(observer, j);
  return v;
}

Cake enlarge(const Cake& cake, const std::vector<Slice>& extra) {
  if (extra.empty()) throw std::invalid_argument("enlarge: no slices to add");
  std::vector<Slice> slices = cake.slices();
  slices.insert(slices.end(), extra.begin(), extra.end());
  return Cake(cake.agents(), std::move(slices));
}

ReducedCake remove_agent(const Cake& cake, size_t agent) {
  if (agent >= cake.num_agents()) throw std::invalid_argument("remove_agent: no such agent");
  if (cake.num_agents() == 1)
    throw std::invalid_argument("remove_agent: cannot remove the last agent");

  std::vector<std::string> agents;
  for (size_t i = 0; i < cake.num_agents(); ++i)
    if (i != agent) agents.push_back(cake.agent_name(i));

  std::vector<Slice> slices;
  std::vector<size_t> kept, dropped;
  for (size_t j = 0; j < cake.num_slices(); ++j) {
    const Slice& s = cake.slice(j);
    Slice reduced{s.length, {}};
    bool valued = false;
    for (size_t i = 0; i < cake.num_agents(); ++i) {
      if (i == agent) continue;
      reduced.densities.push_back(s.densities[i]);
      if (s.densities[i] > 0) valued = true;
    }
    if (valued) {
      slices.push_back(std::move(reduced));
      kept.push_back(j);
    } else {
      dropped.push_back(j);
    }
  }
  // Every remaining agent still has positive total value (their value lived on
  // kept slices), so the reduced cake always satisfies the invariants.
  return ReducedCake{Cake(std::move(agents), std::move(slices)), std::move(kept),
                     std::move(dropped)};
}

}  // namespace fairslice
