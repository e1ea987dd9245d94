#include "fairslice/monotonicity.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace fairslice {

MonotonicityReport rm_experiment(const Cake& cake, const std::vector<Slice>& extra,
                                 const Rule& rule, double tol) {
  MonotonicityReport rep;
  rep.experiment = "resource-monotonicity";
  rep.rule = rule_name(rule);
  rep.tolerance = tol;

  const SolveResult before = solve_rule(cake, rule);
  const SolveResult after = solve_rule(enlarge(cake, extra), rule);
  rep.before_absolute = before.utility.absolute;
  rep.after_absolute = after.utility.absolute;

  const Rational rtol = rational_from_double(tol);
  for (size_t i = 0; i < cake.num_agents(); ++i) {
    // Slack scales with the agent's stake in the original cake so a single
    // tolerance works across differently sized valuations.
    if (rep.after_absolute[i] < rep.before_absolute[i] - rtol * cake.total_value(i))
      rep.losers.push_back(i);
  }
  rep.pass = rep.losers.empty();
  if (rep.pass) {
    rep.detail = "no agent lost absolute utility when the cake grew";
  } else {
    const size_t w = rep.losers.front();
    rep.detail = "agent '" + cake.agent_name(w) + "' fell from " +
                 format_rational(rep.before_absolute[w]) + " to " +
                 format_rational(rep.after_absolute[w]) + " when the cake grew";
  }
  return rep;
}

MonotonicityReport pm_experiment(const Cake& cake, size_t leaving_agent, const Rule& rule,
                                 double tol) {
  MonotonicityReport rep;
  rep.experiment = "population-monotonicity";
  rep.rule = rule_name(rule);
  rep.tolerance = tol;
  rep.removed_agent = leaving_agent;

  const SolveResult before = solve_rule(cake, rule);
  const ReducedCake reduced = remove_agent(cake, leaving_agent);
  const SolveResult after = solve_rule(reduced.cake, rule);
  rep.dropped_slices = reduced.dropped_slices;
  rep.before_absolute = before.utility.absolute;
  rep.after_absolute.assign(cake.num_agents(), Rational(0));
  for (size_t i = 0, r = 0; i < cake.num_agents(); ++i) {
    if (i == leaving_agent) continue;
    rep.after_absolute[i] = after.utility.absolute[r++];
  }

  const Rational rtol = rational_from_double(tol);
  for (size_t i = 0; i < cake.num_agents(); ++i) {
    if (i == leaving_agent) continue;
    if (rep.after_absolute[i] < rep.before_absolute[i] - rtol * cake.total_value(i))
      rep.losers.push_back(i);
  }
  rep.pass = rep.losers.empty();
  if (rep.pass) {
    rep.detail = "no remaining agent lost after '" + cake.agent_name(leaving_agent) + "' left";
  } else {
    const size_t w = rep.losers.front();
    rep.detail = "agent '" + cake.agent_name(w) + "' fell from " +
                 format_rational(rep.before_absolute[w]) + " to " +
                 format_rational(rep.after_absolute[w]) + " after '" +
                 cake.agent_name(leaving_agent) + "' left";
  }
  return rep;
}

SolveResult cut_and_choose(const Cake& cake) {
  if (cake.num_agents() != 2)
    throw std::invalid_argument("cut-and-choose needs exactly two agents, got " +
                                std::to_string(cake.num_agents()));
  const size_t m = cake.num_slices();
  const Rational half = cake.total_value(0) / 2;

  // The cutter (first agent) marks the leftmost point where the cake's value
  // to them splits in half. Walking left to right, that is the first slice
  // where the running total reaches `half`, part-way through it.
  size_t cut_slice = 0;
  Rational cut_fraction = 0;
  Rational acc = 0;
  for (size_t j = 0; j < m; ++j) {
    const Rational& v = cake.slice_value(0, j);
    if (v > 0 && acc + v >= half) {
      cut_slice = j;
      cut_fraction = (half - acc) / v;
      break;
    }
    acc += v;
  }

  std::vector<Rational> left(m, Rational(0));
  for (size_t j = 0; j < cut_slice; ++j) left[j] = 1;
  left[cut_slice] = cut_fraction;

  Rational chooser_left = 0;
  for (size_t j = 0; j < m; ++j) chooser_left += left[j] * cake.slice_value(1, j);
  const bool takes_left = chooser_left >= cake.total_value(1) - chooser_left;

  std::vector<std::vector<Rational>> fractions(2, std::vector<Rational>(m));
  for (size_t j = 0; j < m; ++j) {
    fractions[1][j] = takes_left ? left[j] : Rational(1) - left[j];
    fractions[0][j] = Rational(1) - fractions[1][j];
  }

  SolveResult result{Allocation(cake, std::move(fractions)), {}, std::nullopt, {}};
  result.utility = utilities(cake, result.allocation);
  result.diagnostics.iterations = 1;
  result.diagnostics.exact = true;
  result.diagnostics.notes = "'" + cake.agent_name(0) + "' cuts at " +
                             format_rational(cut_fraction) + " of slice " +
                             std::to_string(cut_slice + 1) + "; '" + cake.agent_name(1) +
                             "' takes the " + (takes_left ? "left" : "right") + " piece";
  return result;
}

SolveResult solve_rule(const Cake& cake, const Rule& rule) {
  if (rule.kind == RuleKind::CutAndChoose) return cut_and_choose(cake);
  return solve(cake, rule);
}

// --- Fuzzing -----------------------------------------------------------------

namespace {

// Fixed mixing function so trial streams are decorrelated but reproducible
// across standard libraries.
uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

size_t draw(std::mt19937_64& rng, size_t lo, size_t hi) {  // inclusive bounds
  return lo + static_cast<size_t>(rng() % (hi - lo + 1));
}

std::vector<Slice> random_slices(std::mt19937_64& rng, size_t count, size_t num_agents,
                                 size_t max_density) {
  std::vector<Slice> slices(count);
  for (auto& s : slices) {
    s.length = Rational(static_cast<long>(draw(rng, 1, 3)));
    s.densities.resize(num_agents);
    for (auto& d : s.densities) d = Rational(static_cast<long>(draw(rng, 0, max_density)));
  }
  return slices;
}

// A slice nobody values violates the cake invariant; hand each such slice to
// one agent, round-robin so the repair itself is deterministic.
void repair_worthless_slices(std::vector<Slice>& slices, size_t num_agents) {
  for (size_t j = 0; j < slices.size(); ++j) {
    bool valued = false;
    for (const Rational& d : slices[j].densities)
      if (d > 0) {
        valued = true;
        break;
      }
    if (!valued) slices[j].densities[j % num_agents] = 1;
  }
}

Cake random_cake(std::mt19937_64& rng, const FuzzConfig& cfg, bool force_two_agents) {
  const size_t n = force_two_agents ? 2 : draw(rng, 2, std::max<size_t>(2, cfg.max_agents));
  const size_t m = draw(rng, 1, std::max<size_t>(1, cfg.max_slices));
  std::vector<Slice> slices = random_slices(rng, m, n, cfg.max_density);
  // An agent valuing nothing violates the cake invariant; give them a slice.
  for (size_t i = 0; i < n; ++i) {
    bool positive = false;
    for (const Slice& s : slices)
      if (s.densities[i] > 0) {
        positive = true;
        break;
      }
    if (!positive) slices[i % m].densities[i] = 1;
  }
  repair_worthless_slices(slices, n);
  std::vector<std::string> names(n);
  for (size_t i = 0; i < n; ++i) names[i] = "a" + std::to_string(i + 1);
  return Cake(std::move(names), std::move(slices));
}

struct CheckInstance {
  Cake cake;
  std::vector<Slice> extra;             // rm
  std::optional<size_t> removed_agent;  // pm
};

// Re-run one named check against an instance; empty when it passes. A solver
// breakdown counts as a failure: the sweep's job is to certify the rule.
std::optional<std::string> violation_detail(const Rule& rule, const std::string& check,
                                            const CheckInstance& inst, double tol) {
  try {
    if (check == "rm") {
      MonotonicityReport rep = rm_experiment(inst.cake, inst.extra, rule, tol);
      if (!rep.pass) return rep.detail;
    } else if (check == "pm") {
      MonotonicityReport rep = pm_experiment(inst.cake, *inst.removed_agent, rule, tol);
      if (!rep.pass) return rep.detail;
    } else if (check == "solve") {
      solve_rule(inst.cake, rule);
    } else {
      const SolveResult res = solve_rule(inst.cake, rule);
      const AxiomReport rep = check == "prop"
                                  ? check_proportional(inst.cake, res.allocation, tol)
                                  : check_envy_free(inst.cake, res.allocation, tol);
      if (!rep.pass) return rep.detail;
    }
  } catch (const SolverError& e) {
    return std::string("solver error: ") + e.what();
  }
  return std::nullopt;
}

// Greedily drop slices, enlargement slices, then agents while the violation
// persists, so the recorded witness is close to minimal. Drops that would
// produce an invalid cake are skipped.
void shrink(const Rule& rule, const std::string& check, CheckInstance& inst,
            std::string& detail, double tol) {
  auto consider = [&](CheckInstance cand) {
    if (auto d = violation_detail(rule, check, cand, tol)) {
      inst = std::move(cand);
      detail = *d;
      return true;
    }
    return false;
  };

  bool improved = true;
  while (improved) {
    improved = false;

    for (size_t j = 0; j < inst.cake.num_slices() && !improved; ++j) {
      if (inst.cake.num_slices() == 1) break;
      std::vector<Slice> slices;
      for (size_t q = 0; q < inst.cake.num_slices(); ++q)
        if (q != j) slices.push_back(inst.cake.slice(q));
      try {
        improved = consider({Cake(inst.cake.agents(), std::move(slices)), inst.extra,
                             inst.removed_agent});
      } catch (const std::invalid_argument&) {
      }
    }

    for (size_t j = 0; j < inst.extra.size() && !improved; ++j) {
      if (inst.extra.size() == 1) break;  // the experiment needs an enlargement
      std::vector<Slice> extra;
      for (size_t q = 0; q < inst.extra.size(); ++q)
        if (q != j) extra.push_back(inst.extra[q]);
      try {
        improved = consider({inst.cake, std::move(extra), inst.removed_agent});
      } catch (const std::invalid_argument&) {
      }
    }

    for (size_t i = 0; i < inst.cake.num_agents() && !improved; ++i) {
      if (inst.cake.num_agents() <= 2) break;
      if (inst.removed_agent && *inst.removed_agent == i) continue;
      std::vector<std::string> names;
      for (size_t q = 0; q < inst.cake.num_agents(); ++q)
        if (q != i) names.push_back(inst.cake.agent_name(q));
      auto strip = [i](const std::vector<Slice>& in) {
        std::vector<Slice> out;
        for (const Slice& s : in) {
          Slice t{s.length, {}};
          for (size_t q = 0; q < s.densities.size(); ++q)
            if (q != i) t.densities.push_back(s.densities[q]);
          bool valued = false;
          for (const Rational& d : t.densities)
            if (d > 0) {
              valued = true;
              break;
            }
          if (valued) out.push_back(std::move(t));
        }
        return out;
      };
      std::vector<Slice> slices = strip(inst.cake.slices());
      std::vector<Slice> extra = strip(inst.extra);
      if (slices.empty()) continue;
      if (!inst.extra.empty() && extra.empty()) continue;
      std::optional<size_t> removed = inst.removed_agent;
      if (removed && *removed > i) removed = *removed - 1;
      try {
        improved = consider({Cake(std::move(names), std::move(slices)), std::move(extra),
                             removed});
      } catch (const std::invalid_argument&) {
      }
    }
  }
}

}  // namespace

FuzzReport fuzz(const Rule& rule, const FuzzConfig& config) {
  FuzzReport report;
  report.trials = config.trials;
  const bool two_agent_rule = rule.kind == RuleKind::CutAndChoose;

  for (size_t trial = 0; trial < config.trials; ++trial) {
    std::mt19937_64 rng(splitmix64(config.seed + 0x9e3779b97f4a7c15ULL * (trial + 1)));
    const Cake cake = random_cake(rng, config, two_agent_rule);
    // Draw the enlargement and the leaving agent up front so the stream stays
    // identical whichever checks are enabled.
    std::vector<Slice> extra;
    if (config.max_extra_slices > 0) {
      extra = random_slices(rng, draw(rng, 1, config.max_extra_slices), cake.num_agents(),
                            config.max_density);
      repair_worthless_slices(extra, cake.num_agents());
    }
    const size_t leaving = draw(rng, 0, cake.num_agents() - 1);

    auto record = [&](const std::string& check, std::string detail, CheckInstance inst) {
      // Only the first witness of each kind is shrunk; the rest are counted.
      if (report.failure_counts[check]++ == 0) shrink(rule, check, inst, detail, config.tol);
      report.failures.push_back(FuzzFailure{trial, check, std::move(detail),
                                            std::move(inst.cake), std::move(inst.extra),
                                            inst.removed_agent});
    };

    if (config.check_prop || config.check_ef) {
      try {
        const SolveResult res = solve_rule(cake, rule);
        if (config.check_prop) {
          ++report.checks_run["prop"];
          const AxiomReport rep = check_proportional(cake, res.allocation, config.tol);
          if (!rep.pass) record("prop", rep.detail, {cake, {}, std::nullopt});
        }
        if (config.check_ef) {
          ++report.checks_run["ef"];
          const AxiomReport rep = check_envy_free(cake, res.allocation, config.tol);
          if (!rep.pass) record("ef", rep.detail, {cake, {}, std::nullopt});
        }
      } catch (const SolverError& e) {
        if (config.check_prop) ++report.checks_run["prop"];
        if (config.check_ef) ++report.checks_run["ef"];
        record("solve", std::string("solver error: ") + e.what(), {cake, {}, std::nullopt});
      }
    }

    if (config.check_rm && !extra.empty()) {
      ++report.checks_run["rm"];
      if (auto d = violation_detail(rule, "rm", {cake, extra, std::nullopt}, config.tol))
        record("rm", *d, {cake, extra, std::nullopt});
    }

    if (config.check_pm && (cake.num_agents() > 2 || !two_agent_rule)) {
      ++report.checks_run["pm"];
      if (auto d = violation_detail(rule, "pm", {cake, {}, leaving}, config.tol))
        record("pm", *d, {cake, {}, leaving});
    }
  }
  return report;
}

}  // namespace fairslice
