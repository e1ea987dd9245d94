#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "fairslice/axioms.hpp"
#include "fairslice/welfare.hpp"
#include "support.hpp"

using namespace fairslice;
using testsupport::grid_cake;
using testsupport::names;
using testsupport::Q;
using testsupport::sl;

TEST_CASE("classify_welfare keys the rule's properties on the exponent") {
  const WelfareClassification convex = classify_welfare(2);
  CHECK(convex.family == "convex");
  CHECK(convex.pareto_optimal);
  CHECK(!convex.essentially_single_valued);
  CHECK(!convex.proportional_absolute);
  CHECK(!convex.proportional_relative);
  CHECK(!convex.resource_monotone_absolute);
  CHECK(!convex.resource_monotone_relative);
  CHECK(!convex.population_monotone_absolute);
  CHECK(!convex.population_monotone_relative);

  const WelfareClassification util = classify_welfare(1);
  CHECK(util.family == "utilitarian");
  CHECK(util.pareto_optimal);
  CHECK(!util.essentially_single_valued);
  CHECK(util.resource_monotone_absolute);
  CHECK(!util.resource_monotone_relative);
  CHECK(util.population_monotone_absolute);
  CHECK(util.population_monotone_relative);

  const WelfareClassification conc = classify_welfare(0.5);
  CHECK(conc.family == "strictly-concave");
  CHECK(conc.essentially_single_valued);
  CHECK(!conc.proportional_absolute);
  CHECK(!conc.proportional_relative);
  CHECK(conc.resource_monotone_absolute);
  CHECK(!conc.resource_monotone_relative);
  CHECK(conc.population_monotone_absolute);
  CHECK(conc.population_monotone_relative);

  const WelfareClassification nash = classify_welfare(0);
  CHECK(nash.family == "nash");
  CHECK(nash.essentially_single_valued);
  CHECK(nash.proportional_absolute);
  CHECK(nash.proportional_relative);
  CHECK(nash.resource_monotone_absolute);
  CHECK(nash.resource_monotone_relative);
  CHECK(nash.population_monotone_absolute);
  CHECK(nash.population_monotone_relative);

  const WelfareClassification hyper = classify_welfare(-1);
  CHECK(hyper.family == "hyper-concave");
  CHECK(hyper.essentially_single_valued);
  CHECK(!hyper.proportional_absolute);
  CHECK(hyper.proportional_relative);
  CHECK(hyper.resource_monotone_absolute);
  CHECK(!hyper.resource_monotone_relative);
  CHECK(hyper.population_monotone_absolute);
  CHECK(hyper.population_monotone_relative);
}

TEST_CASE("utilitarian rules assign each slice to a best-density agent") {
  // Absolute and relative gauges disagree: a1's total dwarfs a2's.
  Cake cake = grid_cake({{"10", "0"}, {"2", "1"}});
  const SolveResult abs = solve_utilitarian_absolute(cake);
  CHECK(abs.utility.absolute == std::vector<Rational>{Q(12), Q(0)});
  const SolveResult rel = solve_utilitarian_relative(cake);
  CHECK(rel.utility.absolute == std::vector<Rational>{Q(10), Q(1)});
  CHECK(abs.diagnostics.exact);

  // Ties go to the lowest agent index, deterministically.
  Cake tied = grid_cake({{"1", "1"}});
  CHECK(solve_utilitarian_absolute(tied).utility.absolute ==
        std::vector<Rational>{Q(1), Q(0)});
}

TEST_CASE("p=2 welfare maximization enumerates whole-slice assignments exactly") {
  Cake cake = grid_cake({{"1/4", "0"}, {"0", "1/4"}, {"3/10", "1/4"}});
  const SolveResult res = solve_wp_absolute(cake, 2);
  CHECK(res.diagnostics.exact);
  CHECK(res.utility.absolute[0] == Q(11, 20));
  CHECK(res.utility.absolute[1] == Q(1, 4));

  // Enlarged by a slice only the second agent values, the optimum flips.
  Cake larger = enlarge(cake, {sl("1", {"0", "1/4"})});
  const SolveResult res2 = solve_wp_absolute(larger, 2);
  CHECK(res2.utility.absolute[0] == Q(1, 4));
  CHECK(res2.utility.absolute[1] == Q(3, 4));
}

TEST_CASE("p=1 welfare maximization is the utilitarian rule") {
  Cake cake = grid_cake({{"10", "0"}, {"2", "1"}, {"3", "7"}});
  const SolveResult viaWp = solve_wp_absolute(cake, 1);
  const SolveResult direct = solve_utilitarian_absolute(cake);
  CHECK(viaWp.utility.absolute == direct.utility.absolute);
}

TEST_CASE("p=1/2 relative maximization sacrifices proportionality") {
  Cake cake = grid_cake({{"1", "2/3"}, {"0", "1/3"}});
  const SolveResult res = solve_wp_relative(cake, 0.5, 1e-10);
  // The richer-by-density agent takes ~9/10 of the first slice.
  CHECK(to_double(res.allocation.fraction(0, 0)) == doctest::Approx(0.9).epsilon(1e-4));
  const AxiomReport prop = check_proportional(cake, res.allocation, 1e-6);
  CHECK(!prop.pass);
  REQUIRE(prop.witness_agent.has_value());
  CHECK(*prop.witness_agent == 1);
}

TEST_CASE("p=-1 relative maximization restores proportionality here") {
  Cake cake = grid_cake({{"1", "2/3"}, {"0", "1/3"}});
  const SolveResult res = solve_wp_relative(cake, -1);
  CHECK(check_proportional(cake, res.allocation, 1e-6).pass);
}

TEST_CASE("p=0 maximization agrees with the product-maximizing solver") {
  Cake cake = grid_cake({{"2", "1"}, {"2", "4"}, {"1", "1"}});
  const SolveResult viaWp = solve_wp_relative(cake, 0);
  const SolveResult nash = solve_nash(cake);
  CHECK(nash_product(viaWp.utility) ==
        doctest::Approx(nash_product(nash.utility)).epsilon(1e-5));
}

TEST_CASE("p>1 enumeration refuses oversized instances instead of guessing") {
  // 5 agents x 12 slices: 5^12 whole-slice assignments exceed the cap.
  std::vector<Slice> slices;
  for (int j = 0; j < 12; ++j)
    slices.push_back(sl("1", {"1", "1", "1", "1", "1"}));
  Cake cake(names(5), std::move(slices));
  CHECK_THROWS_AS(solve_wp_absolute(cake, 2), SolverError);
}

TEST_CASE("grid oracle finds known optima on tiny cakes") {
  // One slice, both agents value it: product x(1-x) peaks at 1/4.
  Cake one = grid_cake({{"1", "1"}});
  CHECK(nash_brute_oracle(one, 60) == doctest::Approx(0.25).epsilon(1e-12));

  // Slice 1 interests only a1 (dominance pre-pass); slice 2 best left whole
  // with a2: product (1/2)(1) = 1/2.
  Cake two = grid_cake({{"1", "0"}, {"1", "1"}});
  CHECK(nash_brute_oracle(two, 60) == doctest::Approx(0.5).epsilon(1e-12));

  CHECK_THROWS_AS(nash_brute_oracle(one, 0), std::invalid_argument);
}

TEST_CASE("grid oracle never exceeds and closely tracks the exact product") {
  Cake cake = grid_cake({{"2", "1"}, {"2", "4"}, {"1", "3"}});
  const double nash = nash_product(solve_nash(cake).utility);
  const double oracle = nash_brute_oracle(cake, 60);
  CHECK(oracle <= nash + 1e-9);   // grid points are feasible divisions
  CHECK(nash >= oracle - 1e-4);   // and the grid is fine enough to come close
}

TEST_CASE("rule names round-trip and dispatch") {
  for (const char* name : {"nash", "leximin-abs", "leximin-rel", "util-abs", "util-rel",
                           "wp-abs", "wp-rel", "cut-and-choose"}) {
    auto kind = parse_rule_kind(name);
    REQUIRE(kind.has_value());
    Rule rule;
    rule.kind = *kind;
    CHECK(rule_name(rule) == name);
  }
  CHECK(!parse_rule_kind("bogus"));

  Cake cake = grid_cake({{"1", "1"}});
  Rule cc;
  cc.kind = RuleKind::CutAndChoose;
  CHECK_THROWS_AS(solve(cake, cc), std::invalid_argument);

  Rule nash;  // defaults to the product-maximizing rule
  const SolveResult via = solve(cake, nash);
  CHECK(via.utility.relative[0] + via.utility.relative[1] == Q(1));
}
