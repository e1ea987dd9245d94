#include <vector>

#include "doctest.h"
#include "fairslice/axioms.hpp"
#include "fairslice/cake.hpp"
#include "fairslice/welfare.hpp"
#include "support.hpp"

using namespace fairslice;
using testsupport::grid_cake;
using testsupport::Q;

TEST_CASE("proportionality: everyone gets at least 1/n in their own eyes") {
  Cake cake = grid_cake({{"1", "1"}, {"3", "1"}});
  Allocation fair(cake, {{Q(1, 2), Q(1, 2)}, {Q(1, 2), Q(1, 2)}});
  CHECK(check_proportional(cake, fair).pass);

  Allocation hog = Allocation::whole_cake_to(cake, 0);
  const AxiomReport r = check_proportional(cake, hog);
  CHECK(!r.pass);
  REQUIRE(r.witness_agent.has_value());
  CHECK(*r.witness_agent == 1);
  CHECK(r.detail.find("a2") != std::string::npos);  // names the agent

  // A generous tolerance can wave the violation through.
  CHECK(check_proportional(cake, hog, 1.0).pass);
}

TEST_CASE("envy-freeness: nobody prefers another piece, witness in scan order") {
  Cake cake = grid_cake({{"1", "1"}, {"3", "1"}});
  // Equal split is envy-free (identical pieces).
  Allocation fair(cake, {{Q(1, 2), Q(1, 2)}, {Q(1, 2), Q(1, 2)}});
  CHECK(check_envy_free(cake, fair).pass);

  // First agent gets only slice 1, second gets the (to the first, dearer)
  // slice 2: the first envies the second.
  Allocation skew(cake, {{Q(1), Q(0)}, {Q(0), Q(1)}});
  const AxiomReport r = check_envy_free(cake, skew);
  CHECK(!r.pass);
  REQUIRE(r.witness_pair.has_value());
  CHECK(r.witness_pair->first == 0);
  CHECK(r.witness_pair->second == 1);
}

TEST_CASE("proportional but envious, envy-free but not proportional: independent") {
  // Three agents, one slice each mostly: PROP can hold while envy persists.
  Cake cake = grid_cake({{"2/5", "0", "0"}, {"3/5", "1/2", "0"}, {"0", "1/2", "1"}});
  Allocation alloc(cake, {{Q(1), Q(0), Q(0)}, {Q(0), Q(1), Q(0)}, {Q(0), Q(0), Q(1)}});
  CHECK(check_proportional(cake, alloc).pass);   // shares 2/5, 1/2, 1
  CHECK(!check_envy_free(cake, alloc).pass);     // first envies second's 3/5
}

TEST_CASE("pareto optimality: waste is detected with a checkable witness") {
  Cake cake = grid_cake({{"1", "0"}, {"1", "2"}});
  // Wasteful: the first agent holds slice 2, worthless slice 1 sits with
  // the second agent who values nothing there.
  Allocation waste(cake, {{Q(0), Q(1)}, {Q(1), Q(0)}});
  const AxiomReport r = check_pareto_optimal(cake, waste);
  CHECK(!r.pass);
  REQUIRE(r.witness_fractions.has_value());
  REQUIRE(r.witness_gains.has_value());

  // The witness division must itself deliver the claimed gains.
  Allocation better(cake, *r.witness_fractions);
  const UtilityVector before = utilities(cake, waste);
  const UtilityVector after = utilities(cake, better);
  Rational total_gain = 0;
  for (size_t i = 0; i < cake.num_agents(); ++i) {
    CHECK(after.relative[i] >= before.relative[i]);
    total_gain += after.relative[i] - before.relative[i];
    CHECK(after.relative[i] - before.relative[i] >= (*r.witness_gains)[i]);
  }
  CHECK(total_gain > 0);

  // The efficient division passes.
  Allocation good(cake, {{Q(1), Q(0)}, {Q(0), Q(1)}});
  CHECK(check_pareto_optimal(cake, good).pass);
}

TEST_CASE("weak pareto optimality is strictly weaker") {
  Cake cake = grid_cake({{"3", "0"}, {"0", "1"}, {"0", "2"}});
  // First agent holds slices 1-2 (slice 2 worthless to them), second slice 3.
  Allocation alloc(cake, {{Q(1), Q(1), Q(0)}, {Q(0), Q(0), Q(1)}});
  CHECK(!check_pareto_optimal(cake, alloc).pass);
  // But nothing can make the first agent strictly better: they already hold
  // everything they value.
  CHECK(check_weak_pareto_optimal(cake, alloc).pass);
}

TEST_CASE("esv probe: permutation-stable rules pass, tie-broken rules fail") {
  // Two symmetric halves plus a shared slice make the utilitarian argmax a
  // tie; index-based tie-breaking moves utilities under permutation.
  Cake cake = grid_cake({{"1/4", "0"}, {"0", "1/4"}, {"1/2", "1/2"}});
  const AxiomReport util = check_esv_probe(
      cake, [](const Cake& c) { return solve_utilitarian_absolute(c); }, 10, 1, 0);
  CHECK(!util.pass);

  const AxiomReport nash = check_esv_probe(
      cake, [](const Cake& c) { return solve_nash(c); }, 10, 1, 1e-7);
  CHECK(nash.pass);

  const AxiomReport lex = check_esv_probe(
      cake, [](const Cake& c) { return solve_leximin_absolute(c); }, 10, 1, 0);
  CHECK(lex.pass);
}

TEST_CASE("tolerances loosen exact comparisons explicitly") {
  Cake cake = grid_cake({{"1", "1"}});
  // 49.9% to the first agent: fails exactly, passes within 1%.
  Allocation alloc(cake, {{Q(499, 1000)}, {Q(501, 1000)}});
  CHECK(!check_proportional(cake, alloc).pass);
  CHECK(check_proportional(cake, alloc, 0.01).pass);
  CHECK(!check_envy_free(cake, alloc).pass);
  CHECK(check_envy_free(cake, alloc, 0.01).pass);
}
