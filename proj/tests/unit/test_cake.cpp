#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "fairslice/cake.hpp"
#include "support.hpp"

using namespace fairslice;
using testsupport::grid_cake;
using testsupport::names;
using testsupport::Q;
using testsupport::sl;

TEST_CASE("cake construction computes slice and total values") {
  // Two agents; slice lengths 2 and 3.
  Cake cake(names(2), {sl("2", {"1", "4"}), sl("3", {"5", "0"})});
  CHECK(cake.num_agents() == 2);
  CHECK(cake.num_slices() == 2);
  CHECK(cake.slice_value(0, 0) == Q(2));
  CHECK(cake.slice_value(1, 0) == Q(8));
  CHECK(cake.slice_value(0, 1) == Q(15));
  CHECK(cake.slice_value(1, 1) == Q(0));
  CHECK(cake.total_value(0) == Q(17));
  CHECK(cake.total_value(1) == Q(8));
  CHECK(cake.agent_index("a2") == 1);
  CHECK_THROWS_AS(cake.agent_index("nobody"), std::invalid_argument);
}

TEST_CASE("cake invariants are enforced at construction") {
  CHECK_THROWS_AS(Cake({}, {sl("1", {})}), std::invalid_argument);      // no agents
  CHECK_THROWS_AS(Cake(names(1), {}), std::invalid_argument);           // no slices
  CHECK_THROWS_AS(Cake(names(1), {sl("0", {"1"})}), std::invalid_argument);   // zero length
  CHECK_THROWS_AS(Cake(names(1), {sl("-1", {"1"})}), std::invalid_argument);  // negative length
  CHECK_THROWS_AS(Cake(names(1), {sl("1", {"-1"})}), std::invalid_argument);  // negative density
  CHECK_THROWS_AS(Cake(names(2), {sl("1", {"1"})}), std::invalid_argument);   // ragged densities
  // Agent a2 values nothing.
  CHECK_THROWS_AS(grid_cake({{"1", "0"}, {"2", "0"}}), std::invalid_argument);
  // Second slice is worthless to everyone.
  CHECK_THROWS_AS(grid_cake({{"1", "1"}, {"0", "0"}}), std::invalid_argument);
  // Duplicate agent names.
  CHECK_THROWS_AS(Cake({"x", "x"}, {sl("1", {"1", "1"})}), std::invalid_argument);
}

TEST_CASE("allocation requires every slice column to sum to exactly 1") {
  Cake cake = grid_cake({{"1", "1"}, {"2", "3"}});
  CHECK_NOTHROW(Allocation(cake, {{Q(1, 2), Q(1)}, {Q(1, 2), Q(0)}}));
  // Sum 0.99... is not 1, even very close.
  CHECK_THROWS_AS(Allocation(cake, {{Q(1, 2), Q(1)}, {Q(49, 100), Q(0)}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(Allocation(cake, {{Q(-1, 2), Q(1)}, {Q(3, 2), Q(0)}}),
                  std::invalid_argument);  // negative share
  CHECK_THROWS_AS(Allocation(cake, {{Q(1), Q(1)}}), std::invalid_argument);  // wrong rows
  CHECK_THROWS_AS(Allocation(cake, {{Q(1)}, {Q(0)}}), std::invalid_argument);  // wrong cols
}

TEST_CASE("utilities come in absolute and relative gauges") {
  Cake cake = grid_cake({{"1", "1"}, {"2", "3"}});  // totals: a1=3, a2=4
  Allocation alloc(cake, {{Q(1), Q(1, 2)}, {Q(0), Q(1, 2)}});
  CHECK(absolute_utility(cake, alloc, 0) == Q(2));
  CHECK(absolute_utility(cake, alloc, 1) == Q(3, 2));
  CHECK(relative_utility(cake, alloc, 0) == Q(2, 3));
  CHECK(relative_utility(cake, alloc, 1) == Q(3, 8));
  const UtilityVector u = utilities(cake, alloc);
  CHECK(u.absolute == std::vector<Rational>{Q(2), Q(3, 2)});
  CHECK(u.relative == std::vector<Rational>{Q(2, 3), Q(3, 8)});
  // a1's opinion of a2's piece: half of slice 2, worth 1 to a1.
  CHECK(value_of_piece(cake, alloc, 0, 1) == Q(1));
}

TEST_CASE("whole_cake_to gives everything to one agent") {
  Cake cake = grid_cake({{"1", "1"}, {"2", "3"}});
  Allocation alloc = Allocation::whole_cake_to(cake, 1);
  CHECK(absolute_utility(cake, alloc, 1) == cake.total_value(1));
  CHECK(absolute_utility(cake, alloc, 0) == Q(0));
}

TEST_CASE("enlarge appends slices at the right end and re-validates") {
  Cake cake = grid_cake({{"1", "1"}});
  Cake larger = enlarge(cake, {sl("2", {"0", "5"})});
  CHECK(larger.num_slices() == 2);
  CHECK(larger.slice_value(1, 1) == Q(10));
  CHECK(larger.total_value(0) == Q(1));       // unchanged for a1
  CHECK(larger.total_value(1) == Q(11));
  CHECK(cake.num_slices() == 1);              // original untouched
  // Extra slices must carry one density per agent.
  CHECK_THROWS_AS(enlarge(cake, {sl("1", {"1"})}), std::invalid_argument);
  // A worthless extra slice violates the cake invariants.
  CHECK_THROWS_AS(enlarge(cake, {sl("1", {"0", "0"})}), std::invalid_argument);
}

TEST_CASE("remove_agent prunes slices now worthless to the others") {
  // Slice 1 is only valued by a1; slice 2 by everyone.
  Cake cake = grid_cake({{"3", "0", "0"}, {"1", "1", "1"}});
  ReducedCake reduced = remove_agent(cake, 0);
  CHECK(reduced.cake.num_agents() == 2);
  CHECK(reduced.cake.num_slices() == 1);
  CHECK(reduced.kept_slices == std::vector<size_t>{1});
  CHECK(reduced.dropped_slices == std::vector<size_t>{0});
  CHECK(reduced.cake.agent_name(0) == "a2");

  // Removing a middle agent keeps order of the rest.
  ReducedCake mid = remove_agent(cake, 1);
  CHECK(mid.cake.agent_name(0) == "a1");
  CHECK(mid.cake.agent_name(1) == "a3");
  CHECK(mid.dropped_slices.empty());

  Cake two = grid_cake({{"1", "1"}});
  ReducedCake one = remove_agent(two, 0);
  CHECK_THROWS_AS(remove_agent(one.cake, 0), std::invalid_argument);  // last agent
}
