#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "fairslice/ceei.hpp"
#include "fairslice/welfare.hpp"
#include "support.hpp"

using namespace fairslice;
using testsupport::grid_cake;
using testsupport::Q;

namespace {

Cake market_cake() {
  return grid_cake({{"2", "1"}, {"2", "1"}, {"2", "4"},
                    {"2", "4"}, {"2", "1"}, {"2", "1"}});
}

Allocation market_split(const Cake& cake) {
  return Allocation(cake, {{Q(1), Q(1), Q(0), Q(0), Q(1), Q(1)},
                           {Q(0), Q(0), Q(1), Q(1), Q(0), Q(0)}});
}

PriceVector prices_of(std::vector<Rational> density) {
  PriceVector pv;
  pv.density = std::move(density);
  return pv;
}

}  // namespace

TEST_CASE("equilibrium prices verify on the six-slice market cake") {
  Cake cake = market_cake();
  Allocation alloc = market_split(cake);
  PriceVector prices = prices_of({Q(1, 4), Q(1, 4), Q(1, 2), Q(1, 2), Q(1, 4), Q(1, 4)});
  CHECK(verify_ceei(cake, alloc, prices).pass);
  CHECK(verify_sceei(cake, alloc, prices).pass);
  CHECK(prices.total(cake) == Q(2));
  CHECK(prices.slice_price(cake, 2) == Q(1, 2));
}

TEST_CASE("altered central prices stay an equilibrium but lose strictness") {
  Cake cake = market_cake();
  Allocation alloc = market_split(cake);
  // Repricing the two dear slices (2/5, 3/5) keeps both pieces at cost 1 and
  // affords no better piece, but value-per-price is no longer equalized on
  // the second agent's own holdings.
  PriceVector prices = prices_of({Q(1, 4), Q(1, 4), Q(2, 5), Q(3, 5), Q(1, 4), Q(1, 4)});
  CHECK(verify_ceei(cake, alloc, prices).pass);
  const AxiomReport strict = verify_sceei(cake, alloc, prices);
  CHECK(!strict.pass);
}

TEST_CASE("equal incomes are necessary: scaled prices fail") {
  Cake cake = market_cake();
  Allocation alloc = market_split(cake);
  PriceVector prices = prices_of({Q(1, 2), Q(1, 2), Q(1), Q(1), Q(1, 2), Q(1, 2)});
  CHECK(!verify_ceei(cake, alloc, prices).pass);  // pieces now cost 2
}

TEST_CASE("competitiveness is necessary: swapped holdings fail") {
  Cake cake = market_cake();
  Allocation swapped(cake, {{Q(0), Q(0), Q(1), Q(1), Q(0), Q(0)},
                            {Q(1), Q(1), Q(0), Q(0), Q(1), Q(1)}});
  PriceVector prices = prices_of({Q(1, 4), Q(1, 4), Q(1, 2), Q(1, 2), Q(1, 4), Q(1, 4)});
  CHECK(!verify_ceei(cake, swapped, prices).pass);
}

TEST_CASE("an equilibrium need not be Pareto optimal; strictness forbids that") {
  Cake cake = grid_cake({{"3", "0"}, {"0", "1"}, {"0", "2"}});
  Allocation alloc(cake, {{Q(1), Q(1), Q(0)}, {Q(0), Q(0), Q(1)}});
  PriceVector prices = prices_of({Q(1, 5), Q(4, 5), Q(1)});
  CHECK(verify_ceei(cake, alloc, prices).pass);
  // The first agent holds a slice worthless to them: not value-per-price
  // maximal, so the strict verification refuses it.
  CHECK(!verify_sceei(cake, alloc, prices).pass);
}

TEST_CASE("standard price measure makes every piece cost exactly 1") {
  Cake cake = market_cake();
  Allocation alloc = market_split(cake);
  const PriceVector prices = standard_price_measure(cake, alloc);
  CHECK(prices.density ==
        std::vector<Rational>{Q(1, 4), Q(1, 4), Q(1, 2), Q(1, 2), Q(1, 4), Q(1, 4)});
  CHECK(prices.total(cake) == Q(2));

  // Undefined when someone holds nothing of value.
  Allocation empty_handed = Allocation::whole_cake_to(cake, 0);
  CHECK_THROWS_AS(standard_price_measure(cake, empty_handed), std::invalid_argument);
}

TEST_CASE("split slices carry per-holder price rates when they differ") {
  // Both agents share the single slice; their utilities differ, so the
  // standard measure needs per-holder refinement on that slice.
  Cake cake = grid_cake({{"4", "1"}});
  Allocation alloc(cake, {{Q(3, 4)}, {Q(1, 4)}});
  const PriceVector prices = standard_price_measure(cake, alloc);
  REQUIRE(prices.sub_density.has_value());
  // Rate on the first agent's part: density 4 / utility 3 = 4/3 per unit.
  CHECK((*prices.sub_density)[0][0] == Q(4, 3));
  // Rate on the second agent's part: density 1 / utility 1/4 = 4 per unit.
  CHECK((*prices.sub_density)[1][0] == Q(4));
}

TEST_CASE("product maximization and strict equilibrium pick the same divisions") {
  for (const Cake& cake : {market_cake(), grid_cake({{"2", "1"}, {"2", "4"}, {"1", "1"}}),
                           grid_cake({{"12", "12", "21"}, {"0", "0", "9"}})}) {
    const AxiomReport r = nash_sceei_equivalence_check(cake, 1e-6);
    CHECK_MESSAGE(r.pass, r.detail);
  }
}
