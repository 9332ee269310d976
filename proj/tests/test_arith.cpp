#include "doctest.h"
#include "efp/aug_price.hpp"
#include "efp/instance.hpp"

using namespace efp;

TEST_CASE("rational parsing accepts integers and fractions only") {
    CHECK(*rat_parse("3") == rat(3));
    CHECK(*rat_parse("10/4") == rat(5, 2));
    CHECK(*rat_parse("-7/2") == rat(-7, 2));
    CHECK(!rat_parse("1.5"));
    CHECK(!rat_parse("1e3"));
    CHECK(!rat_parse("1/0"));
    CHECK(!rat_parse(""));
    CHECK(!rat_parse("/3"));
    CHECK(rat_str(rat(10, 4)) == "5/2");
    CHECK(rat_str(rat(4, 2)) == "2");
}

TEST_CASE("decimal rendering truncates exactly") {
    CHECK(rat_decimal(rat(25, 12), 4) == "2.0833");
    CHECK(rat_decimal(rat(-1, 3), 3) == "-0.333");
    CHECK(rat_decimal(rat(7), 2) == "7.00");
}

TEST_CASE("augmented price order is lexicographic and total") {
    AugPrice a(rat(1), 0), a_eps(rat(1), 1), b(rat(2), -5);
    CHECK(a < a_eps);
    CHECK(a_eps < b);
    CHECK(AugPrice(rat(3), 0) == AugPrice(rat(6, 2), 0));
    // a + 0*eps behaves as the plain rational under the order.
    CHECK(cmp(AugPrice(rat(1, 2)), AugPrice(rat(1, 2), 0)) == 0);

    SUBCASE("transitivity on a sampled grid") {
        std::vector<AugPrice> grid;
        for (long num = 0; num <= 4; ++num)
            for (long eps = -2; eps <= 2; ++eps) grid.emplace_back(rat(num, 2), eps);
        for (const auto& x : grid)
            for (const auto& y : grid)
                for (const auto& z : grid)
                    if (x <= y && y <= z) CHECK(x <= z);
    }
}

TEST_CASE("augmented price floor division") {
    // Plain rational divisor, integral quotient: the eps debt flips the floor.
    CHECK(floor_div(AugPrice(rat(10)), AugPrice(rat(5))) == 2);
    CHECK(floor_div(AugPrice(rat(10), -1), AugPrice(rat(5))) == 1);
    CHECK(floor_div(AugPrice(rat(10), 3), AugPrice(rat(5))) == 2);
    // Non-integral quotients ignore the infinitesimal part.
    CHECK(floor_div(AugPrice(rat(10), -7), AugPrice(rat(3))) == 3);
    CHECK(floor_div(AugPrice(rat(10), 7), AugPrice(rat(3))) == 3);
    // Divisor just above a divisor of the base: one item less.
    CHECK(floor_div(AugPrice(rat(10)), AugPrice(rat(5), 1)) == 1);
    CHECK(floor_div(AugPrice(rat(10)), AugPrice(rat(3), 1)) == 3);
    // Exact augmented division: 2 * (5 + eps) = 10 + 2 eps.
    CHECK(floor_div(AugPrice(rat(10), 2), AugPrice(rat(5), 1)) == 2);
    CHECK(floor_div(AugPrice(rat(10), 1), AugPrice(rat(5), 1)) == 1);
    CHECK(floor_div(AugPrice(rat(10), 3), AugPrice(rat(5), 1)) == 2);
    CHECK_THROWS_AS(floor_div(AugPrice(rat(1)), AugPrice(rat(0), 1)), std::domain_error);
}

TEST_CASE("floor division against a concrete small epsilon") {
    // For every case the symbolic floor must match the concrete floor at a
    // sufficiently small rational epsilon.
    Rat tiny(1, 1000000);
    for (long bnum = 1; bnum <= 12; ++bnum)
        for (long beps = -3; beps <= 3; ++beps)
            for (long dnum = 1; dnum <= 6; ++dnum)
                for (long deps = 0; deps <= 1; ++deps) {
                    AugPrice num(rat(bnum, 2), beps), den(rat(dnum, 3), deps);
                    Rat cnum = concretize(num, tiny), cden = concretize(den, tiny);
                    CHECK(floor_div(num, den) == floor_div_rat(cnum, cden));
                }
}

TEST_CASE("demand follows the price and budget exactly") {
    CHECK(demand(rat(4), AugPrice(rat(10)), AugPrice(rat(3)), 5) == 3);
    CHECK(demand(rat(4), AugPrice(rat(10)), AugPrice(rat(4), 1), 5) == 0);
    CHECK(demand(rat(8), AugPrice(rat(10)), AugPrice(rat(5), 1), 3) == 1);
    CHECK(demand(rat(1), AugPrice(rat(1)), AugPrice(rat(1)), 1) == 1);
    CHECK_THROWS_AS(demand(rat(1), AugPrice(rat(1)), AugPrice(rat(0)), 1), std::domain_error);
    CHECK_THROWS_AS(demand(rat(1), AugPrice(rat(1)), AugPrice(rat(-1)), 1), std::domain_error);
}

TEST_CASE("demand is non-increasing in price") {
    SplitMix64 rng(7);
    for (int iter = 0; iter < 500; ++iter) {
        Rat v = rat(1 + static_cast<long>(rng.below(20)), 1 + static_cast<long>(rng.below(4)));
        AugPrice b(rat(1 + static_cast<long>(rng.below(20)), 1 + static_cast<long>(rng.below(4))),
                   -static_cast<long>(rng.below(3)));
        long cap = 1 + static_cast<long>(rng.below(6));
        AugPrice p1(rat(1 + static_cast<long>(rng.below(30)), 1 + static_cast<long>(rng.below(4))),
                    static_cast<long>(rng.below(2)));
        AugPrice p2(rat(1 + static_cast<long>(rng.below(30)), 1 + static_cast<long>(rng.below(4))),
                    static_cast<long>(rng.below(2)));
        if (p2 < p1) std::swap(p1, p2);
        CHECK(demand(v, b, p1, cap) >= demand(v, b, p2, cap));
    }
}

TEST_CASE("demand just above a price equals demand at the next rational step") {
    // demand(p + eps) is the right limit: any rational strictly between p
    // and the next breakpoint gives the same value.
    Rat v(4), b(10);
    long cap = 5;
    // breakpoints of this buyer: 10/5, 10/4, 10/3, 10/2, 4, 10
    std::vector<Rat> bps = {rat(2), rat(10, 4), rat(10, 3), rat(4), rat(5), rat(10)};
    for (std::size_t k = 0; k + 1 < bps.size(); ++k) {
        Rat mid = (bps[k] + bps[k + 1]) / 2;
        CHECK(demand(v, AugPrice(b), AugPrice(bps[k], 1), cap) ==
              demand(v, AugPrice(b), AugPrice(mid), cap));
    }
}
