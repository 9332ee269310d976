#pragma once

#include <vector>

#include "efp/matching.hpp"
#include "efp/outcome.hpp"

namespace efp {

// Finest partition of `buyers` such that buyers in different groups share no
// remaining preferred item: connected components of the shared-item graph.
// Groups are sorted internally and ordered by their smallest member.
std::vector<std::vector<int>> partition_components(const std::vector<int>& buyers,
                                                   const MarketView& view);

// The largest subgroup of `need` that can simultaneously receive one
// preferred item each at this price without creating envy: an item may be
// sold only if every other buyer who could afford it and would strictly
// gain from it at this price is herself in the served subgroup. Uncovered
// buyers are dropped and the rule re-applied until stable.
struct UnitPlan {
    std::vector<int> sellers;                 // ascending
    std::vector<std::pair<int, int>> sale;    // (buyer, item)
};
UnitPlan plan_unit_sale(const MarketView& view, const std::vector<AugPrice>& utilities,
                        const std::vector<int>& need, const Rat& price);

// Ascending-price auction for markets where every budget is below the
// valuation. Prices bundles rather than items: a buyer may buy at several
// critical prices, and within one price every group is settled by either
// serving the above-price side in full, or giving each group buyer exactly
// one item.
Outcome run_auction_lb(const Instance& inst);

}  // namespace efp
