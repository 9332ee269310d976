#pragma once

#include <optional>

#include "efp/matching.hpp"
#include "efp/outcome.hpp"

namespace efp {

// Size of a maximum B-matching of the demand graph at this price (buyers at
// or above the price, items still on the market and demanded).
long matching_size_at(const MarketView& view, const AugPrice& price, Split split);

// Smallest breakpoint q >= from where the maximum-matching size strictly
// drops just above q; nullopt once no demand is left anywhere. Demands are
// piecewise constant between breakpoints, so scanning breakpoints is exact.
std::optional<Rat> next_critical_price(const MarketView& view, const Rat& from, Split split);

// Ascending-price auction for markets where every budget is at least the
// valuation. Produces an item-priced outcome: every sold item carries its
// own price and each buyer pays one price per item.
Outcome run_auction_hb(const Instance& inst);

}  // namespace efp
