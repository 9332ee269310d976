#pragma once

#include <optional>
#include <vector>

#include "efp/instance.hpp"

namespace efp {

// Bipartite demand graph at a price: one node per buyer of the selected
// class with capacity equal to her demand, one node per item of the given
// universe with capacity 1, and an edge whenever the item is in the buyer's
// preference set.
struct PrefGraph {
    AugPrice price;
    int total_items = 0;             // instance m, for owner arrays
    std::vector<int> buyers;         // buyer ids, ascending
    std::vector<long> capacity;      // parallel to buyers
    std::vector<std::vector<int>> adj;  // parallel to buyers; sorted item ids
    std::vector<int> items;          // item universe, ascending

    int buyer_index(int buyer_id) const;  // -1 if absent
};

enum class BuyerFilter { AtOrAbove, StrictlyAbove };

// Items still on the market demanded by at least one buyer of the class at
// this price; the item universe of the preference graph.
std::vector<int> demanded_items(const MarketView& view, const AugPrice& price, Split split,
                                BuyerFilter filter);

PrefGraph build_graph(const MarketView& view, const AugPrice& price, Split split,
                      BuyerFilter filter, const std::vector<int>& item_universe);

struct BMatching {
    std::vector<int> owner;  // item id -> buyer id, -1 if unmatched; size total_items
    std::vector<std::pair<int, int>> edges;  // (buyer, item), sorted

    long size() const { return static_cast<long>(edges.size()); }
    long buyer_count(int buyer_id) const;
    std::vector<int> matched_items(int buyer_id) const;
    // Items of the universe left unmatched.
    std::vector<int> unmatched(const std::vector<int>& universe) const;
};

// Maximum-cardinality B-matching, deterministic under ascending buyer/item
// order. Augmenting-path construction; equivalent to the max-flow reduction
// with source->buyer capacities D_i and item->sink capacities 1.
BMatching max_bmatching(const PrefGraph& g);

// Among all maximum B-matchings, one that matches the fewest marked items.
// Matched item sets of maximum matchings form the bases of a transversal
// matroid, so greedily covering unmarked items first yields the min-weight
// basis; no cost-scaling flow needed.
BMatching max_bmatching_min_marked(const PrefGraph& g, const std::vector<char>& marked);

// Buyers connected to some target item by an alternating path traversed
// from the item side: cross any edge item->buyer, then follow the buyer's
// matched edges to further items. Targets must be unmatched. Sorted output.
std::vector<int> reachable_buyers(const PrefGraph& g, const BMatching& m,
                                  const std::vector<int>& targets);

// A matching giving every listed buyer exactly one item from her option
// list, if one exists.
std::optional<std::vector<std::pair<int, int>>> one_item_each(
    const std::vector<int>& buyers, const std::vector<std::vector<int>>& options, int total_items);

}  // namespace efp
