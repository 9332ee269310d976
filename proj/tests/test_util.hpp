#pragma once

// Brute-force reference implementations used by the unit tests and the
// acceptance suite. Deliberately naive and independent of the library's
// algorithmic choices.

#include <algorithm>
#include <vector>

#include "efp/instance.hpp"
#include "efp/matching.hpp"

namespace efp::testutil {

struct BruteResult {
    long max_size = 0;
    long min_marked_at_max = 0;
};

// Enumerates every B-matching edge subset.
inline void brute_walk(const PrefGraph& g, std::size_t edge_idx,
                       const std::vector<std::pair<int, int>>& edges, std::vector<long>& used,
                       std::vector<char>& item_taken, const std::vector<char>& marked, long size,
                       long marked_count, BruteResult& best) {
    if (edge_idx == edges.size()) {
        if (size > best.max_size) {
            best.max_size = size;
            best.min_marked_at_max = marked_count;
        } else if (size == best.max_size) {
            best.min_marked_at_max = std::min(best.min_marked_at_max, marked_count);
        }
        return;
    }
    brute_walk(g, edge_idx + 1, edges, used, item_taken, marked, size, marked_count, best);
    auto [bi, item] = edges[edge_idx];
    if (!item_taken[item] && used[bi] < g.capacity[bi]) {
        item_taken[item] = 1;
        ++used[bi];
        brute_walk(g, edge_idx + 1, edges, used, item_taken, marked, size + 1,
                   marked_count + (marked.empty() ? 0 : marked[item]), best);
        --used[bi];
        item_taken[item] = 0;
    }
}

inline BruteResult brute_bmatching(const PrefGraph& g, const std::vector<char>& marked = {}) {
    std::vector<std::pair<int, int>> edges;  // (buyer index, item id)
    for (std::size_t bi = 0; bi < g.buyers.size(); ++bi)
        for (int j : g.adj[bi]) edges.emplace_back(static_cast<int>(bi), j);
    std::vector<long> used(g.buyers.size(), 0);
    std::vector<char> item_taken(g.total_items, 0);
    BruteResult best;
    brute_walk(g, 0, edges, used, item_taken, marked, 0, 0, best);
    return best;
}

// Random bipartite demand graph with n buyers and m items.
inline PrefGraph random_graph(int n, int m, SplitMix64& rng) {
    PrefGraph g;
    g.total_items = m;
    for (int j = 0; j < m; ++j) g.items.push_back(j);
    for (int i = 0; i < n; ++i) {
        std::vector<int> adj;
        for (int j = 0; j < m; ++j)
            if (rng.below(2) == 0) adj.push_back(j);
        if (adj.empty()) continue;
        g.buyers.push_back(i);
        g.capacity.push_back(1 + static_cast<long>(rng.below(3)));
        g.adj.push_back(std::move(adj));
    }
    return g;
}

// Exhaustive best-bundle search under item prices, for cross-checking the
// count-sweep: every subset of the buyer's priced preferred items.
inline AugPrice best_bundle_utility(const Buyer& b, const std::vector<std::pair<int, AugPrice>>& priced) {
    AugPrice best = AugPrice::zero();
    std::size_t k = priced.size();
    for (std::size_t mask = 0; mask < (1u << k); ++mask) {
        AugPrice cost = AugPrice::zero();
        long hits = 0;
        for (std::size_t t = 0; t < k; ++t) {
            if (!(mask >> t & 1)) continue;
            cost += priced[t].second;
            hits += std::binary_search(b.prefs.begin(), b.prefs.end(), priced[t].first);
        }
        if (cost > AugPrice(b.budget)) continue;
        AugPrice u = AugPrice(b.valuation * hits, 0) - cost;
        if (u > best) best = u;
    }
    return best;
}

}  // namespace efp::testutil
