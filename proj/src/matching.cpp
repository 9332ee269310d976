#include "efp/matching.hpp"

#include <algorithm>
#include <set>

namespace efp {

int PrefGraph::buyer_index(int buyer_id) const {
    auto it = std::lower_bound(buyers.begin(), buyers.end(), buyer_id);
    if (it == buyers.end() || *it != buyer_id) return -1;
    return static_cast<int>(it - buyers.begin());
}

std::vector<int> demanded_items(const MarketView& view, const AugPrice& price, Split split,
                                BuyerFilter filter) {
    BuyerClasses cls = classify_buyers(view, price, split);
    std::set<int> items;
    auto add = [&](int id) {
        for (int j : view.inst->buyers[id].prefs)
            if (view.item_left[j]) items.insert(j);
    };
    for (int id : cls.above) add(id);
    if (filter == BuyerFilter::AtOrAbove)
        for (int id : cls.at) add(id);
    return {items.begin(), items.end()};
}

PrefGraph build_graph(const MarketView& view, const AugPrice& price, Split split,
                      BuyerFilter filter, const std::vector<int>& item_universe) {
    PrefGraph g;
    g.price = price;
    g.total_items = view.inst->item_count;
    g.items = item_universe;
    BuyerClasses cls = classify_buyers(view, price, split);
    std::vector<int> ids = cls.above;
    if (filter == BuyerFilter::AtOrAbove) ids.insert(ids.end(), cls.at.begin(), cls.at.end());
    std::sort(ids.begin(), ids.end());
    std::vector<char> in_universe(g.total_items, 0);
    for (int j : item_universe) in_universe[j] = 1;
    for (int id : ids) {
        const Buyer& b = view.inst->buyers[id];
        std::vector<int> adj;
        for (int j : b.prefs)
            if (view.item_left[j] && in_universe[j]) adj.push_back(j);
        if (adj.empty()) continue;
        g.buyers.push_back(id);
        g.capacity.push_back(view.buyer_demand(b, price));
        g.adj.push_back(std::move(adj));
    }
    return g;
}

long BMatching::buyer_count(int buyer_id) const {
    long c = 0;
    for (const auto& [b, j] : edges)
        if (b == buyer_id) ++c;
    return c;
}

std::vector<int> BMatching::matched_items(int buyer_id) const {
    std::vector<int> out;
    for (const auto& [b, j] : edges)
        if (b == buyer_id) out.push_back(j);
    return out;
}

std::vector<int> BMatching::unmatched(const std::vector<int>& universe) const {
    std::vector<int> out;
    for (int j : universe)
        if (owner[j] < 0) out.push_back(j);
    return out;
}

namespace {

// Augmenting search from the item side: match `item` directly to a buyer
// with spare capacity, or reroute one of a neighbor's matched items.
struct ItemAugmenter {
    const PrefGraph& g;
    std::vector<int>& owner_idx;           // item id -> buyer index in g
    std::vector<long>& used;               // per buyer index
    std::vector<std::vector<int>> item_adj;  // item id -> buyer indices

    ItemAugmenter(const PrefGraph& graph, std::vector<int>& owner, std::vector<long>& use)
        : g(graph), owner_idx(owner), used(use) {
        item_adj.assign(g.total_items, {});
        for (std::size_t bi = 0; bi < g.buyers.size(); ++bi)
            for (int j : g.adj[bi]) item_adj[j].push_back(static_cast<int>(bi));
    }

    bool augment(int item, std::vector<char>& seen_item) {
        for (int bi : item_adj[item]) {
            if (used[bi] < g.capacity[bi]) {
                owner_idx[item] = bi;
                ++used[bi];
                return true;
            }
        }
        for (int bi : item_adj[item]) {
            for (int other : g.adj[bi]) {
                if (other == item || owner_idx[other] != bi || seen_item[other]) continue;
                seen_item[other] = 1;
                if (augment(other, seen_item)) {
                    owner_idx[item] = bi;
                    return true;
                }
            }
        }
        return false;
    }
};

BMatching greedy_cover(const PrefGraph& g, const std::vector<int>& item_order) {
    std::vector<int> owner_idx(g.total_items, -1);
    std::vector<long> used(g.buyers.size(), 0);
    ItemAugmenter aug(g, owner_idx, used);
    for (int j : item_order) {
        std::vector<char> seen(g.total_items, 0);
        seen[j] = 1;
        aug.augment(j, seen);
    }
    BMatching m;
    m.owner.assign(g.total_items, -1);
    for (int j = 0; j < g.total_items; ++j)
        if (owner_idx[j] >= 0) m.owner[j] = g.buyers[owner_idx[j]];
    for (std::size_t bi = 0; bi < g.buyers.size(); ++bi)
        for (int j : g.adj[bi])
            if (owner_idx[j] == static_cast<int>(bi)) m.edges.emplace_back(g.buyers[bi], j);
    std::sort(m.edges.begin(), m.edges.end());
    return m;
}

}  // namespace

BMatching max_bmatching(const PrefGraph& g) { return greedy_cover(g, g.items); }

BMatching max_bmatching_min_marked(const PrefGraph& g, const std::vector<char>& marked) {
    std::vector<int> order;
    for (int j : g.items)
        if (!marked[j]) order.push_back(j);
    for (int j : g.items)
        if (marked[j]) order.push_back(j);
    return greedy_cover(g, order);
}

std::vector<int> reachable_buyers(const PrefGraph& g, const BMatching& m,
                                  const std::vector<int>& targets) {
    std::vector<std::vector<int>> item_adj(g.total_items);
    for (std::size_t bi = 0; bi < g.buyers.size(); ++bi)
        for (int j : g.adj[bi]) item_adj[j].push_back(g.buyers[bi]);
    std::vector<std::vector<int>> buyer_matched(g.buyers.size());
    for (const auto& [buyer_id, item] : m.edges) {
        int bi = g.buyer_index(buyer_id);
        if (bi >= 0) buyer_matched[bi].push_back(item);
    }

    std::vector<char> item_seen(g.total_items, 0);
    std::vector<char> buyer_seen(g.buyers.size(), 0);
    std::vector<int> item_queue = targets;
    for (int j : targets) item_seen[j] = 1;
    std::vector<int> out;
    while (!item_queue.empty()) {
        std::vector<int> next;
        for (int j : item_queue) {
            for (int buyer_id : item_adj[j]) {
                int bi = g.buyer_index(buyer_id);
                if (bi < 0 || buyer_seen[bi]) continue;
                buyer_seen[bi] = 1;
                out.push_back(buyer_id);
                for (int owned : buyer_matched[bi]) {
                    if (!item_seen[owned]) {
                        item_seen[owned] = 1;
                        next.push_back(owned);
                    }
                }
            }
        }
        item_queue = std::move(next);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::optional<std::vector<std::pair<int, int>>> one_item_each(
    const std::vector<int>& buyers, const std::vector<std::vector<int>>& options,
    int total_items) {
    PrefGraph g;
    g.total_items = total_items;
    std::set<int> universe;
    std::vector<std::size_t> idx(buyers.size());
    for (std::size_t i = 0; i < buyers.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return buyers[a] < buyers[b]; });
    for (std::size_t i : idx) {
        g.buyers.push_back(buyers[i]);
        g.capacity.push_back(1);
        std::vector<int> adj = options[i];
        std::sort(adj.begin(), adj.end());
        g.adj.push_back(adj);
        universe.insert(adj.begin(), adj.end());
    }
    g.items.assign(universe.begin(), universe.end());
    BMatching m = max_bmatching(g);
    if (m.size() != static_cast<long>(buyers.size())) return std::nullopt;
    return m.edges;
}

}  // namespace efp
