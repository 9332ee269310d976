#include "efp/auction_lb.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "efp/auction_hb.hpp"
#include "efp/errors.hpp"

namespace efp {

std::vector<std::vector<int>> partition_components(const std::vector<int>& buyers,
                                                   const MarketView& view) {
    // Union-find keyed by position in `buyers`, merged through shared items.
    std::vector<int> parent(buyers.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    std::vector<int> item_owner(view.inst->item_count, -1);
    for (std::size_t i = 0; i < buyers.size(); ++i) {
        for (int j : view.remaining_prefs(view.inst->buyers[buyers[i]])) {
            if (item_owner[j] < 0)
                item_owner[j] = static_cast<int>(i);
            else
                parent[find(static_cast<int>(i))] = find(item_owner[j]);
        }
    }
    std::map<int, std::vector<int>> groups;
    for (std::size_t i = 0; i < buyers.size(); ++i) groups[find(static_cast<int>(i))].push_back(buyers[i]);
    std::vector<std::vector<int>> out;
    for (auto& [root, members] : groups) {
        std::sort(members.begin(), members.end());
        out.push_back(std::move(members));
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return out;
}

UnitPlan plan_unit_sale(const MarketView& view, const std::vector<AugPrice>& utilities,
                        const std::vector<int>& need, const Rat& price) {
    const Instance& inst = *view.inst;
    AugPrice p(price);
    // Buyers who would strictly prefer a preferred item at this price over
    // what they already hold, and can pay for it.
    std::vector<char> tempted(inst.n(), 0);
    for (const Buyer& b : inst.buyers) {
        if (AugPrice(b.budget) < p) continue;
        if (!view.served[b.id]) {
            tempted[b.id] = view.budgets[b.id] >= p;
        } else {
            tempted[b.id] = utilities[b.id] < AugPrice(b.valuation) - p;
        }
    }
    std::vector<int> group = need;
    while (!group.empty()) {
        std::vector<char> in_group(inst.n(), 0);
        for (int id : group) in_group[id] = 1;
        std::vector<std::vector<int>> options;
        for (int id : group) {
            std::vector<int> opts;
            for (int j : view.remaining_prefs(inst.buyers[id])) {
                bool poisoned = false;
                for (const Buyer& other : inst.buyers) {
                    if (other.id == id || !tempted[other.id] || in_group[other.id]) continue;
                    if (std::binary_search(other.prefs.begin(), other.prefs.end(), j)) {
                        poisoned = true;
                        break;
                    }
                }
                if (!poisoned) opts.push_back(j);
            }
            options.push_back(std::move(opts));
        }
        PrefGraph g;
        g.total_items = inst.item_count;
        std::set<int> universe;
        for (std::size_t i = 0; i < group.size(); ++i) {
            g.buyers.push_back(group[i]);
            g.capacity.push_back(1);
            g.adj.push_back(options[i]);
            universe.insert(options[i].begin(), options[i].end());
        }
        g.items.assign(universe.begin(), universe.end());
        BMatching m = max_bmatching(g);
        if (m.size() == static_cast<long>(group.size())) return {group, m.edges};
        std::vector<int> covered;
        for (int id : group)
            if (m.buyer_count(id) > 0) covered.push_back(id);
        group = std::move(covered);
    }
    return {};
}

namespace {

struct LbRun {
    const Instance& inst;
    MarketView view;
    Outcome out;
    std::vector<AugPrice> utility;  // running buyer utilities, for the unit plan

    explicit LbRun(const Instance& instance) : inst(instance), view(instance) {
        out.algorithm = "lb";
        out.n = instance.n();
        out.m = instance.m();
        out.allocation.resize(out.n);
        out.payments.assign(out.n, AugPrice::zero());
        utility.assign(out.n, AugPrice::zero());
    }

    void commit(TraceEvent&& event) {
        if (event.sold.empty() && event.removed.empty()) return;
        for (const SoldEdge& s : event.sold) {
            view.item_left[s.item] = 0;
            view.budgets[s.buyer] -= s.charge;
            view.served[s.buyer] = 1;
            out.allocation[s.buyer].push_back(s.item);
            out.payments[s.buyer] += s.charge;
            utility[s.buyer] += AugPrice(inst.buyers[s.buyer].valuation) - s.charge;
        }
        for (const RemovedItem& r : event.removed) view.item_left[r.item] = 0;
        for (auto& alloc : out.allocation) std::sort(alloc.begin(), alloc.end());
        out.trace.push_back(std::move(event));
    }

    Outcome run() {
        Rat cursor(0);
        int guard = 2 * inst.item_count + 4;
        while (true) {
            auto crit = next_critical_price(view, cursor, Split::Budget);
            if (!crit) break;
            if (--guard < 0) throw InvariantError("auction failed to make progress");
            process_price(*crit);
            cursor = *crit;
        }
        return std::move(out);
    }

    void process_price(const Rat& p) {
        AugPrice price(p);
        AugPrice above(p, 1);
        std::vector<int> universe = demanded_items(view, price, Split::Budget, BuyerFilter::AtOrAbove);
        // Matching of the buyers that survive just above p; what it leaves
        // unmatched drives this round. Buyers exactly at the price can only
        // receive items nobody above the price holds on to.
        PrefGraph g_above = build_graph(view, above, Split::Budget, BuyerFilter::AtOrAbove, universe);
        BMatching matching = max_bmatching(g_above);
        std::vector<int> stranded = matching.unmatched(universe);
        std::vector<int> reach = reachable_buyers(g_above, matching, stranded);
        std::set<int> reach_set(reach.begin(), reach.end());
        std::vector<int> at_buyers = classify_buyers(view, price, Split::Budget).at;
        std::set<int> at_set(at_buyers.begin(), at_buyers.end());

        std::vector<int> pool = reach;
        for (int id : at_buyers)
            if (!reach_set.count(id)) pool.push_back(id);
        std::sort(pool.begin(), pool.end());

        for (const std::vector<int>& group : partition_components(pool, view)) {
            TraceEvent event;
            event.price = p;
            event.component = group;
            std::set<int> group_set(group.begin(), group.end());
            for (int id : group) {
                if (at_set.count(id)) event.at_buyers.push_back(id);
                if (reach_set.count(id)) event.free_buyers.push_back(id);
            }
            for (int j : stranded) {
                bool in_group = false;
                for (int id : group) {
                    const auto& prefs = inst.buyers[id].prefs;
                    in_group |= std::binary_search(prefs.begin(), prefs.end(), j);
                }
                if (in_group) event.stranded.push_back(j);
            }

            AugPrice at_mass = AugPrice::zero();
            for (int id : event.at_buyers)
                if (!view.served[id]) at_mass += view.budgets[id];
            AugPrice reach_mass = AugPrice::zero();
            for (int id : event.free_buyers) reach_mass += view.budgets[id];

            std::vector<int> need;
            for (int id : group)
                if (!view.served[id]) need.push_back(id);

            if (at_mass >= reach_mass && !need.empty()) {
                // The at-price side carries enough budget: give one item
                // each to the largest subgroup servable without envy.
                UnitPlan plan = plan_unit_sale(view, utility, need, p);
                if (!plan.sellers.empty()) {
                    event.procedure =
                        plan.sellers.size() == need.size() ? "unit_each" : "unit_partial";
                    event.charge = price;
                    for (const auto& [buyer, item] : plan.sale)
                        event.sold.push_back(SoldEdge{buyer, item, price});
                    commit(std::move(event));
                    continue;
                }
                event.procedure = "fallback";
            } else if (at_mass >= reach_mass) {
                // Whole group already served; just retire its stranded items.
                event.procedure = "sweep";
            } else {
                event.procedure = "skip_q";
            }

            // Serve the surviving side its full demand at p + eps and retire
            // the group's stranded items.
            event.charge = above;
            for (const auto& [buyer, item] : matching.edges)
                if (reach_set.count(buyer) && group_set.count(buyer))
                    event.sold.push_back(SoldEdge{buyer, item, above});
            for (int id : event.free_buyers) {
                long got = 0;
                for (const SoldEdge& s : event.sold) got += s.buyer == id;
                if (got != view.buyer_demand(inst.buyers[id], above))
                    throw InvariantError("reachable buyer not allocated her full demand");
            }
            for (int j : event.stranded) event.removed.push_back(RemovedItem{j, above});
            commit(std::move(event));
        }
    }
};

}  // namespace

Outcome run_auction_lb(const Instance& inst) {
    validate_instance(inst);
    if (classify_regime(inst.buyers) != Regime::LowBudget)
        throw RegimeError("auction requires every budget < valuation");
    return LbRun(inst).run();
}

}  // namespace efp
