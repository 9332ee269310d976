#include "efp/auction_hb.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "efp/errors.hpp"

namespace efp {

long matching_size_at(const MarketView& view, const AugPrice& price, Split split) {
    std::vector<int> items = demanded_items(view, price, split, BuyerFilter::AtOrAbove);
    if (items.empty()) return 0;
    PrefGraph g = build_graph(view, price, split, BuyerFilter::AtOrAbove, items);
    return max_bmatching(g).size();
}

std::optional<Rat> next_critical_price(const MarketView& view, const Rat& from, Split split) {
    for (const Rat& q : breakpoints(view)) {
        if (q < from) continue;
        long at = matching_size_at(view, AugPrice(q), split);
        if (at == 0) return std::nullopt;  // sizes only shrink from here on
        long above = matching_size_at(view, AugPrice(q, 1), split);
        if (at > above) return q;
    }
    return std::nullopt;
}

namespace {

struct HbRun {
    const Instance& inst;
    MarketView view;
    Outcome out;

    explicit HbRun(const Instance& instance) : inst(instance), view(instance) {
        out.algorithm = "hb";
        out.n = instance.n();
        out.m = instance.m();
        out.allocation.resize(out.n);
        out.payments.assign(out.n, AugPrice::zero());
    }

    void commit(TraceEvent&& event) {
        for (const SoldEdge& s : event.sold) {
            view.item_left[s.item] = 0;
            view.budgets[s.buyer] -= s.charge;
            view.served[s.buyer] = 1;
            out.allocation[s.buyer].push_back(s.item);
            out.payments[s.buyer] += s.charge;
            out.item_prices.emplace(s.item, s.charge);
        }
        for (const RemovedItem& r : event.removed) view.item_left[r.item] = 0;
        for (auto& alloc : out.allocation) std::sort(alloc.begin(), alloc.end());
        out.trace.push_back(std::move(event));
    }

    // Drop remaining items no buyer demands at any higher price.
    void prune_undemanded(const Rat& p, TraceEvent& event) {
        AugPrice above(p, 1);
        std::vector<int> live = demanded_items(view, above, Split::Valuation, BuyerFilter::AtOrAbove);
        std::vector<char> is_live(inst.item_count, 0);
        for (int j : live) is_live[j] = 1;
        for (int j = 0; j < inst.item_count; ++j) {
            bool sold_now = false;
            for (const SoldEdge& s : event.sold) sold_now |= s.item == j;
            bool removed_now = false;
            for (const RemovedItem& r : event.removed) removed_now |= r.item == j;
            if (view.item_left[j] && !is_live[j] && !sold_now && !removed_now)
                event.removed.push_back(RemovedItem{j, above});
        }
    }

    // Demand collapses at p because buyers valued exactly at p drop out.
    // Sells at p. Starting from the full matching, which covers every
    // demanded item, the above-price side is augmented to maximum by taking
    // items back from at-price holders; what stays with the at-price buyers
    // is exactly the stranded set, and it is assignable to them by
    // construction. Among all maximum above-price matchings this split also
    // matches the fewest at-price-preferred items: those items are either
    // held by at-price buyers or unavoidable for a maximum matching.
    TraceEvent sell_exact(const Rat& p, const PrefGraph& g_all, const BMatching& m_full) {
        AugPrice price(p);
        BuyerClasses cls = classify_buyers(view, price, Split::Valuation);
        std::set<int> at_set(cls.at.begin(), cls.at.end());

        PrefGraph g_above =
            build_graph(view, price, Split::Valuation, BuyerFilter::StrictlyAbove, g_all.items);
        std::vector<int> owner = m_full.owner;  // item -> buyer, every universe item covered
        std::vector<long> spare(g_above.buyers.size(), 0);
        for (std::size_t bi = 0; bi < g_above.buyers.size(); ++bi) {
            spare[bi] = g_above.capacity[bi];
            for (int j : g_above.adj[bi]) spare[bi] -= owner[j] == g_above.buyers[bi];
        }
        // Claim items from at-price holders along alternating paths until the
        // above-price side is a maximum matching of its own graph.
        std::function<bool(int, std::vector<char>&)> claim = [&](int bi, std::vector<char>& seen) {
            for (int j : g_above.adj[bi]) {
                if (seen[j] || owner[j] == g_above.buyers[bi]) continue;
                seen[j] = 1;
                int holder = owner[j];
                if (at_set.count(holder)) {
                    owner[j] = g_above.buyers[bi];
                    return true;
                }
                int hi = g_above.buyer_index(holder);
                if (hi >= 0 && claim(hi, seen)) {
                    owner[j] = g_above.buyers[bi];
                    return true;
                }
            }
            return false;
        };
        for (std::size_t bi = 0; bi < g_above.buyers.size(); ++bi) {
            while (spare[bi] > 0) {
                std::vector<char> seen(inst.item_count, 0);
                if (!claim(static_cast<int>(bi), seen)) break;
                --spare[bi];
            }
        }

        BMatching above_part;
        above_part.owner.assign(inst.item_count, -1);
        std::vector<int> stranded;
        std::vector<SoldEdge> handoff;
        for (int j : g_all.items) {
            if (at_set.count(owner[j])) {
                stranded.push_back(j);
                handoff.push_back(SoldEdge{owner[j], j, price});
            } else {
                above_part.owner[j] = owner[j];
                above_part.edges.emplace_back(owner[j], j);
            }
        }
        std::sort(above_part.edges.begin(), above_part.edges.end());
        if (stranded.empty())
            throw InvariantError("exact-price event with no stranded item");

        std::vector<int> reach = reachable_buyers(g_above, above_part, stranded);
        std::set<int> reach_set(reach.begin(), reach.end());

        TraceEvent event;
        event.price = p;
        event.charge = price;
        event.procedure = "assign_exact";
        event.at_buyers = cls.at;
        event.free_buyers = reach;
        event.stranded = stranded;
        for (const auto& [buyer, item] : above_part.edges)
            if (reach_set.count(buyer)) event.sold.push_back(SoldEdge{buyer, item, price});
        for (int id : reach) {
            long got = 0;
            for (const SoldEdge& s : event.sold) got += s.buyer == id;
            if (got != view.buyer_demand(inst.buyers[id], price))
                throw InvariantError("reachable buyer not allocated her full demand");
        }
        for (const SoldEdge& s : handoff) event.sold.push_back(s);
        return event;
    }

    // Demand collapses just above p for budget reasons; sells at p + eps to
    // the buyers reachable from items that go unmatched at the higher price,
    // and retires those unmatched items.
    TraceEvent sell_limit(const Rat& p) {
        AugPrice above(p, 1);
        std::vector<int> universe =
            demanded_items(view, AugPrice(p), Split::Valuation, BuyerFilter::AtOrAbove);
        PrefGraph g = build_graph(view, above, Split::Valuation, BuyerFilter::AtOrAbove, universe);
        BMatching matching = max_bmatching(g);
        std::vector<int> stranded = matching.unmatched(universe);
        std::vector<int> reach = reachable_buyers(g, matching, stranded);
        std::set<int> reach_set(reach.begin(), reach.end());

        TraceEvent event;
        event.price = p;
        event.charge = above;
        event.procedure = "assign_limit";
        event.at_buyers = classify_buyers(view, AugPrice(p), Split::Valuation).at;
        event.free_buyers = reach;
        event.stranded = stranded;
        for (const auto& [buyer, item] : matching.edges)
            if (reach_set.count(buyer)) event.sold.push_back(SoldEdge{buyer, item, above});
        for (int id : reach) {
            long got = 0;
            for (const SoldEdge& s : event.sold) got += s.buyer == id;
            if (got != view.buyer_demand(inst.buyers[id], above))
                throw InvariantError("reachable buyer not allocated her full demand");
        }
        if (static_cast<long>(stranded.size()) > static_cast<long>(reach.size()))
            throw InvariantError("more stranded items than reachable buyers");
        for (int j : stranded) event.removed.push_back(RemovedItem{j, above});
        return event;
    }

    Outcome run() {
        Rat cursor(0);
        int guard = 2 * inst.item_count + 4;
        while (true) {
            auto crit = next_critical_price(view, cursor, Split::Valuation);
            if (!crit) break;
            if (--guard < 0) throw InvariantError("auction failed to make progress");
            Rat p = *crit;
            AugPrice price(p);
            std::vector<int> universe =
                demanded_items(view, price, Split::Valuation, BuyerFilter::AtOrAbove);
            PrefGraph g_all = build_graph(view, price, Split::Valuation, BuyerFilter::AtOrAbove, universe);
            BMatching m_full = max_bmatching(g_all);
            if (m_full.size() != static_cast<long>(universe.size()))
                throw InvariantError("demanded item unmatched at a critical price");
            PrefGraph g_above =
                build_graph(view, price, Split::Valuation, BuyerFilter::StrictlyAbove, universe);
            long size_above = max_bmatching(g_above).size();

            TraceEvent event =
                m_full.size() > size_above ? sell_exact(p, g_all, m_full) : sell_limit(p);
            prune_undemanded(p, event);
            commit(std::move(event));
            cursor = p;
        }
        return std::move(out);
    }
};

}  // namespace

Outcome run_auction_hb(const Instance& inst) {
    validate_instance(inst);
    if (classify_regime(inst.buyers) != Regime::HighBudget)
        throw RegimeError("auction requires every budget >= valuation");
    return HbRun(inst).run();
}

}  // namespace efp
