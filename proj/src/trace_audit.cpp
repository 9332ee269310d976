#include "efp/trace_audit.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "efp/auction_lb.hpp"
#include "efp/matching.hpp"

namespace efp {

namespace {

using Fail = CheckResult;

bool in_prefs(const Buyer& b, int item) {
    return std::binary_search(b.prefs.begin(), b.prefs.end(), item);
}

std::map<int, std::vector<int>> event_bundles(const TraceEvent& e) {
    std::map<int, std::vector<int>> bundles;
    for (const SoldEdge& s : e.sold) bundles[s.buyer].push_back(s.item);
    return bundles;
}

// Shared replay skeleton: walks events, validates state transitions, and
// calls the per-event hook with the pre-event market state.
template <typename Hook>
CheckResult replay(const Instance& inst, const Outcome& out, Hook&& hook) {
    MarketView view(inst);
    std::vector<AugPrice> paid(inst.n(), AugPrice::zero());
    std::vector<std::vector<int>> got(inst.n());
    Rat last_price(0);
    for (std::size_t idx = 0; idx < out.trace.size(); ++idx) {
        const TraceEvent& e = out.trace[idx];
        if (e.price < last_price) return Fail::fail("event prices not ascending");
        last_price = e.price;
        if (e.sold.empty() && e.removed.empty()) return Fail::fail("event without effect");
        for (const SoldEdge& s : e.sold) {
            if (!view.item_left[s.item]) return Fail::fail("item sold twice");
            if (!in_prefs(inst.buyers[s.buyer], s.item))
                return Fail::fail("buyer sold an item outside her preference set");
            if (s.charge != e.charge) return Fail::fail("sale charge differs from event charge");
        }
        for (const RemovedItem& r : e.removed)
            if (!view.item_left[r.item]) return Fail::fail("item removed twice");

        CheckResult c = hook(e, view);
        if (!c.ok) return c;

        for (const SoldEdge& s : e.sold) {
            view.item_left[s.item] = 0;
            view.budgets[s.buyer] -= s.charge;
            view.served[s.buyer] = 1;
            paid[s.buyer] += s.charge;
            got[s.buyer].push_back(s.item);
        }
        for (const RemovedItem& r : e.removed) view.item_left[r.item] = 0;
    }
    for (int i = 0; i < inst.n(); ++i) {
        std::sort(got[i].begin(), got[i].end());
        if (got[i] != out.allocation[i]) return Fail::fail("allocation differs from trace sales");
        if (paid[i] != out.payments[i]) return Fail::fail("payments differ from trace sales");
    }
    return Fail::pass();
}

CheckResult audit_hb(const Instance& inst, const Outcome& out) {
    // One price per buyer across the whole run.
    for (int i = 0; i < inst.n(); ++i) {
        for (int j : out.allocation[i]) {
            auto it = out.item_prices.find(j);
            if (it == out.item_prices.end()) return Fail::fail("sold item carries no price");
            if (it->second != out.item_prices.at(out.allocation[i].front()))
                return Fail::fail("buyer " + std::to_string(i) + " pays two different prices");
        }
        if (!out.allocation[i].empty()) {
            AugPrice per = out.item_prices.at(out.allocation[i].front());
            if (per.scaled(static_cast<long>(out.allocation[i].size())) != out.payments[i])
                return Fail::fail("payment is not items times per-item price");
        }
    }

    CheckResult r = replay(inst, out, [&](const TraceEvent& e, const MarketView& view) {
        AugPrice charge = e.charge;
        std::set<int> free_set(e.free_buyers.begin(), e.free_buyers.end());
        auto bundles = event_bundles(e);
        if (e.procedure == "assign_exact") {
            if (charge != AugPrice(e.price)) return Fail::fail("exact event charged off-price");
            // Stranded items all sold, to at-price buyers.
            std::set<int> at_set(e.at_buyers.begin(), e.at_buyers.end());
            for (int j : e.stranded) {
                bool sold_to_at = false;
                for (const SoldEdge& s : e.sold) sold_to_at |= s.item == j && at_set.count(s.buyer) > 0;
                if (!sold_to_at) return Fail::fail("stranded item not handed to an at-price buyer");
            }
            for (const SoldEdge& s : e.sold) {
                bool is_stranded =
                    std::find(e.stranded.begin(), e.stranded.end(), s.item) != e.stranded.end();
                if (!is_stranded && !free_set.count(s.buyer))
                    return Fail::fail("matched item sold to an unreachable buyer");
            }
        } else if (e.procedure == "assign_limit") {
            if (charge != AugPrice(e.price, 1)) return Fail::fail("limit event not charged above price");
            if (e.stranded.size() > e.free_buyers.size())
                return Fail::fail("more stranded items than reachable buyers at " + rat_str(e.price));
            for (int j : e.stranded) {
                bool removed = false;
                for (const RemovedItem& rem : e.removed) removed |= rem.item == j;
                if (!removed) return Fail::fail("stranded item not removed at a limit event");
            }
            for (const SoldEdge& s : e.sold)
                if (!free_set.count(s.buyer)) return Fail::fail("limit sale to an unreachable buyer");
        } else {
            return Fail::fail("unknown procedure " + e.procedure);
        }
        // Reachable buyers receive exactly their demand at the charge.
        for (int id : e.free_buyers) {
            long want = view.buyer_demand(inst.buyers[id], charge);
            long have = bundles.count(id) ? static_cast<long>(bundles[id].size()) : 0;
            if (want != have)
                return Fail::fail("reachable buyer " + std::to_string(id) + " got " +
                                  std::to_string(have) + " items, demand " + std::to_string(want));
        }
        return Fail::pass();
    });
    if (!r.ok) return r;

    // No preferred item ever sold below a served buyer's own price, and
    // unserved buyers priced out at their valuation or above.
    for (int i = 0; i < inst.n(); ++i) {
        const Buyer& b = inst.buyers[i];
        if (!out.allocation[i].empty()) {
            AugPrice mine = out.item_prices.at(out.allocation[i].front());
            for (const TraceEvent& e : out.trace)
                for (const SoldEdge& s : e.sold)
                    if (in_prefs(b, s.item) && s.charge < mine)
                        return Fail::fail("buyer " + std::to_string(i) +
                                          "'s preferred item sold below her price");
        } else {
            for (const TraceEvent& e : out.trace) {
                for (const SoldEdge& s : e.sold)
                    if (in_prefs(b, s.item) && s.charge < AugPrice(b.valuation))
                        return Fail::fail("unserved buyer " + std::to_string(i) +
                                          " saw item " + std::to_string(s.item) + " sell below value");
                for (const RemovedItem& rem : e.removed)
                    if (in_prefs(b, rem.item) && rem.price < AugPrice(b.valuation))
                        return Fail::fail("unserved buyer " + std::to_string(i) +
                                          " saw item " + std::to_string(rem.item) + " removed below value");
            }
        }
    }
    return Fail::pass();
}

CheckResult audit_lb(const Instance& inst, const Outcome& out) {
    std::vector<int> branch_of(inst.n(), -1);  // 0 skip_q, 1 unit, 2 fallback
    std::vector<AugPrice> utility(inst.n(), AugPrice::zero());
    CheckResult r = replay(inst, out, [&](const TraceEvent& e, const MarketView& view) {
        std::set<int> at_set(e.at_buyers.begin(), e.at_buyers.end());
        std::set<int> free_set(e.free_buyers.begin(), e.free_buyers.end());
        auto bundles = event_bundles(e);
        AugPrice price(e.price);
        AugPrice above(e.price, 1);

        for (int id : e.at_buyers)
            if (view.budgets[id] != price) return Fail::fail("at-price buyer with different budget");
        std::vector<int> need;
        for (int id : e.component)
            if (!view.served[id]) need.push_back(id);

        AugPrice at_mass = AugPrice::zero();
        for (int id : e.at_buyers)
            if (!view.served[id]) at_mass += view.budgets[id];
        AugPrice reach_mass = AugPrice::zero();
        for (int id : e.free_buyers) reach_mass += view.budgets[id];

        int branch;
        bool unit_sale = e.procedure == "unit_each" || e.procedure == "unit_partial";
        if (e.procedure == "skip_q") {
            branch = 0;
            if (!(at_mass < reach_mass)) return Fail::fail("skip_q branch with heavy at-price side");
        } else if (unit_sale) {
            branch = 1;
            if (at_mass < reach_mass) return Fail::fail("unit branch with light at-price side");
            if (e.charge != price) return Fail::fail("unit event charged off-price");
            UnitPlan plan = plan_unit_sale(view, utility, need, e.price);
            std::set<int> sellers;
            for (const SoldEdge& s : e.sold)
                if (!sellers.insert(s.buyer).second)
                    return Fail::fail("unit event sold two items to one buyer");
            if (sellers != std::set<int>(plan.sellers.begin(), plan.sellers.end()))
                return Fail::fail("unit event does not serve the plan's subgroup");
            bool full = plan.sellers.size() == need.size();
            if (full != (e.procedure == "unit_each"))
                return Fail::fail("unit event coverage mislabelled");
        } else if (e.procedure == "fallback") {
            branch = 2;
            if (at_mass < reach_mass) return Fail::fail("fallback branch with light at-price side");
            if (need.empty()) return Fail::fail("fallback with nobody left to serve");
            // No subgroup was safely servable one item each.
            if (!plan_unit_sale(view, utility, need, e.price).sellers.empty())
                return Fail::fail("fallback event had a feasible unit assignment");
        } else if (e.procedure == "sweep") {
            branch = -1;
            if (!need.empty() || !e.sold.empty()) return Fail::fail("sweep event with live group members");
        } else {
            return Fail::fail("unknown procedure " + e.procedure);
        }

        if (branch >= 0 && !unit_sale) {
            if (e.charge != above) return Fail::fail("above-price event with wrong charge");
            for (const SoldEdge& s : e.sold)
                if (!free_set.count(s.buyer)) return Fail::fail("above-price sale to unreachable buyer");
            for (int id : e.free_buyers) {
                long want = view.buyer_demand(inst.buyers[id], above);
                long have = bundles.count(id) ? static_cast<long>(bundles[id].size()) : 0;
                if (want != have) return Fail::fail("reachable buyer not sold her demand");
            }
            for (int j : e.stranded) {
                bool removed = false;
                for (const RemovedItem& rem : e.removed) removed |= rem.item == j;
                if (!removed) return Fail::fail("stranded item kept at an above-price event");
            }
        }

        // Branch classification: nobody is classified twice over the run. A
        // partial unit sale classifies only its sellers; the rest of the
        // group is settled by a later pass at the same price.
        if (branch >= 0) {
            for (int id : e.component) {
                if (view.served[id]) continue;
                if (!at_set.count(id) && !free_set.count(id)) continue;
                if (e.procedure == "unit_partial" && !bundles.count(id)) continue;
                if (branch_of[id] != -1) return Fail::fail("buyer classified by two branches");
                branch_of[id] = branch;
            }
        }
        for (const SoldEdge& s : e.sold)
            utility[s.buyer] += AugPrice(inst.buyers[s.buyer].valuation) - s.charge;
        return Fail::pass();
    });
    if (!r.ok) return r;

    // Every served buyer was classified by the branch that first served her.
    for (int i = 0; i < inst.n(); ++i)
        if (!out.allocation[i].empty() && branch_of[i] == -1)
            return Fail::fail("served buyer never classified by a branch");

    // Unserved buyers only saw their items sell strictly above their budget.
    for (int i = 0; i < inst.n(); ++i) {
        const Buyer& b = inst.buyers[i];
        if (!out.allocation[i].empty()) continue;
        for (const TraceEvent& e : out.trace)
            for (const SoldEdge& s : e.sold)
                if (in_prefs(b, s.item) && !(s.charge > AugPrice(b.budget)))
                    return Fail::fail("unserved buyer " + std::to_string(i) + " saw item " +
                                      std::to_string(s.item) + " sell within her budget");
    }

    // A buyer with positive demand at the sale price where one of her items
    // sells is served at that event, unless she bought at an earlier price.
    {
        MarketView view(inst);
        for (const TraceEvent& e : out.trace) {
            auto bundles = event_bundles(e);
            for (int i = 0; i < inst.n(); ++i) {
                const Buyer& b = inst.buyers[i];
                if (view.served[i] || bundles.count(i)) continue;
                if (view.buyer_demand(b, e.charge) <= 0) continue;
                for (const SoldEdge& s : e.sold)
                    if (in_prefs(b, s.item))
                        return Fail::fail("buyer " + std::to_string(i) +
                                          " demanded at " + aug_str(e.charge) +
                                          " but was left out of the event");
            }
            for (const SoldEdge& s : e.sold) {
                view.item_left[s.item] = 0;
                view.budgets[s.buyer] -= s.charge;
                view.served[s.buyer] = 1;
            }
            for (const RemovedItem& rem : e.removed) view.item_left[rem.item] = 0;
        }
    }

    // Within one event, no buyer can afford and prefer another buyer's
    // event bundle.
    {
        MarketView view(inst);
        for (const TraceEvent& e : out.trace) {
            auto bundles = event_bundles(e);
            for (const auto& [i, mine] : bundles) {
                const Buyer& b = inst.buyers[i];
                long my_hits = 0;
                for (int j : mine) my_hits += in_prefs(b, j);
                AugPrice my_pay = e.charge.scaled(static_cast<long>(mine.size()));
                for (const auto& [k, theirs] : bundles) {
                    if (k == i) continue;
                    AugPrice their_pay = e.charge.scaled(static_cast<long>(theirs.size()));
                    if (their_pay > view.budgets[i]) continue;
                    long hits = 0;
                    for (int j : theirs) hits += in_prefs(b, j);
                    AugPrice mine_u = AugPrice(b.valuation * my_hits, 0) - my_pay;
                    AugPrice theirs_u = AugPrice(b.valuation * hits, 0) - their_pay;
                    if (mine_u < theirs_u)
                        return Fail::fail("buyer " + std::to_string(i) +
                                          " prefers a same-event bundle of buyer " + std::to_string(k));
                }
            }
            for (const SoldEdge& s : e.sold) {
                view.item_left[s.item] = 0;
                view.budgets[s.buyer] -= s.charge;
                view.served[s.buyer] = 1;
            }
            for (const RemovedItem& rem : e.removed) view.item_left[rem.item] = 0;
        }
    }
    return Fail::pass();
}

}  // namespace

CheckResult audit_trace(const Instance& inst, const Outcome& out) {
    CheckResult feas = check_feasibility(inst, out);
    if (!feas.ok) return feas;
    if (out.algorithm == "hb") return audit_hb(inst, out);
    if (out.algorithm == "lb") return audit_lb(inst, out);
    return CheckResult::fail("unknown algorithm " + out.algorithm);
}

}  // namespace efp
