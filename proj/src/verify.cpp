#include "efp/verify.hpp"

#include <algorithm>

#include "efp/errors.hpp"
#include "json.hpp"

namespace efp {

int cmp(const Utility& a, const Utility& b) {
    if (a.neg_inf && b.neg_inf) return 0;
    if (a.neg_inf) return -1;
    if (b.neg_inf) return 1;
    return cmp(a.value, b.value);
}

Utility utility(const Buyer& buyer, const std::vector<int>& bundle, const AugPrice& payment) {
    if (payment > AugPrice(buyer.budget)) return Utility::minus_inf();
    long hits = 0;
    for (int j : bundle) hits += std::binary_search(buyer.prefs.begin(), buyer.prefs.end(), j);
    return Utility::of(AugPrice(buyer.valuation * hits, 0) - payment);
}

CheckResult check_feasibility(const Instance& inst, const Outcome& out) {
    if (out.n != inst.n() || out.m != inst.m())
        return CheckResult::fail("outcome dimensions do not match the instance");
    if (static_cast<int>(out.allocation.size()) != inst.n() ||
        static_cast<int>(out.payments.size()) != inst.n())
        return CheckResult::fail("outcome arrays do not match n");
    std::vector<int> owner(inst.item_count, -1);
    for (int i = 0; i < inst.n(); ++i) {
        for (int j : out.allocation[i]) {
            if (j < 0 || j >= inst.item_count)
                return CheckResult::fail("buyer " + std::to_string(i) + " holds unknown item " + std::to_string(j));
            if (owner[j] >= 0)
                return CheckResult::fail("item " + std::to_string(j) + " sold to buyers " +
                                         std::to_string(owner[j]) + " and " + std::to_string(i));
            owner[j] = i;
        }
        if (out.payments[i] < AugPrice::zero())
            return CheckResult::fail("buyer " + std::to_string(i) + " has negative payment");
        if (out.payments[i].eps < 0)
            return CheckResult::fail("buyer " + std::to_string(i) + " has negative eps charge");
        if (out.allocation[i].empty() && out.payments[i] != AugPrice::zero())
            return CheckResult::fail("buyer " + std::to_string(i) + " pays without items");
    }
    return CheckResult::pass();
}

CheckResult check_ir(const Instance& inst, const Outcome& out) {
    for (int i = 0; i < inst.n(); ++i) {
        Utility u = utility(inst.buyers[i], out.allocation[i], out.payments[i]);
        if (u.neg_inf)
            return CheckResult::fail("buyer " + std::to_string(i) + " pays beyond her budget");
        if (u.value < AugPrice::zero())
            return CheckResult::fail("buyer " + std::to_string(i) + " has negative utility " +
                                     aug_str(u.value));
    }
    return CheckResult::pass();
}

CheckResult check_item_price_ef(const Instance& inst, const Outcome& out) {
    // Complete price map: sale prices, then removal prices from the trace.
    std::map<int, AugPrice> price = out.item_prices;
    for (const TraceEvent& e : out.trace)
        for (const RemovedItem& r : e.removed) price.emplace(r.item, r.price);
    for (int i = 0; i < inst.n(); ++i)
        for (int j : out.allocation[i])
            if (!out.item_prices.count(j))
                throw ParseError("sold item " + std::to_string(j) + " carries no price");

    for (int i = 0; i < inst.n(); ++i) {
        const Buyer& b = inst.buyers[i];
        std::vector<AugPrice> tags;
        for (int j : b.prefs) {
            auto it = price.find(j);
            if (it != price.end()) tags.push_back(it->second);
        }
        std::sort(tags.begin(), tags.end(),
                  [](const AugPrice& x, const AugPrice& y) { return cmp(x, y) < 0; });
        Utility own = utility(b, out.allocation[i], out.payments[i]);
        AugPrice cost = AugPrice::zero();
        Utility best = Utility::of(AugPrice::zero());
        long best_k = 0;
        for (std::size_t k = 0; k < tags.size(); ++k) {
            cost += tags[k];
            if (cost > AugPrice(b.budget)) break;
            Utility u = Utility::of(AugPrice(b.valuation * static_cast<long>(k + 1), 0) - cost);
            if (u > best) {
                best = u;
                best_k = static_cast<long>(k + 1);
            }
        }
        if (own < best)
            return CheckResult::fail("buyer " + std::to_string(i) + " would gain " +
                                     aug_str(best.value) + " from the " + std::to_string(best_k) +
                                     " cheapest preferred items but has " +
                                     (own.neg_inf ? std::string("-inf") : aug_str(own.value)));
    }
    return CheckResult::pass();
}

CheckResult check_pairwise_ef(const Instance& inst, const Outcome& out) {
    for (int i = 0; i < inst.n(); ++i) {
        Utility own = utility(inst.buyers[i], out.allocation[i], out.payments[i]);
        for (int j = 0; j < inst.n(); ++j) {
            if (i == j) continue;
            Utility other = utility(inst.buyers[i], out.allocation[j], out.payments[j]);
            if (own < other)
                return CheckResult::fail("buyer " + std::to_string(i) + " prefers buyer " +
                                         std::to_string(j) + "'s bundle: " + aug_str(other.value) +
                                         " > " + (own.neg_inf ? std::string("-inf") : aug_str(own.value)));
        }
    }
    return CheckResult::pass();
}

std::pair<Rat, AugPrice> outcome_revenue(const Outcome& out) {
    AugPrice total = out.revenue();
    return {total.base, total};
}

VerifierReport verify_outcome(const Instance& inst, const Outcome& out) {
    VerifierReport report;
    report.feasibility = check_feasibility(inst, out);
    report.ir = check_ir(inst, out);
    if (out.algorithm == "hb") {
        report.ef_kind = "item-price";
        report.ef = check_item_price_ef(inst, out);
    } else {
        report.ef_kind = "pairwise";
        report.ef = check_pairwise_ef(inst, out);
    }
    report.revenue = out.revenue();
    report.revenue_limit = report.revenue.base;
    return report;
}

std::string serialize_report(const VerifierReport& report) {
    nlohmann::json j;
    auto put = [&](const char* key, const CheckResult& c) {
        j[key] = {{"ok", c.ok}};
        if (!c.ok) j[key]["witness"] = c.witness;
    };
    put("feasibility", report.feasibility);
    put("ir", report.ir);
    put("ef", report.ef);
    j["ef_kind"] = report.ef_kind;
    j["revenue"] = {{"limit", rat_str(report.revenue_limit)}, {"eps", report.revenue.eps}};
    j["ok"] = report.ok();
    return j.dump(2);
}

}  // namespace efp
