#include "efp/instance.hpp"

#include <algorithm>
#include <set>

#include "json.hpp"

namespace efp {

std::string regime_name(Regime r) {
    switch (r) {
        case Regime::HighBudget: return "high-budget";
        case Regime::LowBudget: return "low-budget";
        case Regime::Mixed: return "mixed";
    }
    return "?";
}

Regime classify_regime(const std::vector<Buyer>& buyers) {
    bool all_high = true, all_low = true;
    for (const Buyer& b : buyers) {
        if (b.budget >= b.valuation)
            all_low = false;
        else
            all_high = false;
    }
    if (all_high) return Regime::HighBudget;
    if (all_low) return Regime::LowBudget;
    return Regime::Mixed;
}

void validate_instance(const Instance& inst) {
    if (inst.item_count < 0) throw ParseError("negative item count");
    for (std::size_t i = 0; i < inst.buyers.size(); ++i) {
        const Buyer& b = inst.buyers[i];
        if (b.id != static_cast<int>(i)) throw ParseError("buyer ids must be 0..n-1 in order");
        if (b.valuation <= 0) throw ParseError("buyer " + std::to_string(i) + ": valuation must be positive");
        if (b.budget < 0) throw ParseError("buyer " + std::to_string(i) + ": budget must be nonnegative");
        if (b.prefs.empty()) throw ParseError("buyer " + std::to_string(i) + ": empty preference set");
        if (!std::is_sorted(b.prefs.begin(), b.prefs.end())) throw ParseError("preference set not sorted");
        if (std::adjacent_find(b.prefs.begin(), b.prefs.end()) != b.prefs.end())
            throw ParseError("duplicate item in preference set");
        if (b.prefs.front() < 0 || b.prefs.back() >= inst.item_count)
            throw ParseError("buyer " + std::to_string(i) + ": preferred item out of range");
    }
    if (inst.regime != classify_regime(inst.buyers)) throw ParseError("regime tag inconsistent with buyer data");
}

long demand(const Rat& valuation, const AugPrice& budget, const AugPrice& price, long pref_cap) {
    if (price.base <= 0) throw std::domain_error("demand: price must be positive");
    if (price > AugPrice(valuation)) return 0;
    if (budget < price) return 0;
    Int by_budget = floor_div(budget, price);
    if (by_budget <= 0) return 0;
    if (by_budget >= pref_cap) return pref_cap;
    return by_budget.get_si();
}

MarketView::MarketView(const Instance& instance)
    : inst(&instance),
      item_left(instance.item_count, 1),
      served(instance.buyers.size(), 0) {
    budgets.reserve(instance.buyers.size());
    for (const Buyer& b : instance.buyers) budgets.emplace_back(b.budget, 0);
}

long MarketView::pref_cap(const Buyer& b) const {
    long c = 0;
    for (int j : b.prefs) c += item_left[j] ? 1 : 0;
    return c;
}

std::vector<int> MarketView::remaining_prefs(const Buyer& b) const {
    std::vector<int> out;
    for (int j : b.prefs)
        if (item_left[j]) out.push_back(j);
    return out;
}

long MarketView::buyer_demand(const Buyer& b, const AugPrice& price) const {
    return demand(b.valuation, budgets[b.id], price, pref_cap(b));
}

BuyerClasses classify_buyers(const MarketView& view, const AugPrice& price, Split split) {
    BuyerClasses out;
    for (const Buyer& b : view.inst->buyers) {
        if (view.buyer_demand(b, price) <= 0) continue;
        AugPrice key = split == Split::Valuation ? AugPrice(b.valuation) : view.budgets[b.id];
        int c = cmp(key, price);
        if (c > 0)
            out.above.push_back(b.id);
        else if (c == 0)
            out.at.push_back(b.id);
    }
    return out;
}

std::vector<Rat> breakpoints(const MarketView& view) {
    std::set<Rat> pts;
    for (const Buyer& b : view.inst->buyers) {
        if (b.valuation > 0) pts.insert(b.valuation);
        const Rat& rem = view.budgets[b.id].base;
        if (rem > 0) pts.insert(rem);
        Rat bound = std::max(b.valuation, rem);
        long cap = view.pref_cap(b);
        for (long k = 1; k <= cap; ++k) {
            Rat q = rem / k;
            if (q > 0 && q <= bound) pts.insert(q);
        }
    }
    return {pts.begin(), pts.end()};
}

Instance gen_lower_bound_instance(int n) {
    if (n < 1) throw std::invalid_argument("gen_lower_bound_instance: n must be >= 1");
    Instance inst;
    inst.item_count = n;
    for (int i = 0; i < n; ++i) {
        Buyer b;
        b.id = i;
        b.valuation = rat(n, n - i);
        b.budget = b.valuation;
        b.prefs = {i};
        inst.buyers.push_back(std::move(b));
    }
    inst.regime = Regime::HighBudget;
    return inst;
}

std::uint64_t SplitMix64::next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t SplitMix64::below(std::uint64_t bound) { return next() % bound; }

Instance gen_random_instance(int n, int m, Regime regime, std::uint64_t seed, const GenConfig& cfg) {
    if (n < 1 || m < 1) throw std::invalid_argument("gen_random_instance: n, m must be >= 1");
    SplitMix64 rng(seed ^ 0xa5a5a5a5deadbeefULL);
    auto draw_value = [&]() {
        long num = static_cast<long>(rng.below(cfg.value_max_num)) + 1;
        long den = static_cast<long>(rng.below(cfg.value_max_den)) + 1;
        return rat(num, den);
    };
    Instance inst;
    inst.item_count = m;
    for (int i = 0; i < n; ++i) {
        Buyer b;
        b.id = i;
        for (int j = 0; j < m; ++j)
            if (rng.below(2) == 0) b.prefs.push_back(j);
        if (b.prefs.empty()) b.prefs.push_back(static_cast<int>(rng.below(m)));
        switch (regime) {
            case Regime::HighBudget:
                b.valuation = draw_value();
                b.budget = draw_value();
                if (b.budget < b.valuation) b.budget = b.valuation;
                break;
            case Regime::LowBudget:
                // Need room below the valuation on the grid.
                do b.valuation = draw_value();
                while (b.valuation <= rat(1, cfg.value_max_den));
                do b.budget = draw_value();
                while (b.budget >= b.valuation);
                break;
            case Regime::Mixed:
                b.valuation = draw_value();
                b.budget = draw_value();
                break;
        }
        inst.buyers.push_back(std::move(b));
    }
    inst.regime = classify_regime(inst.buyers);
    return inst;
}

namespace {

Rat rat_from_json(const nlohmann::json& v, const char* what) {
    if (v.is_number_float()) throw ParseError(std::string(what) + ": floating point values are not accepted");
    if (v.is_number_integer()) return rat(v.get<long>());
    if (v.is_string()) {
        auto r = rat_parse(v.get<std::string>());
        if (!r) throw ParseError(std::string(what) + ": not a rational: " + v.get<std::string>());
        return *r;
    }
    throw ParseError(std::string(what) + ": expected rational string");
}

}  // namespace

Instance parse_instance(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("m") || !j.contains("buyers"))
        throw ParseError("instance must be an object with \"m\" and \"buyers\"");
    if (!j["m"].is_number_integer()) throw ParseError("\"m\" must be an integer");
    Instance inst;
    inst.item_count = j["m"].get<int>();
    if (!j["buyers"].is_array()) throw ParseError("\"buyers\" must be an array");
    int id = 0;
    for (const auto& jb : j["buyers"]) {
        if (!jb.is_object()) throw ParseError("buyer entries must be objects");
        Buyer b;
        b.id = id++;
        b.valuation = rat_from_json(jb.at("v"), "v");
        b.budget = rat_from_json(jb.at("b"), "b");
        if (!jb.contains("S") || !jb.at("S").is_array()) throw ParseError("\"S\" must be an array");
        for (const auto& js : jb.at("S")) {
            if (!js.is_number_integer()) throw ParseError("\"S\" entries must be integers");
            b.prefs.push_back(js.get<int>());
        }
        std::sort(b.prefs.begin(), b.prefs.end());
        b.prefs.erase(std::unique(b.prefs.begin(), b.prefs.end()), b.prefs.end());
        inst.buyers.push_back(std::move(b));
    }
    inst.regime = classify_regime(inst.buyers);
    validate_instance(inst);
    return inst;
}

std::string serialize_instance(const Instance& inst) {
    nlohmann::json j;
    j["m"] = inst.item_count;
    j["buyers"] = nlohmann::json::array();
    for (const Buyer& b : inst.buyers) {
        nlohmann::json jb;
        jb["v"] = rat_str(b.valuation);
        jb["b"] = rat_str(b.budget);
        jb["S"] = b.prefs;
        j["buyers"].push_back(std::move(jb));
    }
    return j.dump(2);
}

}  // namespace efp
