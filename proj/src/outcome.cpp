#include "efp/outcome.hpp"

#include "efp/errors.hpp"
#include "json.hpp"

namespace efp {

AugPrice Outcome::revenue() const {
    AugPrice total = AugPrice::zero();
    for (const AugPrice& p : payments) total += p;
    return total;
}

Rat Outcome::revenue_limit() const { return revenue().base; }

namespace {

using nlohmann::json;

json aug_to_json(const AugPrice& p) {
    return json{{"base", rat_str(p.base)}, {"eps", p.eps}};
}

AugPrice aug_from_json(const json& j) {
    if (!j.is_object() || !j.contains("base") || !j.contains("eps"))
        throw ParseError("price must be {base, eps}");
    auto r = rat_parse(j["base"].get<std::string>());
    if (!r) throw ParseError("bad rational: " + j["base"].get<std::string>());
    return AugPrice(*r, j["eps"].get<long>());
}

}  // namespace

std::string serialize_outcome(const Outcome& out, const std::optional<Rat>& concrete_eps) {
    json j;
    j["algorithm"] = out.algorithm;
    j["n"] = out.n;
    j["m"] = out.m;
    j["revenue"] = {{"limit", rat_str(out.revenue_limit())}, {"eps", out.revenue().eps}};
    if (concrete_eps) {
        j["epsilon"] = {{"mode", "concrete"}, {"value", rat_str(*concrete_eps)}};
        j["revenue"]["concrete"] = rat_str(concretize(out.revenue(), *concrete_eps));
    } else {
        j["epsilon"] = {{"mode", "limit"}};
    }
    j["allocation"] = out.allocation;
    j["payments"] = json::array();
    for (const AugPrice& p : out.payments) {
        json jp = aug_to_json(p);
        if (concrete_eps) jp["concrete"] = rat_str(concretize(p, *concrete_eps));
        j["payments"].push_back(std::move(jp));
    }
    j["item_prices"] = json::array();
    for (const auto& [item, price] : out.item_prices)
        j["item_prices"].push_back(json{{"item", item}, {"price", aug_to_json(price)}});
    j["trace"] = json::array();
    for (const TraceEvent& e : out.trace) {
        json je;
        je["price"] = rat_str(e.price);
        je["charge"] = aug_to_json(e.charge);
        je["procedure"] = e.procedure;
        je["component"] = e.component;
        je["at_buyers"] = e.at_buyers;
        je["free_buyers"] = e.free_buyers;
        je["stranded"] = e.stranded;
        je["sold"] = json::array();
        for (const SoldEdge& s : e.sold)
            je["sold"].push_back(json{{"buyer", s.buyer}, {"item", s.item}, {"charge", aug_to_json(s.charge)}});
        je["removed"] = json::array();
        for (const RemovedItem& r : e.removed)
            je["removed"].push_back(json{{"item", r.item}, {"price", aug_to_json(r.price)}});
        j["trace"].push_back(std::move(je));
    }
    return j.dump(2);
}

Outcome parse_outcome(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    Outcome out;
    try {
        out.algorithm = j.at("algorithm").get<std::string>();
        out.n = j.at("n").get<int>();
        out.m = j.at("m").get<int>();
        out.allocation = j.at("allocation").get<std::vector<std::vector<int>>>();
        for (const auto& jp : j.at("payments")) out.payments.push_back(aug_from_json(jp));
        for (const auto& ji : j.at("item_prices"))
            out.item_prices[ji.at("item").get<int>()] = aug_from_json(ji.at("price"));
        for (const auto& je : j.at("trace")) {
            TraceEvent e;
            auto r = rat_parse(je.at("price").get<std::string>());
            if (!r) throw ParseError("bad trace price");
            e.price = *r;
            e.charge = aug_from_json(je.at("charge"));
            e.procedure = je.at("procedure").get<std::string>();
            e.component = je.at("component").get<std::vector<int>>();
            e.at_buyers = je.at("at_buyers").get<std::vector<int>>();
            e.free_buyers = je.at("free_buyers").get<std::vector<int>>();
            e.stranded = je.at("stranded").get<std::vector<int>>();
            for (const auto& js : je.at("sold"))
                e.sold.push_back(SoldEdge{js.at("buyer").get<int>(), js.at("item").get<int>(),
                                          aug_from_json(js.at("charge"))});
            for (const auto& jr : je.at("removed"))
                e.removed.push_back(RemovedItem{jr.at("item").get<int>(), aug_from_json(jr.at("price"))});
            out.trace.push_back(std::move(e));
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed outcome report: ") + e.what());
    }
    if (static_cast<int>(out.allocation.size()) != out.n || static_cast<int>(out.payments.size()) != out.n)
        throw ParseError("outcome arrays do not match n");
    return out;
}

}  // namespace efp
