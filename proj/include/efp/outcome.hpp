#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "efp/aug_price.hpp"
#include "efp/instance.hpp"

namespace efp {

struct SoldEdge {
    int buyer;
    int item;
    AugPrice charge;
};

struct RemovedItem {
    int item;
    AugPrice price;  // price at which the item left the market unsold
};

// One critical-price event. `procedure` records which selling rule fired:
//   "assign_exact"  - demand collapse at the price itself; items charged p
//   "assign_limit"  - budget-driven collapse; items charged p + eps
//   "skip_q"        - low-budget branch serving only above-price buyers
//   "unit_each"     - low-budget branch giving every group buyer one item
//   "fallback"      - unit allocation infeasible, served above-price side
struct TraceEvent {
    Rat price;
    AugPrice charge;
    std::string procedure;
    std::vector<int> component;   // low-budget: the buyer group processed
    std::vector<int> at_buyers;   // buyers exactly at the price (positive demand)
    std::vector<int> free_buyers; // buyers reachable from unmatched items
    std::vector<int> stranded;    // items unmatched in the reference matching
    std::vector<SoldEdge> sold;
    std::vector<RemovedItem> removed;
};

struct Outcome {
    std::string algorithm;  // "hb" or "lb"
    int n = 0;
    int m = 0;
    std::vector<std::vector<int>> allocation;  // per buyer, sorted item ids
    std::vector<AugPrice> payments;            // per buyer
    std::map<int, AugPrice> item_prices;       // per sold item; hb runs only
    std::vector<TraceEvent> trace;

    AugPrice revenue() const;
    Rat revenue_limit() const;  // eps -> 0
};

// With a concrete epsilon the report additionally renders every payment and
// the revenue at that epsilon; the default reports the eps -> 0 limit only.
std::string serialize_outcome(const Outcome& out,
                              const std::optional<Rat>& concrete_eps = std::nullopt);
// Companion to serialize_outcome; rejects structurally invalid reports.
Outcome parse_outcome(const std::string& json_text);

}  // namespace efp
