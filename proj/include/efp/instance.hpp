#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "efp/aug_price.hpp"
#include "efp/errors.hpp"
#include "efp/rational.hpp"

namespace efp {

enum class Regime { HighBudget, LowBudget, Mixed };

std::string regime_name(Regime r);

struct Buyer {
    int id = 0;
    Rat valuation;           // per-item value over the preference set, > 0
    Rat budget;              // initial budget, >= 0
    std::vector<int> prefs;  // sorted, unique item ids
};

struct Instance {
    int item_count = 0;
    std::vector<Buyer> buyers;
    Regime regime = Regime::Mixed;

    int n() const { return static_cast<int>(buyers.size()); }
    int m() const { return item_count; }
};

// HighBudget iff every buyer has budget >= valuation, LowBudget iff every
// buyer has budget < valuation, Mixed otherwise. Empty instances classify
// as HighBudget (both conditions hold vacuously).
Regime classify_regime(const std::vector<Buyer>& buyers);

// Throws ParseError on structural violations (empty preference set, item out
// of range, nonpositive valuation, negative budget, regime tag inconsistent
// with the data).
void validate_instance(const Instance& inst);

// ---------------------------------------------------------------------------
// Demand and buyer classification

// Number of items maximizing the buyer's utility when every preferred item
// is priced at `price`: 0 above the valuation, otherwise
// min(floor(budget/price), pref_cap). The valuation comparison is
// lexicographic, so price = v + eps yields 0.
long demand(const Rat& valuation, const AugPrice& budget, const AugPrice& price, long pref_cap);

enum class Split { Valuation, Budget };

// Mutable per-run market state: which items are still unsold and what is
// left of each budget. Instances themselves are immutable.
struct MarketView {
    const Instance* inst = nullptr;
    std::vector<char> item_left;     // size m
    std::vector<AugPrice> budgets;   // remaining, size n
    std::vector<char> served;        // ever allocated, size n

    explicit MarketView(const Instance& instance);

    long pref_cap(const Buyer& b) const;
    std::vector<int> remaining_prefs(const Buyer& b) const;
    long buyer_demand(const Buyer& b, const AugPrice& price) const;
};

struct BuyerClasses {
    std::vector<int> above;  // strictly above the price, positive demand
    std::vector<int> at;     // exactly at the price, positive demand
};

// Valuation split compares v_i with the price, budget split compares the
// remaining budget with the price. Demands always use remaining budgets and
// remaining preferred items.
BuyerClasses classify_buyers(const MarketView& view, const AugPrice& price, Split split);

// Every price where some demand can change value: all v_i, all remaining
// budgets b_i, and all b_i/k for k = 1..|S_i ∩ remaining| with
// b_i/k <= max(v_i, b_i). Sorted ascending, deduplicated. Between
// consecutive entries all demands, and hence all matching sizes, are
// constant.
std::vector<Rat> breakpoints(const MarketView& view);

// ---------------------------------------------------------------------------
// Generators

// n buyers and n items with S_i = {i} and v_i = b_i = n/(n-i), i = 0..n-1
// (so valuations run 1, ..., n/2, n). Disjoint singleton markets whose
// optimal revenue n*H_n beats every fixed price by a harmonic factor.
Instance gen_lower_bound_instance(int n);

struct GenConfig {
    int value_max_num = 20;  // numerators drawn from 1..value_max_num
    int value_max_den = 4;   // denominators drawn from 1..value_max_den
};

// Deterministic in (n, m, regime, seed). HighBudget forces b >= v,
// LowBudget forces b < v, Mixed draws freely; the returned regime tag is
// always the classification of the drawn data.
Instance gen_random_instance(int n, int m, Regime regime, std::uint64_t seed,
                             const GenConfig& cfg = {});

// ---------------------------------------------------------------------------
// JSON instance files: {"m": int, "buyers": [{"v": "3/2", "b": "2", "S": [0, 1]}]}
// Rationals are "num/den" or integer strings; floats are rejected.

Instance parse_instance(const std::string& json_text);
std::string serialize_instance(const Instance& inst);

// Small deterministic PRNG so generated corpora do not depend on the
// standard library's distribution implementations.
struct SplitMix64 {
    std::uint64_t state;
    explicit SplitMix64(std::uint64_t seed) : state(seed) {}
    std::uint64_t next();
    // Uniform in [0, bound), bound >= 1.
    std::uint64_t below(std::uint64_t bound);
};

}  // namespace efp
