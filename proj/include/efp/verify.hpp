#pragma once

#include <string>
#include <utility>

#include "efp/instance.hpp"
#include "efp/outcome.hpp"

namespace efp {

// Extended utility value: an exact quantity, or minus infinity once the
// payment exceeds the budget. Distinct marker, never a sentinel number.
struct Utility {
    bool neg_inf = false;
    AugPrice value;

    static Utility minus_inf() { return {true, AugPrice::zero()}; }
    static Utility of(AugPrice v) { return {false, std::move(v)}; }
};

int cmp(const Utility& a, const Utility& b);
inline bool operator<(const Utility& a, const Utility& b) { return cmp(a, b) < 0; }
inline bool operator>(const Utility& a, const Utility& b) { return cmp(a, b) > 0; }
inline bool operator>=(const Utility& a, const Utility& b) { return cmp(a, b) >= 0; }

// valuation * |bundle ∩ prefs| - payment while the payment stays within the
// buyer's original budget, minus infinity beyond it.
Utility utility(const Buyer& buyer, const std::vector<int>& bundle, const AugPrice& payment);

struct CheckResult {
    bool ok = true;
    std::string witness;  // first violation, human readable

    static CheckResult pass() { return {}; }
    static CheckResult fail(std::string w) { return {false, std::move(w)}; }
};

// Sold bundles are pairwise disjoint, items exist, payments are sane.
CheckResult check_feasibility(const Instance& inst, const Outcome& out);

// No buyer ends with negative utility.
CheckResult check_ir(const Instance& inst, const Outcome& out);

// Item-pricing envy-freeness: under the outcome's per-item prices (sold
// items at their sale price, removed items at their removal price, leftover
// items unavailable) every buyer's bundle maximizes her utility. The best
// bundle at fixed prices is found by the count sweep: sort the buyer's
// priced preferred items by price and take the best affordable prefix.
// Throws ParseError when a sold item carries no price.
CheckResult check_item_price_ef(const Instance& inst, const Outcome& out);

// Bundle-pricing (pairwise) envy-freeness: every buyer weakly prefers her
// own bundle-payment pair to every other buyer's.
CheckResult check_pairwise_ef(const Instance& inst, const Outcome& out);

std::pair<Rat, AugPrice> outcome_revenue(const Outcome& out);

struct VerifierReport {
    CheckResult feasibility;
    CheckResult ir;
    CheckResult ef;
    std::string ef_kind;  // "item-price" or "pairwise"
    Rat revenue_limit;
    AugPrice revenue;

    bool ok() const { return feasibility.ok && ir.ok && ef.ok; }
};

// Runs the checks matching the outcome's algorithm (item-price EF for hb,
// pairwise EF for lb).
VerifierReport verify_outcome(const Instance& inst, const Outcome& out);

std::string serialize_report(const VerifierReport& report);

}  // namespace efp
