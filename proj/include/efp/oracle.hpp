#pragma once

#include <utility>
#include <vector>

#include "efp/instance.hpp"

namespace efp {

struct OracleResult {
    Rat optimal;
    std::vector<std::vector<int>> allocation;   // witness, per buyer
    std::vector<Rat> payments;                  // witness, per buyer
    std::vector<std::pair<int, int>> exempt;    // guard pattern: p_j > b_i assumed for (i, j)
    long allocations_explored = 0;
    long branches_explored = 0;
    long branches_pruned = 0;
};

struct OracleCaps {
    int max_n = 5;
    int max_m = 5;
};

// Maximum revenue over all individually-rational pairwise envy-free
// outcomes, by exhaustive search: enumerate allocations (each item goes to a
// buyer preferring it or stays unsold), then for each allocation find the
// greatest payment vector.
//
// The budget guard in the envy constraint (a bundle priced beyond my budget
// cannot be envied) is handled by branching per ordered pair: either the
// pair's envy constraint holds, or the envied payment exceeds the envier's
// budget. Within a branch the constraints are difference bounds plus boxes,
// whose feasible set is closed under componentwise max, so the greatest
// point is a Bellman fixpoint from the upper bounds. Every branch's greatest
// point is re-verified under the exact strict guard semantics before it may
// become the incumbent; the true optimum always survives this filter via
// the pattern it induces itself.
//
// Throws SizeCapError beyond the caps.
OracleResult optimal_ef_revenue(const Instance& inst, const OracleCaps& caps = {});

// Best uniform price: a price is admissible when some B-matching gives every
// positive-demand buyer exactly her demand; revenue is price times items
// sold. Scans the instance's breakpoints (revenue between breakpoints is
// dominated by the right endpoint). Returns the smallest maximizing price.
std::pair<Rat, Rat> best_fixed_price(const Instance& inst);

// Exact n-th harmonic number.
Rat harmonic(int n);

}  // namespace efp
