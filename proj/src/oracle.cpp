#include "efp/oracle.hpp"

#include <algorithm>
#include <optional>

#include "efp/errors.hpp"
#include "efp/matching.hpp"

namespace efp {

namespace {

struct AllocContext {
    const Instance& inst;
    const std::vector<int>& owner;          // item -> buyer or -1
    std::vector<std::vector<int>> bundles;  // per buyer
    std::vector<long> own;                  // |X_i| (bundles only hold preferred items)
    std::vector<Rat> upper;                 // min(b_i, v_i * own_i)
    std::vector<std::vector<long>> cross;   // |X_j ∩ S_i|

    AllocContext(const Instance& instance, const std::vector<int>& item_owner)
        : inst(instance), owner(item_owner) {
        int n = inst.n();
        bundles.assign(n, {});
        for (int j = 0; j < inst.item_count; ++j)
            if (owner[j] >= 0) bundles[owner[j]].push_back(j);
        own.assign(n, 0);
        upper.assign(n, Rat(0));
        for (int i = 0; i < n; ++i) {
            own[i] = static_cast<long>(bundles[i].size());
            upper[i] = std::min(inst.buyers[i].budget, Rat(inst.buyers[i].valuation * own[i]));
        }
        cross.assign(n, std::vector<long>(n, 0));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (i == j) continue;
                for (int item : bundles[j])
                    cross[i][j] +=
                        std::binary_search(inst.buyers[i].prefs.begin(), inst.buyers[i].prefs.end(), item);
            }
    }

    // Exact pairwise envy-freeness of a payment vector, strict guard.
    bool strictly_envy_free(const std::vector<Rat>& pay) const {
        int n = inst.n();
        for (int i = 0; i < n; ++i) {
            Rat mine = inst.buyers[i].valuation * own[i] - pay[i];
            for (int j = 0; j < n; ++j) {
                if (i == j || pay[j] > inst.buyers[i].budget) continue;
                if (mine < inst.buyers[i].valuation * cross[i][j] - pay[j]) return false;
            }
        }
        return true;
    }
};

struct Searcher {
    const Instance& inst;
    OracleResult best;
    bool have_best = false;
    std::vector<int> best_owner;

    explicit Searcher(const Instance& instance) : inst(instance) { best.optimal = Rat(0); }

    void offer(const AllocContext& ctx, const std::vector<Rat>& pay,
               const std::vector<std::pair<int, int>>& exempt) {
        Rat total(0);
        for (const Rat& p : pay) total += p;
        if (have_best) {
            if (total < best.optimal) return;
            if (total == best.optimal) {
                // Lexicographic witness tie-break: allocation, then payments.
                if (ctx.owner > best_owner) return;
                if (ctx.owner == best_owner && pay >= best.payments) return;
            }
        }
        have_best = true;
        best.optimal = total;
        best.allocation = ctx.bundles;
        best.payments = pay;
        best.exempt = exempt;
        best_owner = ctx.owner;
    }

    void search_allocation(const std::vector<int>& owner) {
        ++best.allocations_explored;
        AllocContext ctx(inst, owner);
        int n = inst.n();
        Rat bound(0);
        for (const Rat& u : ctx.upper) bound += u;
        if (have_best && bound < best.optimal) {
            ++best.branches_pruned;
            return;
        }

        // Difference constraints that can actually bind. Pairs with no
        // overlap are implied by the box bounds.
        struct Diff {
            int i, j;
            Rat c;  // p_i <= p_j + c
        };
        std::vector<Diff> diffs;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (i == j || ctx.cross[i][j] == 0) continue;
                Rat c = inst.buyers[i].valuation * (ctx.own[i] - ctx.cross[i][j]);
                if (c < ctx.upper[i]) diffs.push_back({i, j, c});
            }
        // Pairs whose budget guard can fire at all: p_j can exceed b_i.
        std::vector<std::pair<int, int>> branchable;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j && inst.buyers[i].budget < ctx.upper[j]) branchable.emplace_back(i, j);

        std::vector<char> exempt(branchable.size(), 1);
        dfs(ctx, diffs, branchable, exempt, 0);
    }

    // Greatest payment vector under the currently-constrained pairs;
    // nullopt when the difference system has no solution over [0, upper].
    std::optional<std::vector<Rat>> greatest(const AllocContext& ctx,
                                             const std::vector<std::pair<int, int>>& branchable,
                                             const std::vector<char>& exempt, std::size_t decided,
                                             const auto& diffs) {
        int n = inst.n();
        std::vector<Rat> pay = ctx.upper;
        std::vector<char> pair_exempt(n * n, 0);
        for (std::size_t t = 0; t < branchable.size(); ++t) {
            auto [i, j] = branchable[t];
            if (t >= decided || exempt[t])
                pair_exempt[i * n + j] = 1;
            else if (pay[j] > inst.buyers[i].budget)
                pay[j] = inst.buyers[i].budget;
        }
        for (int pass = 0; pass <= n + 1; ++pass) {
            bool changed = false;
            for (const auto& d : diffs) {
                if (pair_exempt[d.i * n + d.j]) continue;
                Rat cap = pay[d.j] + d.c;
                if (pay[d.i] > cap) {
                    pay[d.i] = cap;
                    changed = true;
                }
            }
            if (!changed) break;
            if (pass == n + 1) return std::nullopt;  // negative cycle
        }
        for (const Rat& p : pay)
            if (p < 0) return std::nullopt;
        return pay;
    }

    void dfs(const AllocContext& ctx, const auto& diffs,
             const std::vector<std::pair<int, int>>& branchable, std::vector<char>& exempt,
             std::size_t decided) {
        ++best.branches_explored;
        // Undecided pairs count as exempt: an upper bound for the subtree.
        auto pay = greatest(ctx, branchable, exempt, decided, diffs);
        if (!pay) {
            ++best.branches_pruned;
            return;
        }
        Rat total(0);
        for (const Rat& p : *pay) total += p;
        if (have_best && total < best.optimal) {
            ++best.branches_pruned;
            return;
        }
        if (decided == branchable.size()) {
            if (!ctx.strictly_envy_free(*pay)) return;
            std::vector<std::pair<int, int>> pattern;
            for (std::size_t t = 0; t < branchable.size(); ++t)
                if (exempt[t]) pattern.push_back(branchable[t]);
            offer(ctx, *pay, pattern);
            return;
        }
        exempt[decided] = 1;
        dfs(ctx, diffs, branchable, exempt, decided + 1);
        exempt[decided] = 0;
        dfs(ctx, diffs, branchable, exempt, decided + 1);
        exempt[decided] = 1;
    }
};

}  // namespace

OracleResult optimal_ef_revenue(const Instance& inst, const OracleCaps& caps) {
    validate_instance(inst);
    if (inst.n() > caps.max_n || inst.m() > caps.max_m)
        throw SizeCapError("oracle limited to n <= " + std::to_string(caps.max_n) +
                           ", m <= " + std::to_string(caps.max_m) +
                           "; got n = " + std::to_string(inst.n()) + ", m = " + std::to_string(inst.m()));

    // Odometer over per-item choices: each preferring buyer, then unsold.
    std::vector<std::vector<int>> choices(inst.item_count);
    for (const Buyer& b : inst.buyers)
        for (int j : b.prefs) choices[j].push_back(b.id);
    for (auto& c : choices) c.push_back(-1);

    Searcher searcher(inst);
    std::vector<std::size_t> digit(inst.item_count, 0);
    std::vector<int> owner(inst.item_count, -1);
    while (true) {
        for (int j = 0; j < inst.item_count; ++j) owner[j] = choices[j][digit[j]];
        searcher.search_allocation(owner);
        int j = 0;
        for (; j < inst.item_count; ++j) {
            if (++digit[j] < choices[j].size()) break;
            digit[j] = 0;
        }
        if (j == inst.item_count) break;
    }
    if (!searcher.have_best) {
        searcher.best.allocation.assign(inst.n(), {});
        searcher.best.payments.assign(inst.n(), Rat(0));
    }
    return std::move(searcher.best);
}

std::pair<Rat, Rat> best_fixed_price(const Instance& inst) {
    validate_instance(inst);
    MarketView view(inst);
    Rat best_price(0), best_revenue(0);
    for (const Rat& p : breakpoints(view)) {
        AugPrice price(p);
        long total = 0;
        PrefGraph g;
        g.price = price;
        g.total_items = inst.item_count;
        g.items.resize(inst.item_count);
        for (int j = 0; j < inst.item_count; ++j) g.items[j] = j;
        for (const Buyer& b : inst.buyers) {
            long d = demand(b.valuation, AugPrice(b.budget), price, static_cast<long>(b.prefs.size()));
            if (d <= 0) continue;
            g.buyers.push_back(b.id);
            g.capacity.push_back(d);
            g.adj.push_back(b.prefs);
            total += d;
        }
        if (total == 0) continue;
        if (max_bmatching(g).size() != total) continue;  // someone rationed: not envy-free
        Rat revenue = p * total;
        if (revenue > best_revenue) {
            best_revenue = revenue;
            best_price = p;
        }
    }
    return {best_price, best_revenue};
}

Rat harmonic(int n) {
    Rat h(0);
    for (int k = 1; k <= n; ++k) h += rat(1, k);
    return h;
}

}  // namespace efp
