#include "efp/cli.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "efp/auction_hb.hpp"
#include "efp/auction_lb.hpp"
#include "efp/errors.hpp"
#include "efp/oracle.hpp"
#include "efp/trace_audit.hpp"
#include "efp/verify.hpp"
#include "json.hpp"

namespace efp {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 2;
constexpr int kExitParse = 3;
constexpr int kExitRegime = 4;
constexpr int kExitSizeCap = 5;

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text << "\n";
    } else {
        std::ofstream out(out_path);
        if (!out) throw ParseError("cannot write " + out_path);
        out << text << "\n";
    }
}

Regime parse_regime(const std::string& name) {
    if (name == "hb") return Regime::HighBudget;
    if (name == "lb") return Regime::LowBudget;
    if (name == "mixed") return Regime::Mixed;
    throw ParseError("unknown regime " + name);
}

Outcome dispatch_auction(const Instance& inst, const std::string& algo) {
    if (algo == "hb") return run_auction_hb(inst);
    if (algo == "lb") return run_auction_lb(inst);
    if (algo != "auto") throw ParseError("unknown algorithm " + algo);
    switch (inst.regime) {
        case Regime::HighBudget: return run_auction_hb(inst);
        case Regime::LowBudget: return run_auction_lb(inst);
        case Regime::Mixed: break;
    }
    throw RegimeError("mixed instance: no auction applies, pick --algo explicitly");
}

// Largest epsilon the symbolic trace stays faithful for: half the smallest
// gap between distinct breakpoints, spread over the n*m charges a run can
// accumulate.
std::optional<Rat> validate_concrete_eps(const Instance& inst, const std::string& spec) {
    if (spec == "limit") return std::nullopt;
    auto eps = rat_parse(spec);
    if (!eps || *eps <= 0) throw ParseError("--eps expects 'limit' or a positive rational");
    long cells = static_cast<long>(inst.n()) * inst.m();
    if (cells == 0) return eps;
    MarketView view(inst);
    std::vector<Rat> pts = breakpoints(view);
    Rat bound = pts.empty() ? Rat(1) : pts.front();
    for (std::size_t i = 1; i < pts.size(); ++i) bound = std::min(bound, Rat(pts[i] - pts[i - 1]));
    bound = bound / 2 / cells;
    if (*eps >= bound)
        throw ParseError("--eps " + spec + " too large; needs a value below " + rat_str(bound));
    return eps;
}

struct InstanceChecks {
    VerifierReport report;
    CheckResult audit;
    bool ok() const { return report.ok() && audit.ok; }
    std::string first_failure() const {
        if (!report.feasibility.ok) return "feasibility: " + report.feasibility.witness;
        if (!report.ir.ok) return "ir: " + report.ir.witness;
        if (!report.ef.ok) return "ef: " + report.ef.witness;
        if (!audit.ok) return "trace: " + audit.witness;
        return "";
    }
};

InstanceChecks check_outcome(const Instance& inst, const Outcome& out) {
    InstanceChecks c;
    c.report = verify_outcome(inst, out);
    c.audit = audit_trace(inst, out);
    return c;
}

int cmd_run(const std::string& instance_path, const std::string& algo, const std::string& eps_spec,
            const std::string& out_path, bool verify) {
    Instance inst = parse_instance(slurp(instance_path));
    auto eps = validate_concrete_eps(inst, eps_spec);
    Outcome out = dispatch_auction(inst, algo);
    std::cout << "revenue " << rat_str(out.revenue_limit()) << "\n";
    emit(serialize_outcome(out, eps), out_path);
    if (verify) {
        InstanceChecks checks = check_outcome(inst, out);
        if (!checks.ok()) {
            std::cerr << "verification failed: " << checks.first_failure() << "\n";
            std::cerr << serialize_report(checks.report) << "\n";
            return kExitViolation;
        }
    }
    return kExitOk;
}

int cmd_verify(const std::string& instance_path, const std::string& report_path) {
    Instance inst = parse_instance(slurp(instance_path));
    Outcome out = parse_outcome(slurp(report_path));
    InstanceChecks checks = check_outcome(inst, out);
    std::cout << serialize_report(checks.report) << "\n";
    if (!checks.audit.ok) std::cerr << "trace audit: " << checks.audit.witness << "\n";
    return checks.ok() ? kExitOk : kExitViolation;
}

int cmd_oracle(const std::string& instance_path, const std::string& cap_spec,
               const std::string& out_path) {
    Instance inst = parse_instance(slurp(instance_path));
    OracleCaps caps;
    if (!cap_spec.empty() &&
        sscanf(cap_spec.c_str(), "%d,%d", &caps.max_n, &caps.max_m) != 2)
        throw ParseError("--oracle-cap expects n,m");
    OracleResult res = optimal_ef_revenue(inst, caps);
    nlohmann::json j;
    j["optimal"] = rat_str(res.optimal);
    j["optimal_decimal"] = rat_decimal(res.optimal);
    j["allocation"] = res.allocation;
    j["payments"] = nlohmann::json::array();
    for (const Rat& p : res.payments) j["payments"].push_back(rat_str(p));
    j["exempt_pairs"] = res.exempt;
    j["stats"] = {{"allocations", res.allocations_explored},
                  {"branches", res.branches_explored},
                  {"pruned", res.branches_pruned}};
    emit(j.dump(2), out_path);
    return kExitOk;
}

int cmd_gen(int n, int m, const std::string& regime, std::uint64_t seed,
            const std::string& out_path) {
    Instance inst = gen_random_instance(n, m, parse_regime(regime), seed);
    emit(serialize_instance(inst), out_path);
    return kExitOk;
}

int cmd_gap(int n, const std::string& out_path) {
    Instance inst = gen_lower_bound_instance(n);
    Rat optimal = Rat(n) * harmonic(n);
    auto [fixed_price, fixed_revenue] = best_fixed_price(inst);
    Outcome out = run_auction_hb(inst);
    Rat auction_revenue = out.revenue_limit();
    nlohmann::json j;
    j["n"] = n;
    j["optimal"] = {{"exact", rat_str(optimal)}, {"decimal", rat_decimal(optimal)}};
    j["fixed_price"] = {{"price", rat_str(fixed_price)},
                        {"revenue", rat_str(fixed_revenue)},
                        {"revenue_decimal", rat_decimal(fixed_revenue)}};
    j["auction"] = {{"revenue", rat_str(auction_revenue)},
                    {"revenue_decimal", rat_decimal(auction_revenue)}};
    Rat gap_ratio = optimal / fixed_revenue;
    j["optimal_over_fixed"] = {{"exact", rat_str(gap_ratio)}, {"decimal", rat_decimal(gap_ratio)}};
    Rat auction_ratio = auction_revenue == 0 ? Rat(0) : optimal / auction_revenue;
    j["optimal_over_auction"] = {{"exact", rat_str(auction_ratio)},
                                 {"decimal", rat_decimal(auction_ratio)}};
    emit(j.dump(2), out_path);
    return kExitOk;
}

// ---------------------------------------------------------------------------
// bench: seeded fuzz loop with oracle auditing and counterexample shrinking

std::string classify_failure(const Instance& inst, const std::string& algo, bool check_approx,
                             const OracleCaps& caps) {
    try {
        Outcome out = dispatch_auction(inst, algo);
        InstanceChecks checks = check_outcome(inst, out);
        if (!checks.report.feasibility.ok) return "feasibility";
        if (!checks.report.ir.ok) return "ir";
        if (!checks.report.ef.ok) return "ef";
        if (!checks.audit.ok) return "trace";
        if (check_approx && inst.n() <= caps.max_n && inst.m() <= caps.max_m) {
            OracleResult res = optimal_ef_revenue(inst, caps);
            if (out.revenue_limit() * 4 < res.optimal) return "approx";
        }
        return "";
    } catch (const RegimeError&) {
        return "regime";
    } catch (const InvariantError&) {
        return "invariant";
    }
}

Instance drop_buyer(const Instance& inst, int victim) {
    Instance out;
    out.item_count = inst.item_count;
    for (const Buyer& b : inst.buyers) {
        if (b.id == victim) continue;
        Buyer nb = b;
        nb.id = static_cast<int>(out.buyers.size());
        out.buyers.push_back(std::move(nb));
    }
    out.regime = classify_regime(out.buyers);
    return out;
}

Instance drop_item(const Instance& inst, int victim) {
    Instance out;
    out.item_count = inst.item_count - 1;
    for (const Buyer& b : inst.buyers) {
        Buyer nb;
        nb.valuation = b.valuation;
        nb.budget = b.budget;
        for (int j : b.prefs)
            if (j != victim) nb.prefs.push_back(j < victim ? j : j - 1);
        if (nb.prefs.empty()) continue;
        nb.id = static_cast<int>(out.buyers.size());
        out.buyers.push_back(std::move(nb));
    }
    out.regime = classify_regime(out.buyers);
    return out;
}

Instance shrink_counterexample(Instance inst, const std::string& algo, const std::string& failure,
                               const OracleCaps& caps) {
    bool check_approx = failure == "approx";
    bool changed = true;
    while (changed) {
        changed = false;
        for (int i = 0; i < inst.n(); ++i) {
            if (inst.n() <= 1) break;
            Instance candidate = drop_buyer(inst, i);
            if (classify_failure(candidate, algo, check_approx, caps) == failure) {
                inst = std::move(candidate);
                changed = true;
                break;
            }
        }
        if (changed) continue;
        for (int j = 0; j < inst.item_count; ++j) {
            Instance candidate = drop_item(inst, j);
            if (candidate.n() == 0) continue;
            if (classify_failure(candidate, algo, check_approx, caps) == failure) {
                inst = std::move(candidate);
                changed = true;
                break;
            }
        }
    }
    return inst;
}

struct RegimeStats {
    long instances = 0;
    long oracle_checked = 0;
    bool have_ratio = false;
    Rat min_ratio;
    Rat ratio_sum;

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["instances"] = instances;
        j["violations"] = 0;
        j["oracle_checked"] = oracle_checked;
        if (have_ratio) {
            j["min_ratio"] = rat_str(min_ratio);
            j["min_ratio_decimal"] = rat_decimal(min_ratio);
            Rat mean = ratio_sum / oracle_checked;
            j["mean_ratio"] = rat_str(mean);
            j["mean_ratio_decimal"] = rat_decimal(mean);
        }
        return j;
    }
};

int cmd_bench(long count, int max_n, int max_m, std::uint64_t seed, const std::string& which,
              const std::string& cap_spec, const std::string& out_path) {
    OracleCaps caps;
    if (!cap_spec.empty() &&
        sscanf(cap_spec.c_str(), "%d,%d", &caps.max_n, &caps.max_m) != 2)
        throw ParseError("--oracle-cap expects n,m");
    auto t0 = std::chrono::steady_clock::now();
    nlohmann::json out;
    out["seed"] = seed;
    out["count"] = count;
    for (std::string algo : {std::string("hb"), std::string("lb")}) {
        if (which != "both" && which != algo) continue;
        Regime regime = algo == "hb" ? Regime::HighBudget : Regime::LowBudget;
        SplitMix64 stream(seed ^ (algo == "hb" ? 0x68621ULL : 0x6c621ULL));
        RegimeStats stats;
        for (long k = 0; k < count; ++k) {
            int n = 1 + static_cast<int>(stream.below(max_n));
            int m = 1 + static_cast<int>(stream.below(max_m));
            std::uint64_t sub_seed = stream.next();
            Instance inst = gen_random_instance(n, m, regime, sub_seed);
            std::string failure = classify_failure(inst, algo, true, caps);
            if (!failure.empty()) {
                Instance shrunk = shrink_counterexample(inst, algo, failure, caps);
                std::cerr << "violation (" << failure << ") on seed " << sub_seed
                          << ", minimized counterexample:\n"
                          << serialize_instance(shrunk) << "\n";
                return kExitViolation;
            }
            ++stats.instances;
            if (n <= caps.max_n && m <= caps.max_m) {
                Outcome o = dispatch_auction(inst, algo);
                OracleResult res = optimal_ef_revenue(inst, caps);
                ++stats.oracle_checked;
                if (res.optimal > 0) {
                    Rat ratio = o.revenue_limit() / res.optimal;
                    if (!stats.have_ratio || ratio < stats.min_ratio) stats.min_ratio = ratio;
                    stats.have_ratio = true;
                    stats.ratio_sum += ratio;
                } else {
                    stats.ratio_sum += 1;
                }
            }
        }
        out[algo] = stats.to_json();
    }
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - t0)
                  .count();
    std::cerr << "bench wall time: " << ms << " ms\n";
    emit(out.dump(2), out_path);
    return kExitOk;
}

}  // namespace

int run_cli(std::vector<std::string> args) {
    CLI::App app{"envy-free pricing auctions for matching markets with budgets"};
    app.require_subcommand(1);

    std::string instance_path, report_path, out_path, algo = "auto", eps_spec = "limit";
    std::string regime = "mixed", cap_spec, which = "both";
    bool verify = false;
    int n = 4, m = 4;
    long count = 100;
    std::uint64_t seed = 1;

    auto* run = app.add_subcommand("run", "run an auction on an instance file");
    run->add_option("instance", instance_path)->required();
    run->add_option("--algo", algo)->check(CLI::IsMember({"hb", "lb", "auto"}));
    run->add_option("--eps", eps_spec);
    run->add_option("--out", out_path);
    run->add_flag("--verify", verify);

    auto* ver = app.add_subcommand("verify", "verify an outcome report against its instance");
    ver->add_option("instance", instance_path)->required();
    ver->add_option("report", report_path)->required();

    auto* orc = app.add_subcommand("oracle", "optimal envy-free revenue by exhaustive search");
    orc->add_option("instance", instance_path)->required();
    orc->add_option("--oracle-cap", cap_spec);
    orc->add_option("--out", out_path);

    auto* gen = app.add_subcommand("gen", "generate a random instance");
    gen->add_option("--n", n)->required();
    gen->add_option("--m", m)->required();
    gen->add_option("--regime", regime)->check(CLI::IsMember({"hb", "lb", "mixed"}));
    gen->add_option("--seed", seed);
    gen->add_option("--out", out_path);

    auto* gap = app.add_subcommand("gap", "fixed-price separation family report");
    gap->add_option("--n", n)->required();
    gap->add_option("--out", out_path);

    auto* bench = app.add_subcommand("bench", "seeded fuzz loop with verification and oracle audit");
    bench->add_option("--count", count);
    bench->add_option("--n", n);
    bench->add_option("--m", m);
    bench->add_option("--seed", seed);
    bench->add_option("--algo", which)->check(CLI::IsMember({"hb", "lb", "both"}));
    bench->add_option("--oracle-cap", cap_spec);
    bench->add_option("--out", out_path);

    args.insert(args.begin(), "efp");
    std::vector<char*> argv;
    for (std::string& a : args) argv.push_back(a.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitParse;
    }

    try {
        if (run->parsed()) return cmd_run(instance_path, algo, eps_spec, out_path, verify);
        if (ver->parsed()) return cmd_verify(instance_path, report_path);
        if (orc->parsed()) return cmd_oracle(instance_path, cap_spec, out_path);
        if (gen->parsed()) return cmd_gen(n, m, regime, seed, out_path);
        if (gap->parsed()) return cmd_gap(n, out_path);
        if (bench->parsed()) return cmd_bench(count, n, m, seed, which, cap_spec, out_path);
    } catch (const RegimeError& e) {
        std::cerr << "regime error: " << e.what() << "\n";
        return kExitRegime;
    } catch (const SizeCapError& e) {
        std::cerr << "size cap: " << e.what() << "\n";
        return kExitSizeCap;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const InvariantError& e) {
        std::cerr << "internal invariant violated: " << e.what() << "\n";
        return kExitViolation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    }
    return kExitParse;
}

}  // namespace efp
