#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "efp/cli.hpp"
#include "efp/instance.hpp"
#include "json.hpp"

using namespace efp;
namespace fs = std::filesystem;

namespace {

fs::path work_dir() {
    fs::path dir = fs::temp_directory_path() / "efp-cli-tests";
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

}  // namespace

TEST_CASE("run writes a report and prints the revenue") {
    fs::path dir = work_dir();
    fs::path inst = dir / "unit.json";
    fs::path report = dir / "unit-report.json";
    spit(inst, R"({"m": 1, "buyers": [{"v": "1", "b": "1", "S": [0]}]})");
    CHECK(run_cli({"run", inst.string(), "--algo", "hb", "--out", report.string(), "--verify"}) == 0);
    auto j = nlohmann::json::parse(slurp(report));
    CHECK(j["revenue"]["limit"] == "1");
    CHECK(j["algorithm"] == "hb");
    CHECK(j["epsilon"]["mode"] == "limit");
}

TEST_CASE("auto dispatch picks the matching auction and rejects mixed") {
    fs::path dir = work_dir();
    fs::path lb = dir / "lb.json";
    spit(lb, R"({"m": 1, "buyers": [{"v": "2", "b": "1", "S": [0]}]})");
    fs::path out = dir / "lb-report.json";
    CHECK(run_cli({"run", lb.string(), "--out", out.string()}) == 0);
    CHECK(nlohmann::json::parse(slurp(out))["algorithm"] == "lb");

    // Regime mismatch: the high-budget auction refuses this instance.
    CHECK(run_cli({"run", lb.string(), "--algo", "hb", "--out", out.string()}) == 4);

    fs::path mixed = dir / "mixed.json";
    spit(mixed, R"({"m": 1, "buyers": [{"v": "2", "b": "1", "S": [0]}, {"v": "1", "b": "2", "S": [0]}]})");
    CHECK(run_cli({"run", mixed.string(), "--out", out.string()}) == 4);
}

TEST_CASE("parse failures exit with the format code") {
    fs::path dir = work_dir();
    fs::path bad = dir / "bad.json";
    spit(bad, R"({"m": 1, "buyers": [{"v": 1.5, "b": "1", "S": [0]}]})");
    CHECK(run_cli({"run", bad.string()}) == 3);
    CHECK(run_cli({"run", (dir / "missing.json").string()}) == 3);
}

TEST_CASE("oracle respects the size cap") {
    fs::path dir = work_dir();
    fs::path inst = dir / "cap.json";
    CHECK(run_cli({"gen", "--n", "6", "--m", "3", "--regime", "hb", "--seed", "3",
                   "--out", inst.string()}) == 0);
    CHECK(run_cli({"oracle", inst.string(), "--out", (dir / "o.json").string()}) == 5);
    CHECK(run_cli({"oracle", inst.string(), "--oracle-cap", "6,4",
                   "--out", (dir / "o.json").string()}) == 0);
    auto j = nlohmann::json::parse(slurp(dir / "o.json"));
    CHECK(j.contains("optimal"));
}

TEST_CASE("verify command checks a stored report") {
    fs::path dir = work_dir();
    fs::path inst = dir / "v.json";
    fs::path report = dir / "v-report.json";
    spit(inst, R"({"m": 2, "buyers": [{"v": "4", "b": "10", "S": [0, 1]}]})");
    CHECK(run_cli({"run", inst.string(), "--out", report.string()}) == 0);
    CHECK(run_cli({"verify", inst.string(), report.string()}) == 0);

    // Tamper with the payment: the verifier must flag it.
    auto j = nlohmann::json::parse(slurp(report));
    j["payments"][0]["base"] = "100";
    spit(report, j.dump());
    CHECK(run_cli({"verify", inst.string(), report.string()}) == 2);
}

TEST_CASE("gap report reproduces the separation values") {
    fs::path dir = work_dir();
    fs::path out = dir / "gap4.json";
    CHECK(run_cli({"gap", "--n", "4", "--out", out.string()}) == 0);
    auto j = nlohmann::json::parse(slurp(out));
    CHECK(j["optimal"]["exact"] == "25/3");
    CHECK(j["fixed_price"]["revenue"] == "4");
    CHECK(j["optimal_over_fixed"]["exact"] == "25/12");
    CHECK(j["auction"]["revenue"] == "25/3");

    CHECK(run_cli({"gap", "--n", "1", "--out", out.string()}) == 0);
    auto j1 = nlohmann::json::parse(slurp(out));
    CHECK(j1["optimal"]["exact"] == "1");
    CHECK(j1["fixed_price"]["revenue"] == "1");
    CHECK(j1["optimal_over_fixed"]["exact"] == "1");
}

TEST_CASE("generated corpora and bench reports are byte-identical under a seed") {
    fs::path dir = work_dir();
    fs::path a = dir / "gen-a.json", b = dir / "gen-b.json";
    CHECK(run_cli({"gen", "--n", "5", "--m", "4", "--regime", "lb", "--seed", "77", "--out",
                   a.string()}) == 0);
    CHECK(run_cli({"gen", "--n", "5", "--m", "4", "--regime", "lb", "--seed", "77", "--out",
                   b.string()}) == 0);
    CHECK(slurp(a) == slurp(b));

    fs::path ba = dir / "bench-a.json", bb = dir / "bench-b.json";
    CHECK(run_cli({"bench", "--count", "6", "--n", "4", "--m", "4", "--seed", "5", "--oracle-cap",
                   "3,3", "--out", ba.string()}) == 0);
    CHECK(run_cli({"bench", "--count", "6", "--n", "4", "--m", "4", "--seed", "5", "--oracle-cap",
                   "3,3", "--out", bb.string()}) == 0);
    CHECK(slurp(ba) == slurp(bb));
    auto j = nlohmann::json::parse(slurp(ba));
    CHECK(j["hb"]["violations"] == 0);
    CHECK(j["lb"]["violations"] == 0);
}

TEST_CASE("concrete epsilon mode validates the bound") {
    fs::path dir = work_dir();
    fs::path inst = dir / "eps.json";
    fs::path report = dir / "eps-report.json";
    spit(inst, R"({"m": 3, "buyers": [{"v": "4", "b": "10", "S": [0, 1, 2]}]})");
    // Breakpoint gaps: min gap is 2/3 around 10/3..4; n*m = 3, bound 1/9.
    CHECK(run_cli({"run", inst.string(), "--eps", "1/2", "--out", report.string()}) == 3);
    CHECK(run_cli({"run", inst.string(), "--eps", "1/100", "--out", report.string()}) == 0);
    auto j = nlohmann::json::parse(slurp(report));
    CHECK(j["epsilon"]["mode"] == "concrete");
    CHECK(j["epsilon"]["value"] == "1/100");
    // limit 20/3, two eps charges: 20/3 + 2/100 = 1003/150.
    CHECK(j["revenue"]["concrete"] == "1003/150");
    CHECK(run_cli({"run", inst.string(), "--eps", "0", "--out", report.string()}) == 3);
    CHECK(run_cli({"run", inst.string(), "--eps", "nonsense", "--out", report.string()}) == 3);
}

TEST_CASE("unknown flags and subcommands fail parsing") {
    CHECK(run_cli({"frobnicate"}) == 3);
    CHECK(run_cli({}) == 3);
}
