#include <catch_amalgamated.hpp>

#include <json.hpp>

#include "cspuniv/algorithms.hpp"
#include "cspuniv/report.hpp"
#include "cspuniv/templates.hpp"

using namespace cspuniv;

TEST_CASE("verdict json") {
    auto j = nlohmann::json::parse(verdict_json("blp", run("blp", fooling_instance("twosat_cycle"))));
    CHECK(j["verdict"] == "Yes");
    CHECK(j["certificate"]["kind"] == "rational");
    CHECK(j["certificate"]["values"].size() > 0);
    auto n = nlohmann::json::parse(verdict_json("aip", run("aip", fooling_instance("lin32_contradiction"))));
    CHECK(n["verdict"] == "No");
    CHECK(n["certificate"].is_null());
    auto s = nlohmann::json::parse(verdict_json("singl(aip)", run("singl(aip)", fooling_instance("twosat_cycle"))));
    CHECK(s["certificate"]["kind"] == "trace");
    CHECK(s.contains("last_inner"));
}

TEST_CASE("table report is deterministic and flags the known mismatches") {
    RunReport a = run_table2(), b = run_table2();
    CHECK(a.to_json() == b.to_json());
    std::set<std::pair<std::string, std::string>> off;
    for (const auto& c : a.cells)
        if (!c.matches()) off.insert({c.instance, c.algorithm});
    CHECK(off == std::set<std::pair<std::string, std::string>>{{"twosat_cycle", "arccons>aip"},
                                                                {"d4_main", "singl(blp>aip)"}});
    CHECK(a.discrepancies() == 2);
    for (const auto& [inst, sat] : a.oracle) CHECK_FALSE(sat);
    for (const auto& c : a.cells) CHECK(c.certificate_ok);
    CHECK_FALSE(a.untested.empty());
    auto j = nlohmann::json::parse(a.to_json());
    CHECK(j["discrepancies"] == 2);
    CHECK(j["cells"].size() == a.cells.size());
}
