#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cspuniv/verdict.hpp"

namespace cspuniv {

std::string certificate_json(const Certificate& cert);
// {"verdict": "Yes"|"No", "certificate": ..., "last_inner": ...}
std::string verdict_json(const std::string& algorithm, const Verdict& v);

// One (instance, algorithm) cell of the template table. Every instance is
// unsatisfiable, so a row's "not working" algorithms are expected to be
// fooled (Yes) and its "working" ones to refute (No).
struct Table2Cell {
    std::string row;        // template label
    std::string instance;   // fooling instance name
    std::string algorithm;
    std::string role;       // "strongest not working" | "weakest working"
    std::string claim;      // where the expectation comes from
    bool expected_yes = false;
    bool observed_yes = false;
    bool certificate_ok = true;
    double seconds = 0;
    bool matches() const { return expected_yes == observed_yes && certificate_ok; }
};

struct RunReport {
    std::vector<Table2Cell> cells;
    std::vector<std::pair<std::string, bool>> oracle;  // instance -> satisfiable
    std::vector<std::string> untested;
    std::uint64_t seed = 0;

    std::size_t discrepancies() const;
    // Deterministic: no timings.
    std::string to_json() const;
};

struct Table2Options {
    std::uint64_t seed = 0;
    bool log_timings = false;  // one line per cell on stderr
};

RunReport run_table2(const Table2Options& opts = {});

}  // namespace cspuniv
