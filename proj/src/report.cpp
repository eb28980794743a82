#include "cspuniv/report.hpp"

#include <chrono>
#include <iostream>

#include <json.hpp>

#include "cspuniv/algorithms.hpp"
#include "cspuniv/templates.hpp"

namespace cspuniv {

namespace {

using nlohmann::ordered_json;

ordered_json cert_json(const Certificate& cert) {
    ordered_json j;
    std::visit(
        [&](const auto& c) {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, std::monostate>) {
                j = nullptr;
            } else if constexpr (std::is_same_v<T, Assignment>) {
                j["kind"] = "assignment";
                j["values"] = ordered_json(c);
            } else if constexpr (std::is_same_v<T, RationalSolution> || std::is_same_v<T, IntegerSolution>) {
                j["kind"] = std::is_same_v<T, RationalSolution> ? "rational" : "integer";
                ordered_json vals = ordered_json::object();
                for (std::size_t i = 0; i < c.vars.size(); ++i) vals[c.vars[i].render()] = c.values[i].get_str();
                j["values"] = vals;
            } else {
                j["kind"] = "trace";
                ordered_json ev = ordered_json::array();
                for (const auto& e : c.events)
                    ev.push_back({{"remove", e.kind == ReductionEvent::Kind::DomainRemoval ? "value" : "tuple"},
                                  {"owner", e.owner},
                                  {"tuple", e.tuple}});
                j["events"] = ev;
                j["final_instance"] = ordered_json::parse(save_instance(c.final_instance));
            }
        },
        cert);
    return j;
}

}  // namespace

std::string certificate_json(const Certificate& cert) { return cert_json(cert).dump(2) + "\n"; }

std::string verdict_json(const std::string& algorithm, const Verdict& v) {
    ordered_json j;
    j["algorithm"] = algorithm;
    j["verdict"] = v.yes ? "Yes" : "No";
    j["certificate"] = cert_json(v.certificate);
    if (v.last_inner) j["last_inner"] = cert_json(*v.last_inner);
    return j.dump(2) + "\n";
}

std::size_t RunReport::discrepancies() const {
    std::size_t n = 0;
    for (const auto& c : cells) n += !c.matches();
    return n;
}

std::string RunReport::to_json() const {
    ordered_json j;
    j["seed"] = seed;
    ordered_json orc = ordered_json::object();
    for (const auto& [name, sat] : oracle) orc[name] = sat ? "Yes" : "No";
    j["oracle"] = orc;
    ordered_json cs = ordered_json::array();
    for (const auto& c : cells) {
        ordered_json e;
        e["row"] = c.row;
        e["instance"] = c.instance;
        e["algorithm"] = c.algorithm;
        e["role"] = c.role;
        e["claim"] = c.claim;
        e["expected"] = c.expected_yes ? "Yes" : "No";
        e["observed"] = c.observed_yes ? "Yes" : "No";
        if (!c.certificate_ok) e["certificate"] = "invalid";
        e["flag"] = c.matches() ? "match" : "DISCREPANCY";
        cs.push_back(e);
    }
    j["cells"] = cs;
    j["discrepancies"] = discrepancies();
    j["untested"] = untested;
    return j.dump(2) + "\n";
}

RunReport run_table2(const Table2Options& opts) {
    struct Row {
        const char* label;
        const char* instance;
        std::vector<const char*> not_working, working;
        const char* claim;
    };
    const std::vector<Row> rows = {
        {"Horn-SAT", "horn_chain", {"aip"}, {"arccons"}, "table row Horn-SAT: AIP | ArcCons"},
        {"2-SAT",
         "twosat_cycle",
         {"blp", "singl(aip)"},
         {"singl(arccons)", "arccons>aip"},
         "table row 2-SAT: BLP, SinglAIP | SinglArcCons, ArcCons+AIP"},
        {"LIN(3,2)", "lin32_contradiction", {"singl(blp)"}, {"aip"}, "table row LIN(3,p): SinglBLP | AIP"},
        {"bij5", "bij5_cycle", {"blp>aip"}, {"singl(arccons)", "singl(aip)"},
         "table row (01234/10342): BLP+AIP | SinglArcCons, SinglAIP"},
        {"Z2uZ3", "z2z3_mixed", {"aip"}, {"singl(aip)"}, "Z2uZ3: AIP says Yes on every instance | SinglAIP"},
        {"Z2uZ3", "z2z3_twin", {"singl(blp)>aip"}, {"singl(aip)"}, "table row Z2uZ3: SinglBLP+AIP | SinglAIP"},
        {"Z2<-2", "z2arrow2_chain", {"singl(blp)>aip"}, {"singl(aip)"}, "table row Z2<-2: SinglBLP+AIP | SinglAIP"},
        {"D4", "d4_main", {"singl(blp>aip)"}, {}, "table row D4: Singl(BLP+AIP) | unknown"},
    };

    RunReport rep;
    rep.seed = opts.seed;
    RunOptions ro;
    ro.sweep_seed = opts.seed;
    for (const auto& r : rows) {
        const Instance inst = fooling_instance(r.instance);
        rep.oracle.push_back({r.instance, brute_force_solve(inst).yes});
        for (int pass = 0; pass < 2; ++pass)
            for (const char* alg : pass == 0 ? r.not_working : r.working) {
                Table2Cell c;
                c.row = r.label;
                c.instance = r.instance;
                c.algorithm = alg;
                c.role = pass == 0 ? "strongest not working" : "weakest working";
                c.claim = r.claim;
                c.expected_yes = pass == 0;
                auto t0 = std::chrono::steady_clock::now();
                Verdict v = run(alg, inst, ro);
                c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
                c.observed_yes = v.yes;
                if (v.yes) c.certificate_ok = certificate_valid(inst, v.certificate);
                if (opts.log_timings)
                    std::cerr << "table2 " << c.instance << " " << c.algorithm << " " << (v.yes ? "Yes" : "No") << " "
                              << c.seconds << "s\n";
                rep.cells.push_back(std::move(c));
            }
    }
    rep.untested = {
        "\"solves CSP(A)\" for every row: quantified over all instances, only the listed instances are run",
        "Singl(BLP+AIP) solves every template with a WNU polymorphism and projections below 8",
        "palette block symmetric terms for all small algebras",
        "the weakest working algorithm for D4 (left open in the table)",
    };
    return rep;
}

}  // namespace cspuniv
