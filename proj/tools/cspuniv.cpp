// cspuniv: command-line front end. JSON on stdout, logs on stderr.
// Exit codes: 0 = Yes / holds, 1 = No / fails, 2 = usage or input error.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cspuniv/algorithms.hpp"
#include "cspuniv/d4.hpp"
#include "cspuniv/errors.hpp"
#include "cspuniv/minionlab.hpp"
#include "cspuniv/poly.hpp"
#include "cspuniv/report.hpp"
#include "cspuniv/templates.hpp"

using namespace cspuniv;
using nlohmann::ordered_json;

namespace {

// A path, or the name of a built-in fooling instance ("twosat_cycle" or
// "twosat_cycle.json") when no such file exists.
Instance resolve_instance(const std::string& arg) {
    namespace fs = std::filesystem;
    if (fs::exists(arg)) {
        std::ifstream in(arg);
        std::stringstream ss;
        ss << in.rdbuf();
        return load_instance(ss.str());
    }
    std::string stem = fs::path(arg).stem().string();
    for (const auto& n : fooling_instance_names())
        if (n == stem) return fooling_instance(n);
    throw UsageError("no instance file and no built-in instance named " + arg);
}

int cmd_solve(const std::string& algorithm, const std::string& instance, std::uint64_t seed) {
    Instance inst = resolve_instance(instance);
    Verdict v;
    if (algorithm == "oracle") {
        v = brute_force_solve(inst);
    } else {
        RunOptions ro;
        ro.sweep_seed = seed;
        v = run(algorithm, inst, ro);
    }
    if (v.yes && !certificate_valid(inst, v.certificate))
        throw PropertyViolation("certificate of " + algorithm + " failed the re-check");
    std::cout << verdict_json(algorithm, v);
    return v.yes ? 0 : 1;
}

// "majority:3", "conj:4", or a construction name taking the shape.
FiniteFunction resolve_function(const std::string& spec, const Template& t, PaletteShape& shape, bool shape_given) {
    std::string name = spec, param;
    if (auto colon = spec.find(':'); colon != std::string::npos) {
        name = spec.substr(0, colon);
        param = spec.substr(colon + 1);
    }
    if (name == "majority" || name == "majority_odd" || name == "conj" || name == "conj_n") {
        int n = param.empty() ? (shape_given ? shape.total() : 3) : std::stoi(param);
        if (!shape_given) shape = PaletteShape::overlined(1, n);
        return name.rfind("majority", 0) == 0 ? majority_odd(n) : conj_n(n);
    }
    if (name == "z2arrow2_ternary" && !shape_given) shape = PaletteShape::overlined(1, 3);
    if (!param.empty()) throw UsageError(name + " takes its arity from --shape");
    return construct(name, t.domain, shape);
}

std::vector<BlockFlavor> resolve_flavors(const std::string& text, std::size_t blocks) {
    std::vector<BlockFlavor> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_flavor(item));
    if (out.size() == 1) out.assign(blocks, out[0]);
    if (out.size() != blocks) throw UsageError("give one flavor, or one per block");
    return out;
}

int cmd_poly_check(const std::string& tname, const std::string& fspec, const std::string& shape_text,
                   const std::string& flavor_text, const Limits& lim) {
    Template t = template_by_name(tname);
    PaletteShape shape = shape_text.empty() ? PaletteShape::overlined(3, 3) : PaletteShape::parse(shape_text);
    FiniteFunction f = resolve_function(fspec, t, shape, !shape_text.empty());
    shape.validate();
    auto flavors = resolve_flavors(flavor_text, shape.block_sizes.size());

    auto pol = is_polymorphism(f, t, t, lim);
    auto pal = is_palette_block(f, shape, flavors, lim);
    ordered_json j;
    j["template"] = t.name;
    j["function"] = f.name;
    j["shape"] = shape.render();
    std::vector<std::string> fl;
    for (auto x : flavors) fl.push_back(to_string(x));
    j["flavors"] = fl;
    j["polymorphism"] = pol.holds;
    j["palette_block"] = pal.holds;
    j["mode"] = pol.exhaustive && pal.exhaustive ? "exhaustive" : "sampled";
    j["checks"] = pol.checks + pal.checks;
    if (std::any_of(flavors.begin(), flavors.end(), [](auto x) { return x == BlockFlavor::Alternating; }))
        j["alternating"] = "invariant-based";
    if (pol.counterexample) {
        j["counterexample"] = {{"relation", pol.counterexample->relation},
                               {"rows", pol.counterexample->rows},
                               {"image", pol.counterexample->image}};
    } else if (pal.counterexample) {
        j["counterexample"] = {
            {"block", pal.block + 1}, {"a", pal.counterexample->first}, {"b", pal.counterexample->second}};
    }
    std::cout << j.dump(2) << "\n";
    return pol.holds && pal.holds ? 0 : 1;
}

int cmd_d4_verify_clone(std::uint64_t seed) {
    ordered_json j;
    bool pres = check_group_presentation();
    auto comp = d4op_is_polymorphism(D4Op::compose_op());
    bool terms = true;
    std::size_t ops = 0;
    // Every valid op of arity <= 2.
    for (int N = 1; N <= 2; ++N) {
        const int abits = N, cbits = N * N;
        for (int code = 0; code < 1 << (abits + cbits); ++code) {
            D4Op op = D4Op::zero(N);
            for (int i = 0; i < N; ++i) op.a[i] = code >> i & 1;
            for (int k = 0; k < cbits; ++k) op.c[k / N][k % N] = code >> (abits + k) & 1;
            if (!op.valid()) continue;
            ++ops;
            try {
                generate_by_terms(op, seed);
            } catch (const PropertyViolation&) {
                terms = false;
            }
        }
    }
    j["group_presentation"] = pres;
    j["compose_preserves_relations"] = comp.holds;
    j["term_round_trip_ops"] = ops;
    j["term_round_trip"] = terms;
    std::cout << j.dump(2) << "\n";
    return pres && comp.holds && terms ? 0 : 1;
}

int cmd_d4_nonexistence(int n, int l, bool abelian) {
    auto r = check_palette_nonexistence(n, l, abelian);
    if (!verify_nonexistence(r)) throw PropertyViolation("nonexistence result failed its replay");
    std::cout << r.to_json();
    return r.infeasible ? 0 : 1;
}

int cmd_minion_witness(const std::string& instance, const std::string& algorithm) {
    Instance inst = resolve_instance(instance);
    std::optional<std::string> out;
    if (algorithm == "csingl-arccons") {
        if (auto w = extract_witness_arccons(inst)) out = to_json(*w);
    } else if (algorithm == "csingl-blpaip") {
        if (auto w = extract_witness_blpaip(inst)) out = to_json(*w);
    } else {
        throw UsageError("--algorithm must be csingl-arccons or csingl-blpaip");
    }
    std::cout << (out ? *out : std::string("{\n  \"result\": \"none\"\n}\n"));
    return out ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Universal CSP algorithms, templates and polymorphisms"};
    app.require_subcommand(1);
    std::uint64_t seed = 0;
    app.add_option("--seed", seed, "seed for sweep orders and sampling")->capture_default_str();

    std::string algorithm, instance;
    auto* solve = app.add_subcommand("solve", "run an algorithm (or \"oracle\") on an instance");
    solve->add_option("--algorithm", algorithm)->required();
    solve->add_option("--instance", instance)->required();
    solve->add_option("--seed", seed);

    auto* oracle = app.add_subcommand("oracle", "exhaustive search");
    oracle->add_option("--instance", instance)->required();

    auto* table2 = app.add_subcommand("table2", "run the template fooling battery");
    bool timings = false;
    table2->add_option("--seed", seed);
    table2->add_flag("--timings", timings, "log per-cell wall time on stderr");

    std::string name;
    bool emit = false;
    auto* tmpl = app.add_subcommand("template", "print a template");
    tmpl->add_option("name", name)->required();
    tmpl->add_flag("--emit", emit);
    auto* inst_cmd = app.add_subcommand("instance", "print a built-in fooling instance");
    inst_cmd->add_option("name", name)->required();
    inst_cmd->add_flag("--emit", emit);

    std::string fspec, shape, flavor = "sym";
    Limits lim;
    auto* poly = app.add_subcommand("poly-check", "polymorphism and palette block checks");
    poly->add_option("--template", name)->required();
    poly->add_option("--function", fspec)->required();
    poly->add_option("--shape", shape);
    poly->add_option("--flavor", flavor)->capture_default_str();
    poly->add_option("--samples", lim.samples)->capture_default_str();
    poly->add_option("--cap", lim.exhaustive_cap)->capture_default_str();
    poly->add_option("--seed", seed);

    auto* d4 = app.add_subcommand("d4", "dihedral group checks");
    d4->require_subcommand(1);
    auto* verify = d4->add_subcommand("verify-clone", "presentation, relation preservation, term round trip");
    int n = 4, l = 4;
    bool abelian = false;
    auto* nonex = d4->add_subcommand("nonexistence", "palette block symmetric ops in the parametric family");
    nonex->add_option("--n", n)->capture_default_str();
    nonex->add_option("--l", l)->capture_default_str();
    nonex->add_flag("--abelian-control", abelian);

    auto* minion = app.add_subcommand("minion-witness", "free-structure witness for a singleton algorithm");
    minion->add_option("--instance", instance)->required();
    minion->add_option("--algorithm", algorithm)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*solve) return cmd_solve(algorithm, instance, seed);
        if (*oracle) return cmd_solve("oracle", instance, seed);
        if (*table2) {
            auto rep = run_table2({seed, timings});
            std::cout << rep.to_json();
            return 0;
        }
        if (*tmpl) {
            std::cout << template_by_name(name).to_json();
            return 0;
        }
        if (*inst_cmd) {
            std::cout << save_instance(fooling_instance(name));
            return 0;
        }
        if (*poly) {
            lim.seed = seed;
            return cmd_poly_check(name, fspec, shape, flavor, lim);
        }
        if (*verify) return cmd_d4_verify_clone(seed);
        if (*nonex) return cmd_d4_nonexistence(n, l, abelian);
        if (*minion) return cmd_minion_witness(instance, algorithm);
    } catch (const std::exception& e) {
        std::cerr << "cspuniv: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
