#pragma once

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "cspuniv/instance.hpp"
#include "cspuniv/templates.hpp"

namespace gen {

using cspuniv::Element;
using cspuniv::Instance;
using cspuniv::Template;
using cspuniv::Tuple;
using Rng = std::mt19937_64;

inline std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

struct Shape {
    std::size_t max_vars = 6;
    std::size_t max_domain = 5;
    std::size_t max_constraints = 4;
};

// Random instance of CSP(t): variables get random subdomains of at most
// `max_domain` template elements (a unary restriction), every constraint is a
// template relation on a random scope, cut down to those subdomains.
inline Instance template_instance(const Template& t, Rng& rng, const Shape& s = {}) {
    Instance inst;
    const std::size_t nv = pick(rng, 1, s.max_vars);
    for (std::size_t i = 0; i < nv; ++i) {
        std::string x = "v" + std::to_string(i);
        inst.variables.push_back(x);
        std::vector<Element> dom = t.domain;
        std::shuffle(dom.begin(), dom.end(), rng);
        std::size_t k = std::min(dom.size(), s.max_domain);
        if (dom.size() <= s.max_domain && pick(rng, 0, 2) == 0) k = pick(rng, 1, dom.size());
        if (dom.size() > s.max_domain) k = pick(rng, 1, k);
        dom.resize(k);
        std::vector<Element> ordered;
        for (const auto& e : t.domain)
            if (std::find(dom.begin(), dom.end(), e) != dom.end()) ordered.push_back(e);
        inst.domains[x] = ordered;
    }
    std::vector<std::string> rels;
    for (const auto& [name, r] : t.relations) rels.push_back(name);
    const std::size_t nc = pick(rng, 1, s.max_constraints);
    for (std::size_t c = 0; c < nc; ++c) {
        const std::string& rel = rels[pick(rng, 0, rels.size() - 1)];
        cspuniv::Constraint con;
        con.id = "c" + std::to_string(c);
        for (std::size_t i = 0; i < t.arity(rel); ++i) con.scope.push_back(inst.variables[pick(rng, 0, nv - 1)]);
        for (const auto& tup : t.relation(rel)) {
            bool ok = true;
            for (std::size_t i = 0; i < tup.size() && ok; ++i) {
                const auto& d = inst.domains[con.scope[i]];
                ok = std::find(d.begin(), d.end(), tup[i]) != d.end();
            }
            if (ok) con.tuples.push_back(tup);
        }
        inst.constraints.push_back(std::move(con));
    }
    cspuniv::normalize(inst);
    cspuniv::validate(inst);
    return inst;
}

// Random relations over a small common domain.
inline Instance random_instance(Rng& rng, std::size_t max_vars = 4, std::size_t max_domain = 3,
                                std::size_t max_arity = 3, std::size_t max_constraints = 3) {
    Instance inst;
    const std::size_t nv = pick(rng, 1, max_vars), nd = pick(rng, 2, max_domain);
    std::vector<Element> dom;
    for (std::size_t i = 0; i < nd; ++i) dom.push_back(std::to_string(i));
    for (std::size_t i = 0; i < nv; ++i) {
        inst.variables.push_back("x" + std::to_string(i));
        inst.domains[inst.variables.back()] = dom;
    }
    const std::size_t nc = pick(rng, 1, max_constraints);
    for (std::size_t c = 0; c < nc; ++c) {
        cspuniv::Constraint con;
        con.id = "r" + std::to_string(c);
        const std::size_t k = pick(rng, 1, max_arity);
        for (std::size_t i = 0; i < k; ++i) con.scope.push_back(inst.variables[pick(rng, 0, nv - 1)]);
        std::size_t total = 1;
        for (std::size_t i = 0; i < k; ++i) total *= nd;
        // Density between roughly a quarter and three quarters.
        const std::size_t keep_num = pick(rng, 1, 3);
        for (std::size_t code = 0; code < total; ++code) {
            if (pick(rng, 0, 3) >= keep_num) continue;
            Tuple t;
            for (std::size_t i = 0, r = code; i < k; ++i, r /= nd) t.push_back(dom[r % nd]);
            con.tuples.push_back(t);
        }
        if (con.tuples.empty()) con.tuples.push_back(Tuple(k, dom[0]));
        inst.constraints.push_back(std::move(con));
    }
    cspuniv::normalize(inst);
    cspuniv::validate(inst);
    return inst;
}

// Random lin(3,p) instance. Equations have at least two nonzero coefficients:
// a single one pins its variable, and the relation is no longer uniform in
// that coordinate (x = 0 and x = 1 together have no d-solution at all).
inline Instance lin_instance(const Template& t, Rng& rng, std::size_t nvars, std::size_t ncons) {
    std::vector<std::string> rels;
    for (const auto& [name, r] : t.relations) {
        const std::string lhs = name.substr(0, name.find('='));
        if (std::count_if(lhs.begin(), lhs.end(), [](char ch) { return ch != '0'; }) >= 2) rels.push_back(name);
    }
    cspuniv::InstanceBuilder b(t);
    std::vector<std::string> vars;
    for (std::size_t i = 0; i < nvars; ++i) vars.push_back("y" + std::to_string(i));
    for (std::size_t c = 0; c < ncons; ++c) {
        std::vector<std::string> scope;
        for (int i = 0; i < 3; ++i) scope.push_back(vars[pick(rng, 0, nvars - 1)]);
        b.add(rels[pick(rng, 0, rels.size() - 1)], scope);
    }
    return b.build();
}

// Random 2-SAT instance with a planted solution, so it is satisfiable.
inline Instance planted_two_sat(const Template& t, Rng& rng, std::size_t nvars, std::size_t ncons) {
    std::vector<int> plant(nvars);
    for (auto& v : plant) v = static_cast<int>(pick(rng, 0, 1));
    cspuniv::InstanceBuilder b(t);
    for (std::size_t c = 0; c < ncons; ++c) {
        std::size_t i = pick(rng, 0, nvars - 1), j = pick(rng, 0, nvars - 1);
        std::vector<std::string> cands;
        for (const auto& [name, rel] : t.relations) {
            if (name == "empty" || name == "full") continue;
            Tuple want{std::to_string(plant[i]), std::to_string(plant[j])};
            if (std::binary_search(rel.begin(), rel.end(), want)) cands.push_back(name);
        }
        b.add(cands[pick(rng, 0, cands.size() - 1)], {"z" + std::to_string(i), "z" + std::to_string(j)});
    }
    return b.build();
}

}  // namespace gen
