#include "cspuniv/templates.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include <json.hpp>

#include "cspuniv/errors.hpp"

namespace cspuniv {

const std::vector<Tuple>& Template::relation(const std::string& rel) const {
    auto it = relations.find(rel);
    if (it == relations.end()) throw UsageError("template " + name + " has no relation " + rel);
    return it->second;
}

std::size_t Template::arity(const std::string& rel) const {
    const auto& r = relation(rel);
    if (!r.empty()) return r.front().size();
    auto it = empty_arity.find(rel);
    if (it == empty_arity.end()) throw UsageError("relation " + rel + " is empty; its arity is not recorded");
    return it->second;
}

std::string Template::to_json() const {
    nlohmann::ordered_json j;
    j["name"] = name;
    j["domain"] = domain;
    auto& rels = j["relations"] = nlohmann::ordered_json::object();
    for (const auto& [rel, tuples] : relations) rels[rel] = tuples;
    return j.dump(2) + "\n";
}

InstanceBuilder& InstanceBuilder::add(const std::string& relation, const std::vector<std::string>& scope) {
    const auto& r = t_.relation(relation);
    if (t_.arity(relation) != scope.size())
        throw UsageError("relation " + relation + " applied to " + std::to_string(scope.size()) + " variables");
    for (const auto& x : scope) {
        if (inst_.has_variable(x)) continue;
        inst_.variables.push_back(x);
        inst_.domains[x] = t_.domain;
    }
    char id[16];
    std::snprintf(id, sizeof id, "c%02zu", inst_.constraints.size() + 1);
    inst_.constraints.push_back({id, scope, r});
    return *this;
}

namespace {

using Pred = std::function<bool(const std::vector<int>&)>;

// All tuples over `dom` of length k (as index vectors) accepted by `keep`.
std::vector<Tuple> enumerate(const std::vector<Element>& dom, std::size_t k, const Pred& keep) {
    std::vector<Tuple> out;
    std::vector<int> idx(k, 0);
    const int q = static_cast<int>(dom.size());
    for (;;) {
        if (keep(idx)) {
            Tuple t;
            for (int i : idx) t.push_back(dom[i]);
            out.push_back(std::move(t));
        }
        std::size_t p = k;
        while (p > 0 && ++idx[p - 1] == q) idx[--p] = 0;
        if (p == 0) break;
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Element> numbers(int q) {
    std::vector<Element> d;
    for (int i = 0; i < q; ++i) d.push_back(std::to_string(i));
    return d;
}

bool is_prime(int p) {
    if (p < 2) return false;
    for (int d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

}  // namespace

Template horn3sat() {
    Template t{"horn3sat", numbers(2), {}, {}};
    t.relations["clause"] = enumerate(t.domain, 3, [](const auto& v) { return !(v[0] == 1 && v[1] == 1 && v[2] == 0); });
    t.relations["zero"] = {{"0"}};
    t.relations["one"] = {{"1"}};
    return t;
}

Template two_sat() {
    Template t{"two_sat", numbers(2), {}, {}};
    const std::map<int, std::string> alias = {{0, "empty"}, {15, "full"}, {9, "eq"},  {6, "neq"}, {11, "le"},
                                              {13, "ge"},   {14, "or"},   {7, "nand"}, {2, "lt"},  {4, "gt"}};
    // bit k of the mask selects the tuple (k>>1, k&1)
    for (int mask = 0; mask < 16; ++mask) {
        std::vector<Tuple> r;
        for (int k = 0; k < 4; ++k)
            if (mask >> k & 1) r.push_back({std::to_string(k >> 1), std::to_string(k & 1)});
        auto it = alias.find(mask);
        if (r.empty()) t.empty_arity["empty"] = 2;
        t.relations[it != alias.end() ? it->second : "b" + std::to_string(mask)] = std::move(r);
    }
    return t;
}

Template lin(int n, int p) {
    if (n < 1) throw UsageError("lin: n must be at least 1");
    if (!is_prime(p)) throw UsageError("lin: " + std::to_string(p) + " is not prime");
    Template t{"lin(" + std::to_string(n) + "," + std::to_string(p) + ")", numbers(p), {}, {}};
    std::set<std::vector<Tuple>> seen;
    const std::string sep = p > 10 ? "," : "";
    std::vector<int> a(n + 1, 0);  // a[0..n) coefficients, a[n] right-hand side
    for (;;) {
        auto r = enumerate(t.domain, n, [&](const auto& v) {
            long s = 0;
            for (int i = 0; i < n; ++i) s += static_cast<long>(a[i]) * v[i];
            return s % p == a[n];
        });
        if (seen.insert(r).second) {
            std::string nm;
            for (int i = 0; i < n; ++i) nm += (i ? sep : "") + std::to_string(a[i]);
            if (r.empty()) t.empty_arity[nm + "=" + std::to_string(a[n])] = n;
            t.relations[nm + "=" + std::to_string(a[n])] = std::move(r);
        }
        int k = n + 1;
        while (k > 0 && ++a[k - 1] == p) a[--k] = 0;
        if (k == 0) break;
    }
    return t;
}

Template bij5() {
    Template t{"bij5", numbers(5), {}, {}};
    t.relations["rho"] = {{"0", "1"}, {"1", "0"}, {"2", "3"}, {"3", "4"}, {"4", "2"}};
    return t;
}

Template z2_union_z3() {
    Template t{"z2_union_z3", {"0", "1", "0p", "1p", "2p"}, {}, {}};
    // indices 0,1 form the Z2 part; 2,3,4 are 0',1',2'
    auto all_z2 = [](const auto& v) { return std::all_of(v.begin(), v.end(), [](int e) { return e < 2; }); };
    auto all_z3 = [](const auto& v) { return std::all_of(v.begin(), v.end(), [](int e) { return e >= 2; }); };
    for (int a = 0; a < 2; ++a)
        t.relations["l" + std::to_string(a) + "_z2"] = enumerate(t.domain, 3, [&](const auto& v) {
            return (all_z2(v) && (v[0] + v[1] + v[2]) % 2 == a) || all_z3(v);
        });
    for (int b = 0; b < 3; ++b)
        t.relations["l" + std::to_string(b) + "_z3"] = enumerate(t.domain, 3, [&](const auto& v) {
            return (all_z3(v) && (v[0] + v[1] + v[2] - 6) % 3 == b) || all_z2(v);
        });
    return t;
}

Template z2_arrow_2() {
    Template t{"z2_arrow_2", numbers(3), {}, {}};
    for (int n : {3, 4})
        for (int c : {0, 1})
            t.relations["L" + std::to_string(n) + "_" + std::to_string(c)] = enumerate(t.domain, n, [&](const auto& v) {
                if (std::all_of(v.begin(), v.end(), [](int e) { return e == 2; })) return true;
                int s = 0;
                for (int e : v) {
                    if (e == 2) return false;
                    s += e;
                }
                return s % 2 == c;
            });
    t.relations["u01"] = {{"0"}, {"1"}};
    t.relations["S"] = enumerate(t.domain, 3, [](const auto& v) { return v[0] == v[1] || v[2] != 2; });
    return t;
}

namespace {

// Element index e of Z2^3 is the bit string x1 x2 x3 read as a binary number.
int b1(int e) { return e >> 2 & 1; }
int b2(int e) { return e >> 1 & 1; }
int b3(int e) { return e & 1; }

std::vector<Element> g8_elements() {
    std::vector<Element> d;
    for (int e = 0; e < 8; ++e) d.push_back(std::string{char('0' + b1(e)), char('0' + b2(e)), char('0' + b3(e))});
    return d;
}

}  // namespace

Template d4_relations() {
    Template t{"d4", g8_elements(), {}, {}};
    const auto& D = t.domain;
    t.relations["L3_12"] = enumerate(D, 4, [](const auto& v) {
        return b1(v[0]) == b1(v[1]) && b2(v[0]) == b2(v[1]) && b1(v[2]) == b1(v[3]) && b2(v[2]) == b2(v[3]) &&
               (b3(v[0]) ^ b3(v[1])) == (b3(v[2]) ^ b3(v[3]));
    });
    t.relations["L23_1"] = enumerate(D, 4, [](const auto& v) {
        return b1(v[0]) == b1(v[1]) && b1(v[1]) == b1(v[2]) && b1(v[2]) == b1(v[3]) &&
               (b2(v[0]) ^ b2(v[1])) == (b2(v[2]) ^ b2(v[3])) && (b3(v[0]) ^ b3(v[1])) == (b3(v[2]) ^ b3(v[3]));
    });
    t.relations["L13_2"] = enumerate(D, 4, [](const auto& v) {
        return b2(v[0]) == b2(v[1]) && b2(v[1]) == b2(v[2]) && b2(v[2]) == b2(v[3]) &&
               (b1(v[0]) ^ b1(v[1])) == (b1(v[2]) ^ b1(v[3])) && (b3(v[0]) ^ b3(v[1])) == (b3(v[2]) ^ b3(v[3]));
    });
    t.relations["E12"] = enumerate(D, 2, [](const auto& v) { return b1(v[0]) == b2(v[1]); });
    t.relations["E23_0"] = enumerate(D, 2, [](const auto& v) {
        return b1(v[0]) == 0 && b1(v[1]) == 0 && b2(v[0]) == b3(v[1]);
    });
    t.relations["E13_0"] = enumerate(D, 2, [](const auto& v) {
        return b2(v[0]) == 0 && b2(v[1]) == 0 && b1(v[0]) == b3(v[1]);
    });
    t.relations["R"] = enumerate(D, 2, [](const auto& v) {
        return b1(v[0]) == b2(v[1]) && b2(v[0]) == b1(v[1]) && (b3(v[0]) ^ b3(v[1])) == (b1(v[0]) & b1(v[1]));
    });
    t.relations["zero"] = {{"000"}};
    return t;
}

Template d4_idemp() {
    Template t = d4_relations();
    t.name = "d4_idemp";
    for (const auto& e : t.domain) t.relations["c" + e] = {{e}};
    return t;
}

Template template_by_name(const std::string& name) {
    if (name == "horn3sat") return horn3sat();
    if (name == "two_sat") return two_sat();
    if (name == "bij5") return bij5();
    if (name == "z2_union_z3") return z2_union_z3();
    if (name == "z2_arrow_2") return z2_arrow_2();
    if (name == "d4") return d4_relations();
    if (name == "d4_idemp") return d4_idemp();
    int n = 0, p = 0;
    char close = 0;
    if (std::sscanf(name.c_str(), "lin(%d,%d%c", &n, &p, &close) == 3 && close == ')') return lin(n, p);
    throw UsageError("unknown template: " + name);
}

std::vector<std::string> template_names() {
    return {"horn3sat", "two_sat", "lin(n,p)", "bij5", "z2_union_z3", "z2_arrow_2", "d4", "d4_idemp"};
}

namespace {

std::vector<std::string> vars(std::initializer_list<const char*> names) {
    return {names.begin(), names.end()};
}

}  // namespace

std::string fooling_template(const std::string& name) {
    static const std::map<std::string, std::string> m = {
        {"twosat_cycle", "two_sat"},     {"lin32_contradiction", "lin(3,2)"}, {"bij5_cycle", "bij5"},
        {"z2z3_mixed", "z2_union_z3"},   {"z2z3_twin", "z2_union_z3"},    {"z2arrow2_chain", "z2_arrow_2"},    {"d4_main", "d4_idemp"},
        {"horn_chain", "horn3sat"}};
    auto it = m.find(name);
    if (it == m.end()) throw UsageError("unknown fooling instance: " + name);
    return it->second;
}

std::vector<std::string> fooling_instance_names() {
    return {"twosat_cycle", "lin32_contradiction", "bij5_cycle", "z2z3_mixed", "z2z3_twin", "z2arrow2_chain", "d4_main",
            "horn_chain"};
}

Instance fooling_instance(const std::string& name) {
    const Template t = template_by_name(fooling_template(name));
    InstanceBuilder b(t);
    if (name == "twosat_cycle") {
        b.add("le", vars({"x1", "x2"})).add("le", vars({"x2", "x3"})).add("le", vars({"x3", "x4"}));
        b.add("le", vars({"x4", "x1"})).add("neq", vars({"x1", "x3"}));
    } else if (name == "lin32_contradiction") {
        b.add("111=0", vars({"x1", "x2", "x3"})).add("111=1", vars({"x1", "x2", "x3"}));
    } else if (name == "bij5_cycle") {
        b.add("rho", vars({"x1", "x2"})).add("rho", vars({"x2", "x3"})).add("rho", vars({"x3", "x1"}));
        b.add("rho", vars({"x1", "x4"})).add("rho", vars({"x4", "x1"}));
    } else if (name == "z2z3_mixed") {
        // l1_z3(x,x,x) confines x to {0,1}; the two mod-2 equations then clash,
        // while the mod-3 equation on u,v,w is satisfiable on its own.
        b.add("l1_z3", vars({"x", "x", "x"}));
        b.add("l0_z2", vars({"x", "y", "z"})).add("l1_z2", vars({"x", "y", "z"}));
        b.add("l0_z3", vars({"u", "v", "w"}));
    } else if (name == "z2z3_twin") {
        // Clashing pairs mod 2 and mod 3 on three distinct variables: fixing
        // one value never shrinks a three-variable equation below BLP's reach.
        b.add("l0_z2", vars({"x", "y", "z"})).add("l1_z2", vars({"x", "y", "z"}));
        b.add("l0_z3", vars({"x", "y", "z"})).add("l1_z3", vars({"x", "y", "z"}));
    } else if (name == "z2arrow2_chain") {
        b.add("u01", vars({"x1"}));
        b.add("L4_0", vars({"x1", "x2", "x3", "x4"})).add("L3_0", vars({"x3", "x5", "x6"}));
        b.add("L3_1", vars({"x4", "x5", "x6"}));
        b.add("S", vars({"x1", "x2", "x7"}));
        b.add("L4_0", vars({"x7", "x8", "x9", "x10"})).add("L3_0", vars({"x9", "x11", "x12"}));
        b.add("L3_1", vars({"x10", "x11", "x12"}));
        b.add("S", vars({"x7", "x8", "x13"}));
        b.add("L4_0", vars({"x13", "x14", "x15", "x16"})).add("L4_0", vars({"x13", "x14", "x17", "x18"}));
        b.add("L4_1", vars({"x15", "x16", "x17", "x18"}));
    } else if (name == "d4_main") {
        b.add("L23_1", vars({"x1", "x2", "x3", "w"})).add("L13_2", vars({"y1", "y2", "y3", "w"}));
        b.add("R", vars({"x1", "y1"})).add("R", vars({"x2", "y2"}));
        b.add("L3_12", vars({"x3", "y3", "u", "v"})).add("c000", vars({"u"})).add("c001", vars({"v"}));
    } else if (name == "horn_chain") {
        b.add("one", vars({"x"})).add("one", vars({"y"})).add("clause", vars({"x", "y", "z"})).add("zero", vars({"z"}));
    }
    return b.build();
}

}  // namespace cspuniv
