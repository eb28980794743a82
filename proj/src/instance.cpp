#include "cspuniv/instance.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include <json.hpp>

#include "cspuniv/errors.hpp"

namespace cspuniv {

using nlohmann::ordered_json;

const std::vector<Element>& Instance::domain(const std::string& x) const {
    auto it = domains.find(x);
    if (it == domains.end()) throw UsageError("unknown variable '" + x + "'");
    return it->second;
}

const Constraint& Instance::constraint(const std::string& cid) const {
    for (const auto& c : constraints)
        if (c.id == cid) return c;
    throw UsageError("unknown constraint '" + cid + "'");
}

bool Instance::has_variable(const std::string& x) const {
    return domains.count(x) != 0;
}

std::string tuple_key(const Tuple& t) {
    std::string out;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (i) out += ',';
        out += t[i];
    }
    return out;
}

namespace {

bool contains(const std::vector<Element>& v, const Element& e) {
    return std::find(v.begin(), v.end(), e) != v.end();
}

}  // namespace

void validate(const Instance& inst) {
    std::set<std::string> seen;
    for (const auto& x : inst.variables) {
        if (x.empty()) throw UsageError("empty variable id");
        if (!seen.insert(x).second) throw UsageError("duplicate variable '" + x + "'");
        auto it = inst.domains.find(x);
        if (it == inst.domains.end()) throw UsageError("variable '" + x + "' has no domain");
        std::set<Element> els;
        for (const auto& e : it->second) {
            if (e.empty()) throw UsageError("empty element id in domain of '" + x + "'");
            if (!els.insert(e).second) throw UsageError("duplicate element '" + e + "' in domain of '" + x + "'");
        }
    }
    if (inst.domains.size() != inst.variables.size()) throw UsageError("domain given for an undeclared variable");
    std::set<std::string> cids;
    for (const auto& c : inst.constraints) {
        if (!cids.insert(c.id).second) throw UsageError("duplicate constraint id '" + c.id + "'");
        if (c.scope.empty()) throw UsageError("constraint '" + c.id + "' has an empty scope");
        for (const auto& x : c.scope)
            if (!inst.has_variable(x)) throw UsageError("constraint '" + c.id + "' uses unknown variable '" + x + "'");
        for (std::size_t k = 0; k < c.tuples.size(); ++k) {
            const auto& t = c.tuples[k];
            if (t.size() != c.scope.size())
                throw UsageError("constraint '" + c.id + "': tuple arity " + std::to_string(t.size()) +
                                 " differs from scope length " + std::to_string(c.scope.size()));
            for (std::size_t i = 0; i < t.size(); ++i)
                if (!contains(inst.domain(c.scope[i]), t[i]))
                    throw UsageError("constraint '" + c.id + "': element '" + t[i] + "' not in domain of '" +
                                     c.scope[i] + "'");
            if (k > 0 && !(c.tuples[k - 1] < t))
                throw UsageError("constraint '" + c.id + "': tuples not sorted or not distinct");
        }
    }
}

void normalize(Instance& inst) {
    for (auto& c : inst.constraints) {
        std::sort(c.tuples.begin(), c.tuples.end());
        c.tuples.erase(std::unique(c.tuples.begin(), c.tuples.end()), c.tuples.end());
    }
}

std::vector<std::string> variables_in_order(const Instance& inst) {
    auto xs = inst.variables;
    std::sort(xs.begin(), xs.end());
    return xs;
}

std::vector<std::size_t> constraints_in_order(const Instance& inst) {
    std::vector<std::size_t> idx(inst.constraints.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return inst.constraints[a].id < inst.constraints[b].id; });
    return idx;
}

bool has_empty_domain_or_relation(const Instance& inst) {
    for (const auto& [x, d] : inst.domains)
        if (d.empty()) return true;
    for (const auto& c : inst.constraints)
        if (c.tuples.empty()) return true;
    return false;
}

Instance reduce_domain(const Instance& inst, const std::string& x, const std::vector<Element>& keep) {
    const auto& dom = inst.domain(x);
    for (const auto& e : keep)
        if (!contains(dom, e)) throw UsageError("element '" + e + "' is not in the domain of '" + x + "'");
    Instance out = inst;
    auto& nd = out.domains[x];
    nd.clear();
    for (const auto& e : dom)
        if (contains(keep, e)) nd.push_back(e);
    for (auto& c : out.constraints) {
        std::vector<std::size_t> pos;
        for (std::size_t i = 0; i < c.scope.size(); ++i)
            if (c.scope[i] == x) pos.push_back(i);
        if (pos.empty()) continue;
        std::erase_if(c.tuples, [&](const Tuple& t) {
            return std::any_of(pos.begin(), pos.end(), [&](std::size_t i) { return !contains(nd, t[i]); });
        });
    }
    return out;
}

Instance change_constraint(const Instance& inst, const std::string& cid, std::vector<Tuple> relation) {
    Instance out = inst;
    for (auto& c : out.constraints) {
        if (c.id != cid) continue;
        for (const auto& t : relation) {
            if (t.size() != c.scope.size())
                throw UsageError("constraint '" + cid + "': tuple arity " + std::to_string(t.size()) +
                                 " differs from scope length " + std::to_string(c.scope.size()));
            for (std::size_t i = 0; i < t.size(); ++i)
                if (!contains(inst.domain(c.scope[i]), t[i]))
                    throw UsageError("constraint '" + cid + "': element '" + t[i] + "' not in domain of '" +
                                     c.scope[i] + "'");
        }
        std::sort(relation.begin(), relation.end());
        relation.erase(std::unique(relation.begin(), relation.end()), relation.end());
        c.tuples = std::move(relation);
        return out;
    }
    throw UsageError("unknown constraint '" + cid + "'");
}

bool satisfies(const Instance& inst, const Assignment& s) {
    for (const auto& x : inst.variables) {
        auto it = s.find(x);
        if (it == s.end() || !contains(inst.domain(x), it->second)) return false;
    }
    for (const auto& c : inst.constraints) {
        Tuple t;
        t.reserve(c.scope.size());
        for (const auto& x : c.scope) t.push_back(s.at(x));
        if (!std::binary_search(c.tuples.begin(), c.tuples.end(), t)) return false;
    }
    return true;
}

namespace {

// Backtracking over variables in declaration order. After each assignment,
// every constraint touching the variable must still have a tuple that agrees
// with all assigned positions.
class Search {
public:
    Search(const Instance& inst, std::uint64_t cap) : inst_(inst), cap_(cap) {
        std::map<std::string, std::size_t> index;
        for (std::size_t i = 0; i < inst.variables.size(); ++i) index[inst.variables[i]] = i;
        touching_.resize(inst.variables.size());
        scope_idx_.resize(inst.constraints.size());
        for (std::size_t c = 0; c < inst.constraints.size(); ++c) {
            for (const auto& x : inst.constraints[c].scope) scope_idx_[c].push_back(index.at(x));
            std::set<std::size_t> vs(scope_idx_[c].begin(), scope_idx_[c].end());
            for (auto v : vs) touching_[v].push_back(c);
        }
        value_.assign(inst.variables.size(), nullptr);
    }

    std::optional<Assignment> run() {
        if (has_empty_domain_or_relation(inst_)) return std::nullopt;
        if (!step(0)) return std::nullopt;
        Assignment out;
        for (std::size_t i = 0; i < inst_.variables.size(); ++i) out[inst_.variables[i]] = *value_[i];
        return out;
    }

private:
    bool consistent(std::size_t c) const {
        const auto& idx = scope_idx_[c];
        for (const auto& t : inst_.constraints[c].tuples) {
            bool ok = true;
            for (std::size_t i = 0; i < idx.size() && ok; ++i)
                if (value_[idx[i]] && *value_[idx[i]] != t[i]) ok = false;
            if (ok) return true;
        }
        return false;
    }

    bool step(std::size_t v) {
        if (v == inst_.variables.size()) return true;
        for (const auto& e : inst_.domain(inst_.variables[v])) {
            if (++nodes_ > cap_) throw ResourceError("brute-force node cap exceeded");
            value_[v] = &e;
            bool ok = true;
            for (auto c : touching_[v])
                if (!consistent(c)) {
                    ok = false;
                    break;
                }
            if (ok && step(v + 1)) return true;
        }
        value_[v] = nullptr;
        return false;
    }

    const Instance& inst_;
    std::uint64_t cap_;
    std::uint64_t nodes_ = 0;
    std::vector<std::vector<std::size_t>> touching_;
    std::vector<std::vector<std::size_t>> scope_idx_;
    std::vector<const Element*> value_;
};

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ParseError(path + ": " + what);
}

const ordered_json& field(const ordered_json& obj, const std::string& key, const std::string& path) {
    if (!obj.is_object()) fail(path, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) fail(path + "/" + key, "missing");
    return *it;
}

std::string as_string(const ordered_json& j, const std::string& path) {
    if (!j.is_string()) fail(path, "expected a string");
    auto s = j.get<std::string>();
    if (s.empty()) fail(path, "empty string");
    return s;
}

const ordered_json& as_array(const ordered_json& j, const std::string& path) {
    if (!j.is_array()) fail(path, "expected an array");
    return j;
}

}  // namespace

std::optional<Assignment> brute_force_search(const Instance& inst, const SearchLimits& limits) {
    return Search(inst, limits.node_cap).run();
}

Instance load_instance(std::string_view json_text) {
    ordered_json root;
    try {
        root = ordered_json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        fail("", std::string("invalid JSON: ") + e.what());
    }
    Instance inst;
    const auto& vars = as_array(field(root, "variables", ""), "/variables");
    std::set<std::string> declared;
    for (std::size_t i = 0; i < vars.size(); ++i) {
        auto x = as_string(vars[i], "/variables/" + std::to_string(i));
        if (!declared.insert(x).second) fail("/variables/" + std::to_string(i), "duplicate variable '" + x + "'");
        inst.variables.push_back(x);
    }
    const auto& doms = field(root, "domains", "");
    if (!doms.is_object()) fail("/domains", "expected an object");
    for (const auto& [x, vals] : doms.items()) {
        std::string p = "/domains/" + x;
        if (!declared.count(x)) fail(p, "domain for undeclared variable");
        as_array(vals, p);
        std::vector<Element> d;
        for (std::size_t i = 0; i < vals.size(); ++i) {
            auto e = as_string(vals[i], p + "/" + std::to_string(i));
            if (contains(d, e)) fail(p + "/" + std::to_string(i), "duplicate element '" + e + "'");
            d.push_back(e);
        }
        inst.domains[x] = std::move(d);
    }
    for (const auto& x : inst.variables)
        if (!inst.domains.count(x)) fail("/domains/" + x, "missing");
    const auto& cons = as_array(field(root, "constraints", ""), "/constraints");
    std::set<std::string> cids;
    for (std::size_t k = 0; k < cons.size(); ++k) {
        std::string p = "/constraints/" + std::to_string(k);
        Constraint c;
        c.id = as_string(field(cons[k], "id", p), p + "/id");
        if (!cids.insert(c.id).second) fail(p + "/id", "duplicate constraint id '" + c.id + "'");
        const auto& scope = as_array(field(cons[k], "scope", p), p + "/scope");
        if (scope.empty()) fail(p + "/scope", "empty scope");
        for (std::size_t i = 0; i < scope.size(); ++i) {
            auto x = as_string(scope[i], p + "/scope/" + std::to_string(i));
            if (!declared.count(x)) fail(p + "/scope/" + std::to_string(i), "unknown variable '" + x + "'");
            c.scope.push_back(x);
        }
        const auto& tuples = as_array(field(cons[k], "tuples", p), p + "/tuples");
        for (std::size_t t = 0; t < tuples.size(); ++t) {
            std::string tp = p + "/tuples/" + std::to_string(t);
            as_array(tuples[t], tp);
            if (tuples[t].size() != c.scope.size()) fail(tp, "tuple length differs from scope length");
            Tuple tup;
            for (std::size_t i = 0; i < tuples[t].size(); ++i) {
                auto e = as_string(tuples[t][i], tp + "/" + std::to_string(i));
                if (!contains(inst.domains.at(c.scope[i]), e))
                    fail(tp + "/" + std::to_string(i), "element '" + e + "' not in domain of '" + c.scope[i] + "'");
                tup.push_back(e);
            }
            c.tuples.push_back(std::move(tup));
        }
        std::sort(c.tuples.begin(), c.tuples.end());
        if (std::adjacent_find(c.tuples.begin(), c.tuples.end()) != c.tuples.end())
            fail(p + "/tuples", "duplicate tuple");
        inst.constraints.push_back(std::move(c));
    }
    return inst;
}

std::string save_instance(const Instance& inst) {
    ordered_json root;
    root["variables"] = inst.variables;
    ordered_json doms = ordered_json::object();
    for (const auto& x : inst.variables) doms[x] = inst.domain(x);
    root["domains"] = doms;
    ordered_json cons = ordered_json::array();
    for (const auto& c : inst.constraints) {
        ordered_json jc;
        jc["id"] = c.id;
        jc["scope"] = c.scope;
        auto tuples = c.tuples;
        std::sort(tuples.begin(), tuples.end());
        jc["tuples"] = tuples;
        cons.push_back(jc);
    }
    root["constraints"] = cons;
    return root.dump(2) + "\n";
}

}  // namespace cspuniv
