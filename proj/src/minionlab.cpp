#include "cspuniv/minionlab.hpp"

#include <algorithm>
#include <set>

#include <json.hpp>

#include "cspuniv/algorithms.hpp"
#include "cspuniv/errors.hpp"
#include "cspuniv/linrelax.hpp"

namespace cspuniv {

MinorMap MinorMap::identity(const std::vector<std::string>& rows) {
    MinorMap m;
    m.target = rows;
    for (const auto& r : rows) m.pi[r] = r;
    return m;
}

MinorMap MinorMap::after(const MinorMap& first) const {
    MinorMap m;
    m.target = target;
    for (const auto& [i, j] : first.pi) {
        auto it = pi.find(j);
        if (it == pi.end()) throw UsageError("minor maps do not compose: " + j + " has no image");
        m.pi[i] = it->second;
    }
    return m;
}

namespace {

std::map<std::string, std::size_t> row_index(const std::vector<std::string>& rows) {
    std::map<std::string, std::size_t> idx;
    for (std::size_t r = 0; r < rows.size(); ++r)
        if (!idx.emplace(rows[r], r).second) throw UsageError("duplicate row " + rows[r]);
    return idx;
}

// For every source row, the target row index.
std::vector<std::size_t> pull(const std::vector<std::string>& rows, const MinorMap& pi) {
    auto tidx = row_index(pi.target);
    std::vector<std::size_t> out;
    for (const auto& r : rows) {
        auto p = pi.pi.find(r);
        if (p == pi.pi.end()) throw UsageError("minor map is not defined on row " + r);
        auto t = tidx.find(p->second);
        if (t == tidx.end()) throw UsageError("minor map sends " + r + " outside its target");
        out.push_back(t->second);
    }
    return out;
}

}  // namespace

std::string SkeletonMatrix::violation() const {
    if (entries.size() != rows.size()) return "row count mismatch";
    for (const auto& row : entries)
        if (row.size() != width) return "row width mismatch";
    std::vector<int> ones(width, 0);
    for (const auto& row : entries)
        for (std::size_t j = 0; j < width; ++j) ones[j] += row[j] != 0;
    for (std::size_t j = 0; j < width; ++j)
        if (!ones[j]) return "column " + std::to_string(j) + " has no 1";
    for (std::size_t r = 0; r < rows.size(); ++r) {
        bool any = false, isolated = false;
        for (std::size_t j = 0; j < width; ++j) {
            if (!entries[r][j]) continue;
            any = true;
            if (ones[j] == 1) isolated = true;
        }
        if (any && !isolated) return "row " + rows[r] + " has no column of its own";
    }
    return "";
}

std::string BlpAipPair::violation() const {
    if (blp.size() != rows.size() || aip.size() != rows.size()) return "row count mismatch";
    for (std::size_t r = 0; r < rows.size(); ++r)
        if (blp[r].size() != width || aip[r].size() != width) return "row width mismatch";
    for (std::size_t j = 0; j < width; ++j) {
        mpq_class sb = 0;
        mpz_class sa = 0;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (blp[r][j] < 0 || blp[r][j] > 1) return "BLP entry outside [0,1]";
            if (aip[r][j] != 0 && blp[r][j] <= 0) return "AIP nonzero where BLP is zero at row " + rows[r];
            sb += blp[r][j];
            sa += aip[r][j];
        }
        if (sb != 1 || sa != 1) return "column " + std::to_string(j) + " does not sum to 1";
    }
    for (std::size_t r = 0; r < rows.size(); ++r) {
        bool any = false, isolated = false;
        for (std::size_t j = 0; j < width; ++j) {
            if (blp[r][j] <= 0) continue;
            any = true;
            bool own = blp[r][j] == 1 && aip[r][j] == 1;
            for (std::size_t o = 0; own && o < rows.size(); ++o)
                if (o != r && (blp[o][j] != 0 || aip[o][j] != 0)) own = false;
            if (own) isolated = true;
        }
        if (any && !isolated) return "row " + rows[r] + " has no column of its own";
    }
    return "";
}

SkeletonMatrix minor_skeleton(const SkeletonMatrix& m, const MinorMap& pi) {
    auto to = pull(m.rows, pi);
    SkeletonMatrix out{pi.target, m.width, std::vector<std::vector<std::uint8_t>>(pi.target.size(),
                                                                                  std::vector<std::uint8_t>(m.width, 0))};
    for (std::size_t r = 0; r < m.rows.size(); ++r)
        for (std::size_t j = 0; j < m.width; ++j) out.entries[to[r]][j] |= m.entries[r][j];
    if (m.valid()) {
        auto why = out.violation();
        if (!why.empty()) throw PropertyViolation("minor of a skeleton matrix: " + why);
    }
    return out;
}

BlpAipPair minor_pair(const BlpAipPair& p, const MinorMap& pi) {
    auto to = pull(p.rows, pi);
    BlpAipPair out;
    out.rows = pi.target;
    out.width = p.width;
    out.blp.assign(pi.target.size(), std::vector<mpq_class>(p.width, 0));
    out.aip.assign(pi.target.size(), std::vector<mpz_class>(p.width, 0));
    for (std::size_t r = 0; r < p.rows.size(); ++r)
        for (std::size_t j = 0; j < p.width; ++j) {
            out.blp[to[r]][j] += p.blp[r][j];
            out.aip[to[r]][j] += p.aip[r][j];
        }
    if (p.valid()) {
        auto why = out.violation();
        if (!why.empty()) throw PropertyViolation("minor of a BLP/AIP pair: " + why);
    }
    return out;
}

MinorMap projection(const Instance& inst, const Constraint& c, std::size_t k) {
    MinorMap m;
    m.target = inst.domain(c.scope.at(k));
    for (const auto& t : c.tuples) m.pi[tuple_key(t)] = t[k];
    return m;
}

namespace {

std::vector<std::string> tuple_rows(const Constraint& c) {
    std::vector<std::string> rows;
    for (const auto& t : c.tuples) rows.push_back(tuple_key(t));
    return rows;
}

std::set<std::string> constrained_variables(const Instance& inst) {
    std::set<std::string> s;
    for (const auto& c : inst.constraints) s.insert(c.scope.begin(), c.scope.end());
    return s;
}

template <class Matrix>
std::string check_witness(const Instance& inst, const MinionWitness<Matrix>& w, Matrix (*minor)(const Matrix&,
                                                                                                  const MinorMap&)) {
    const std::size_t L = w.columns.size();
    for (const auto& x : inst.variables) {
        auto it = w.variables.find(x);
        if (it == w.variables.end()) return "no matrix for variable " + x;
        if (it->second.width != L) return "width of " + x + " differs from the column count";
        if (it->second.rows != inst.domain(x)) return "rows of " + x + " differ from its domain";
        auto why = it->second.violation();
        if (!why.empty()) return x + ": " + why;
    }
    for (const auto& c : inst.constraints) {
        auto it = w.constraints.find(c.id);
        if (it == w.constraints.end()) return "no matrix for constraint " + c.id;
        if (it->second.width != L) return "width of " + c.id + " differs from the column count";
        if (it->second.rows != tuple_rows(c)) return "rows of " + c.id + " differ from its relation";
        auto why = it->second.violation();
        if (!why.empty()) return c.id + ": " + why;
        for (std::size_t k = 0; k < c.scope.size(); ++k)
            if (!(minor(it->second, projection(inst, c, k)) == w.variables.at(c.scope[k])))
                return c.id + " position " + std::to_string(k + 1) + " does not project onto " + c.scope[k];
    }
    return "";
}

}  // namespace

std::string witness_violation(const Instance& inst, const ArcWitness& w) {
    return check_witness<SkeletonMatrix>(inst, w, &minor_skeleton);
}

std::string witness_violation(const Instance& inst, const PairWitness& w) {
    return check_witness<BlpAipPair>(inst, w, &minor_pair);
}

// ---------------------------------------------------------------- extraction

namespace {

// Surviving (constraint, tuple) pairs in constraint id order, tuples sorted.
std::vector<std::pair<std::string, Tuple>> columns_of(const Instance& reduced) {
    std::vector<std::pair<std::string, Tuple>> cols;
    for (auto ci : constraints_in_order(reduced))
        for (const auto& t : reduced.constraints[ci].tuples) cols.push_back({reduced.constraints[ci].id, t});
    return cols;
}

}  // namespace

std::optional<ArcWitness> extract_witness_arccons(const Instance& inst) {
    auto v = run("csingl(arccons)", inst);
    if (!v.yes) return std::nullopt;
    const Instance& reduced = *v.reduced;
    ArcWitness w;
    w.columns = columns_of(reduced);
    const std::size_t L = w.columns.size();
    const auto constrained = constrained_variables(inst);

    for (const auto& x : inst.variables) {
        const auto& D = inst.domain(x);
        w.variables[x] = {D, L, std::vector<std::vector<std::uint8_t>>(D.size(), std::vector<std::uint8_t>(L, 0))};
        // A variable outside every constraint sits on its first value.
        if (!constrained.count(x))
            for (std::size_t j = 0; j < L; ++j) w.variables[x].entries[0][j] = 1;
    }
    for (const auto& c : inst.constraints)
        w.constraints[c.id] = {tuple_rows(c), L,
                               std::vector<std::vector<std::uint8_t>>(c.tuples.size(), std::vector<std::uint8_t>(L, 0))};

    for (std::size_t j = 0; j < L; ++j) {
        const auto& [cid, t] = w.columns[j];
        auto r = arccons(change_constraint(reduced, cid, {t}));
        if (!r.yes) throw PropertyViolation("csingl(arccons) kept " + cid + ":" + tuple_key(t) + " but arccons refutes it");
        const Instance& col = *r.reduced;
        for (const auto& x : inst.variables) {
            if (!constrained.count(x)) continue;
            const auto& keep = col.domain(x);
            auto& M = w.variables[x];
            for (std::size_t a = 0; a < M.rows.size(); ++a)
                M.entries[a][j] = std::find(keep.begin(), keep.end(), M.rows[a]) != keep.end();
        }
        for (const auto& c : inst.constraints) {
            const auto& alive = col.constraint(c.id).tuples;
            auto& M = w.constraints[c.id];
            for (std::size_t a = 0; a < c.tuples.size(); ++a)
                M.entries[a][j] = std::binary_search(alive.begin(), alive.end(), c.tuples[a]);
        }
    }
    auto why = witness_violation(inst, w);
    if (!why.empty()) throw PropertyViolation("extract_witness_arccons: " + why);
    return w;
}

std::optional<PairWitness> extract_witness_blpaip(const Instance& inst) {
    auto v = run("csingl(blp>aip)", inst);
    if (!v.yes) return std::nullopt;
    const Instance& reduced = *v.reduced;
    PairWitness w;
    w.columns = columns_of(reduced);
    const std::size_t L = w.columns.size();
    const auto constrained = constrained_variables(inst);

    auto blank = [L](std::vector<std::string> rows) {
        BlpAipPair p;
        p.width = L;
        p.blp.assign(rows.size(), std::vector<mpq_class>(L, 0));
        p.aip.assign(rows.size(), std::vector<mpz_class>(L, 0));
        p.rows = std::move(rows);
        return p;
    };
    for (const auto& x : inst.variables) {
        w.variables[x] = blank(inst.domain(x));
        if (!constrained.count(x))
            for (std::size_t j = 0; j < L; ++j) w.variables[x].blp[0][j] = w.variables[x].aip[0][j] = 1;
    }
    for (const auto& c : inst.constraints) w.constraints[c.id] = blank(tuple_rows(c));

    for (std::size_t j = 0; j < L; ++j) {
        const auto& [cid, t] = w.columns[j];
        // The two solutions blp>aip computes on this restriction.
        Instance col = change_constraint(reduced, cid, {t});
        auto sys = build_relaxation(col, 1);
        auto ms = lp_max_support(sys);
        std::optional<IntegerSolution> zs;
        if (ms) zs = int_feasible(build_relaxation(prune_to_support(col, sys, ms->support), 1));
        if (!zs) throw PropertyViolation("csingl(blp>aip) kept " + cid + ":" + tuple_key(t) + " but blp>aip refutes it");
        const RationalSolution& sb = ms->solution;
        for (const auto& x : inst.variables) {
            if (!constrained.count(x)) continue;
            auto& P = w.variables[x];
            for (std::size_t a = 0; a < P.rows.size(); ++a) {
                P.blp[a][j] = sb.at(LPVar::value_weight(x, P.rows[a]));
                P.aip[a][j] = zs->at(LPVar::value_weight(x, P.rows[a]));
            }
        }
        for (const auto& c : inst.constraints) {
            auto& P = w.constraints[c.id];
            for (std::size_t a = 0; a < c.tuples.size(); ++a) {
                P.blp[a][j] = sb.at(LPVar::tuple_weight(c.id, c.tuples[a]));
                P.aip[a][j] = zs->at(LPVar::tuple_weight(c.id, c.tuples[a]));
            }
        }
    }
    auto why = witness_violation(inst, w);
    if (!why.empty()) throw PropertyViolation("extract_witness_blpaip: " + why);
    return w;
}

namespace {

using nlohmann::ordered_json;

template <class Matrix, class Cell>
ordered_json witness_json(const MinionWitness<Matrix>& w, Cell cell) {
    ordered_json j;
    j["result"] = "witness";
    j["width"] = w.columns.size();
    ordered_json cols = ordered_json::array();
    for (const auto& [cid, t] : w.columns) cols.push_back({{"constraint", cid}, {"tuple", t}});
    j["columns"] = cols;
    auto dump = [&](const std::map<std::string, Matrix>& ms) {
        ordered_json out = ordered_json::object();
        for (const auto& [name, m] : ms) {
            ordered_json rows = ordered_json::object();
            for (std::size_t r = 0; r < m.rows.size(); ++r) rows[m.rows[r]] = cell(m, r);
            out[name] = rows;
        }
        return out;
    };
    j["variables"] = dump(w.variables);
    j["constraints"] = dump(w.constraints);
    return j;
}

}  // namespace

std::string to_json(const ArcWitness& w) {
    return witness_json(w, [](const SkeletonMatrix& m, std::size_t r) {
               std::string s;
               for (auto b : m.entries[r]) s += char('0' + b);
               return ordered_json(s);
           }).dump(2) +
           "\n";
}

std::string to_json(const PairWitness& w) {
    return witness_json(w, [](const BlpAipPair& m, std::size_t r) {
               ordered_json blp = ordered_json::array(), aip = ordered_json::array();
               for (const auto& q : m.blp[r]) blp.push_back(q.get_str());
               for (const auto& z : m.aip[r]) aip.push_back(z.get_str());
               return ordered_json{{"blp", blp}, {"aip", aip}};
           }).dump(2) +
           "\n";
}

}  // namespace cspuniv
