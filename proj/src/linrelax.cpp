#include "cspuniv/linrelax.hpp"

#include <algorithm>
#include <set>

#include <json.hpp>

#include "cspuniv/errors.hpp"
#include "simplex.hpp"

namespace cspuniv {

std::string LPVar::render() const {
    if (kind == Kind::ConstraintTuple) return "C:" + owner + ":" + tuple_key(tuple);
    return "X:" + owner + ":" + tuple.at(0);
}

std::optional<std::size_t> LinearSystem::index_of(const LPVar& v) const {
    for (std::size_t i = 0; i < vars.size(); ++i)
        if (vars[i] == v) return i;
    return std::nullopt;
}

namespace {

nlohmann::ordered_json big(const mpz_class& z) {
    if (z.fits_slong_p()) return z.get_si();
    return z.get_str();
}

}  // namespace

std::string LinearSystem::to_json() const {
    nlohmann::ordered_json root;
    auto jv = nlohmann::ordered_json::array();
    for (const auto& v : vars) jv.push_back(v.render());
    root["vars"] = jv;
    auto je = nlohmann::ordered_json::array();
    for (const auto& eq : equations) {
        nlohmann::ordered_json e;
        nlohmann::ordered_json coeffs = nlohmann::ordered_json::object();
        for (const auto& [k, c] : eq.coeffs) coeffs[vars[k].render()] = big(c);
        e["coeffs"] = coeffs;
        e["rhs"] = big(eq.rhs);
        je.push_back(e);
    }
    root["equations"] = je;
    return root.dump(2) + "\n";
}

mpq_class RationalSolution::at(const LPVar& v) const {
    for (std::size_t i = 0; i < vars.size(); ++i)
        if (vars[i] == v) return values[i];
    return 0;
}

mpz_class IntegerSolution::at(const LPVar& v) const {
    for (std::size_t i = 0; i < vars.size(); ++i)
        if (vars[i] == v) return values[i];
    return 0;
}

LinearSystem build_relaxation(const Instance& inst, const mpz_class& d) {
    LinearSystem sys;
    sys.d = d;
    std::vector<std::size_t> first_tuple(inst.constraints.size());
    for (std::size_t c = 0; c < inst.constraints.size(); ++c) {
        first_tuple[c] = sys.vars.size();
        for (const auto& t : inst.constraints[c].tuples)
            sys.vars.push_back(LPVar::tuple_weight(inst.constraints[c].id, t));
    }
    std::map<std::pair<std::string, Element>, std::size_t> xindex;
    for (const auto& x : inst.variables)
        for (const auto& b : inst.domain(x)) {
            xindex[{x, b}] = sys.vars.size();
            sys.vars.push_back(LPVar::value_weight(x, b));
        }
    for (std::size_t c = 0; c < inst.constraints.size(); ++c) {
        const auto& con = inst.constraints[c];
        Equation sum;
        for (std::size_t k = 0; k < con.tuples.size(); ++k) sum.coeffs.emplace_back(first_tuple[c] + k, 1);
        sum.rhs = d;
        sys.equations.push_back(std::move(sum));
        for (std::size_t i = 0; i < con.scope.size(); ++i) {
            for (const auto& b : inst.domain(con.scope[i])) {
                Equation eq;
                for (std::size_t k = 0; k < con.tuples.size(); ++k)
                    if (con.tuples[k][i] == b) eq.coeffs.emplace_back(first_tuple[c] + k, 1);
                eq.coeffs.emplace_back(xindex.at({con.scope[i], b}), -1);
                eq.rhs = 0;
                sys.equations.push_back(std::move(eq));
            }
        }
    }
    return sys;
}

bool check_solution(const LinearSystem& sys, const RationalSolution& s, bool unit_interval) {
    if (s.vars != sys.vars || s.values.size() != sys.vars.size()) return false;
    if (unit_interval)
        for (const auto& v : s.values)
            if (sgn(v) < 0 || v > 1) return false;
    for (const auto& eq : sys.equations) {
        mpq_class lhs = 0;
        for (const auto& [k, c] : eq.coeffs) lhs += c * s.values[k];
        if (lhs != eq.rhs) return false;
    }
    return true;
}

bool check_solution(const LinearSystem& sys, const IntegerSolution& s) {
    if (s.vars != sys.vars || s.values.size() != sys.vars.size()) return false;
    for (const auto& eq : sys.equations) {
        mpz_class lhs = 0;
        for (const auto& [k, c] : eq.coeffs) lhs += c * s.values[k];
        if (lhs != eq.rhs) return false;
    }
    return true;
}

bool is_d_solution(const Instance& inst, const IntegerSolution& s, const mpz_class& d) {
    for (const auto& v : s.values)
        if (sgn(v) < 0) return false;
    return check_solution(build_relaxation(inst, d), s);
}

std::optional<RationalSolution> lp_feasible_01(const LinearSystem& sys) {
    detail::BoundedSimplex sx(sys);
    if (!sx.find_feasible()) return std::nullopt;
    RationalSolution out{sys.vars, sx.values()};
    if (!check_solution(sys, out)) throw PropertyViolation("simplex returned a non-solution");
    return out;
}

namespace {

MaxSupport average(const LinearSystem& sys, const std::vector<std::vector<mpq_class>>& points) {
    MaxSupport ms;
    ms.solution.vars = sys.vars;
    ms.solution.values.assign(sys.vars.size(), 0);
    for (const auto& p : points)
        for (std::size_t k = 0; k < p.size(); ++k) ms.solution.values[k] += p[k];
    for (auto& v : ms.solution.values) v /= static_cast<long>(points.size());
    ms.support.resize(sys.vars.size());
    for (std::size_t k = 0; k < sys.vars.size(); ++k) ms.support[k] = sgn(ms.solution.values[k]) > 0;
    if (!check_solution(sys, ms.solution)) throw PropertyViolation("averaged solution is not a solution");
    return ms;
}

}  // namespace

std::optional<MaxSupport> lp_max_support(const LinearSystem& sys) {
    detail::BoundedSimplex sx(sys);
    if (!sx.find_feasible()) return std::nullopt;
    std::vector<std::vector<mpq_class>> points{sx.values()};
    std::vector<bool> known(sys.vars.size());
    for (;;) {
        for (std::size_t k = 0; k < known.size(); ++k)
            if (sgn(points.back()[k]) > 0) known[k] = true;
        std::vector<int> weight(sys.vars.size());
        bool any = false;
        for (std::size_t k = 0; k < known.size(); ++k)
            if (!known[k]) weight[k] = 1, any = true;
        if (!any) break;
        if (sgn(sx.maximize(weight)) == 0) break;
        points.push_back(sx.values());
    }
    return average(sys, points);
}

std::optional<MaxSupport> lp_max_support_per_coordinate(const LinearSystem& sys) {
    detail::BoundedSimplex sx(sys);
    if (!sx.find_feasible()) return std::nullopt;
    std::vector<std::vector<mpq_class>> points{sx.values()};
    for (std::size_t k = 0; k < sys.vars.size(); ++k) {
        std::vector<int> weight(sys.vars.size());
        weight[k] = 1;
        sx.maximize(weight);
        points.push_back(sx.values());
    }
    return average(sys, points);
}

Instance prune_to_support(const Instance& inst, const LinearSystem& sys, const std::vector<bool>& support) {
    std::set<std::pair<std::string, Tuple>> keep;
    for (std::size_t k = 0; k < sys.vars.size(); ++k)
        if (support[k] && sys.vars[k].kind == LPVar::Kind::ConstraintTuple)
            keep.insert({sys.vars[k].owner, sys.vars[k].tuple});
    Instance out = inst;
    for (auto& c : out.constraints)
        std::erase_if(c.tuples, [&](const Tuple& t) { return !keep.count({c.id, t}); });
    return out;
}

namespace {

mpz_class lcm_of_denominators(const std::vector<mpq_class>& v) {
    mpz_class l = 1;
    for (const auto& q : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
    return l;
}

std::vector<mpz_class> scaled(const std::vector<mpq_class>& v, const mpz_class& q) {
    std::vector<mpz_class> out(v.size());
    for (std::size_t k = 0; k < v.size(); ++k) {
        mpq_class s = v[k] * q;
        if (s.get_den() != 1) throw PropertyViolation("scaling did not clear denominators");
        out[k] = s.get_num();
    }
    return out;
}

// C^a = 1/|R| for every constraint, marginals read off the first equation
// that mentions each x^b; kept only if it satisfies the whole system.
std::optional<RationalSolution> uniform_candidate(const Instance& inst, const LinearSystem& sys) {
    RationalSolution s;
    s.vars = sys.vars;
    s.values.assign(sys.vars.size(), 0);
    std::map<std::string, std::size_t> rel_size;
    for (const auto& c : inst.constraints) rel_size[c.id] = c.tuples.size();
    for (std::size_t k = 0; k < sys.vars.size(); ++k) {
        const auto& v = sys.vars[k];
        if (v.kind != LPVar::Kind::ConstraintTuple) continue;
        s.values[k] = mpq_class(1, rel_size.at(v.owner));
    }
    std::vector<bool> set(sys.vars.size());
    for (const auto& eq : sys.equations) {
        if (sgn(eq.rhs) != 0) continue;
        std::size_t xk = sys.vars.size();
        mpq_class total = 0;
        for (const auto& [k, c] : eq.coeffs) {
            if (sys.vars[k].kind == LPVar::Kind::VarValue)
                xk = k;
            else
                total += c * s.values[k];
        }
        if (xk < sys.vars.size() && !set[xk]) {
            s.values[xk] = total;
            set[xk] = true;
        }
    }
    if (!check_solution(sys, s)) return std::nullopt;
    return s;
}

// Nonnegative m1, m2 with m1*g1 + m2*g2 = d, if any.
std::optional<std::pair<mpz_class, mpz_class>> two_coin(const mpz_class& g1, const mpz_class& g2, const mpz_class& d) {
    mpz_class g = gcd(g1, g2);
    if (d % g != 0) return std::nullopt;
    mpz_class a = g1 / g, b = g2 / g, e = d / g;
    mpz_class m2 = 0;
    if (a != 1) {
        mpz_class inv;
        if (mpz_invert(inv.get_mpz_t(), b.get_mpz_t(), a.get_mpz_t()) == 0) return std::nullopt;
        m2 = (e % a) * inv % a;
        if (m2 < 0) m2 += a;
    }
    mpz_class rest = e - m2 * b;
    if (rest < 0) return std::nullopt;
    return std::make_pair(mpz_class(rest / a), m2);
}

}  // namespace

std::optional<ScalingData> blp_aip_scaling(const Instance& inst) {
    if (has_empty_domain_or_relation(inst)) return std::nullopt;
    auto sys = build_relaxation(inst, 1);
    auto ms = lp_max_support(sys);
    if (!ms) return std::nullopt;
    Instance pruned = prune_to_support(inst, sys, ms->support);
    auto psys = build_relaxation(pruned, 1);
    auto aip = int_feasible(psys);
    if (!aip) return std::nullopt;

    ScalingData out;
    out.blp = ms->solution;
    out.aip.vars = sys.vars;
    out.aip.values.assign(sys.vars.size(), 0);
    std::map<LPVar, std::size_t> where;
    for (std::size_t k = 0; k < sys.vars.size(); ++k) where[sys.vars[k]] = k;
    for (std::size_t k = 0; k < psys.vars.size(); ++k) out.aip.values[where.at(psys.vars[k])] = aip->values[k];

    mpz_class l = lcm_of_denominators(out.blp.values);
    mpz_class mult = 1;
    for (std::size_t k = 0; k < sys.vars.size(); ++k) {
        const auto& b = out.blp.values[k];
        const auto& a = out.aip.values[k];
        if (sgn(a) >= 0) continue;
        if (sgn(b) == 0) return std::nullopt;
        // need mult * l * b >= -a
        mpq_class need = mpq_class(-a) / (b * l);
        mpz_class c;
        mpz_cdiv_q(c.get_mpz_t(), need.get_num_mpz_t(), need.get_den_mpz_t());
        if (c > mult) mult = c;
    }
    out.q = l * mult;
    out.q_solution = scaled(out.blp.values, out.q);
    out.q_plus_1_solution = out.q_solution;
    for (std::size_t k = 0; k < sys.vars.size(); ++k) out.q_plus_1_solution[k] += out.aip.values[k];
    return out;
}

std::optional<IntegerSolution> find_d_solution(const Instance& inst, const mpz_class& d) {
    if (d <= 0) throw UsageError("d must be positive");
    if (has_empty_domain_or_relation(inst)) return std::nullopt;
    auto sys = build_relaxation(inst, 1);
    std::vector<std::pair<mpz_class, std::vector<mpz_class>>> gens;
    auto add_rational = [&](const std::vector<mpq_class>& v) {
        mpz_class q = lcm_of_denominators(v);
        gens.emplace_back(q, scaled(v, q));
    };
    if (auto u = uniform_candidate(inst, sys)) add_rational(u->values);
    auto plain = lp_feasible_01(sys);
    if (!plain) return std::nullopt;
    add_rational(plain->values);
    if (auto sc = blp_aip_scaling(inst)) {
        add_rational(sc->blp.values);
        gens.emplace_back(sc->q, sc->q_solution);
        gens.emplace_back(sc->q + 1, sc->q_plus_1_solution);
    }

    auto emit = [&](const std::vector<std::pair<mpz_class, const std::vector<mpz_class>*>>& parts) {
        IntegerSolution s;
        s.vars = sys.vars;
        s.values.assign(sys.vars.size(), 0);
        for (const auto& [mult, vec] : parts)
            for (std::size_t k = 0; k < vec->size(); ++k) s.values[k] += mult * (*vec)[k];
        if (!is_d_solution(inst, s, d)) throw PropertyViolation("combined d-solution failed verification");
        return s;
    };
    for (const auto& [g, v] : gens)
        if (d % g == 0) return emit({{d / g, &v}});
    for (std::size_t i = 0; i < gens.size(); ++i)
        for (std::size_t j = i + 1; j < gens.size(); ++j)
            if (auto mm = two_coin(gens[i].first, gens[j].first, d))
                return emit({{mm->first, &gens[i].second}, {mm->second, &gens[j].second}});
    return std::nullopt;
}

std::vector<Tuple> parallelogram_closure(const std::vector<Tuple>& relation, std::size_t arity) {
    for (const auto& t : relation)
        if (t.size() != arity) throw UsageError("parallelogram_closure: tuple arity mismatch");
    std::set<Tuple> closed(relation.begin(), relation.end());
    if (arity > 20) throw ResourceError("parallelogram_closure: arity too large");
    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<Tuple> cur(closed.begin(), closed.end());
        for (std::uint32_t mask = 1; mask + 1 < (1u << arity); ++mask) {
            auto key = [&](const Tuple& t, bool inside) {
                Tuple k;
                for (std::size_t i = 0; i < arity; ++i)
                    if (((mask >> i) & 1u) == static_cast<unsigned>(inside)) k.push_back(t[i]);
                return k;
            };
            std::map<Tuple, std::vector<const Tuple*>> by_in, by_out;
            for (const auto& t : cur) {
                by_in[key(t, true)].push_back(&t);
                by_out[key(t, false)].push_back(&t);
            }
            // a,b agree on I; a,c agree off I; the completion takes c on I and b off I
            for (const auto& a : cur)
                for (const Tuple* b : by_in[key(a, true)])
                    for (const Tuple* c : by_out[key(a, false)]) {
                        Tuple d(arity);
                        for (std::size_t i = 0; i < arity; ++i) d[i] = ((mask >> i) & 1u) ? (*c)[i] : (*b)[i];
                        if (closed.insert(d).second) changed = true;
                    }
        }
    }
    return {closed.begin(), closed.end()};
}

}  // namespace cspuniv
