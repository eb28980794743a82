#include "cspuniv/algorithms.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "cspuniv/errors.hpp"

namespace cspuniv {

AlgorithmSpec AlgorithmSpec::unary(Kind k, AlgorithmSpec x) {
    return {k, std::make_shared<const AlgorithmSpec>(std::move(x)), nullptr};
}

AlgorithmSpec AlgorithmSpec::binary(Kind k, AlgorithmSpec x, AlgorithmSpec y) {
    return {k, std::make_shared<const AlgorithmSpec>(std::move(x)), std::make_shared<const AlgorithmSpec>(std::move(y))};
}

// ---------------------------------------------------------------- parsing

namespace {

using K = AlgorithmSpec::Kind;

class Parser {
public:
    explicit Parser(std::string_view text) {
        for (char ch : text)
            if (!std::isspace(static_cast<unsigned char>(ch))) s_ += ch;
    }

    AlgorithmSpec parse() {
        auto out = spec();
        if (pos_ != s_.size()) error("unexpected input");
        return out;
    }

private:
    [[noreturn]] void error(const std::string& what) const {
        throw UsageError("algorithm spec '" + s_ + "' at offset " + std::to_string(pos_) + ": " + what);
    }

    bool take(std::string_view lit) {
        if (s_.compare(pos_, lit.size(), lit) != 0) return false;
        pos_ += lit.size();
        return true;
    }

    AlgorithmSpec spec() {
        auto left = unary();
        while (take("&")) left = AlgorithmSpec::binary(K::And, std::move(left), unary());
        return left;
    }

    AlgorithmSpec unary() {
        if (take("arccons>")) return AlgorithmSpec::unary(K::SeqArcCons, unary());
        if (take("blp>")) return AlgorithmSpec::unary(K::SeqBlp, unary());
        for (auto [lit, plain, then] : {std::tuple{"singl(", K::Singl, K::SinglThen},
                                        std::tuple{"csingl(", K::CSingl, K::CSinglThen}}) {
            if (!take(lit)) continue;
            auto inner = spec();
            if (!take(")")) error("expected ')'");
            if (take(">")) return AlgorithmSpec::binary(then, std::move(inner), unary());
            return AlgorithmSpec::unary(plain, std::move(inner));
        }
        if (take("arccons")) return AlgorithmSpec::atom(K::ArcCons);
        if (take("blp")) return AlgorithmSpec::atom(K::Blp);
        if (take("aip")) return AlgorithmSpec::atom(K::Aip);
        if (take("(")) {
            auto inner = spec();
            if (!take(")")) error("expected ')'");
            return inner;
        }
        error("expected an algorithm");
    }

    std::string s_;
    std::size_t pos_ = 0;
};

std::string print_unary_operand(const AlgorithmSpec& s) {
    auto text = to_string(s);
    return s.kind == K::And ? "(" + text + ")" : text;
}

}  // namespace

AlgorithmSpec parse_algorithm(std::string_view text) {
    return Parser(text).parse();
}

std::string to_string(const AlgorithmSpec& s) {
    switch (s.kind) {
        case K::ArcCons: return "arccons";
        case K::Blp: return "blp";
        case K::Aip: return "aip";
        case K::And: return to_string(*s.a) + "&" + print_unary_operand(*s.b);
        case K::SeqArcCons: return "arccons>" + print_unary_operand(*s.a);
        case K::SeqBlp: return "blp>" + print_unary_operand(*s.a);
        case K::Singl: return "singl(" + to_string(*s.a) + ")";
        case K::CSingl: return "csingl(" + to_string(*s.a) + ")";
        case K::SinglThen: return "singl(" + to_string(*s.a) + ")>" + print_unary_operand(*s.b);
        case K::CSinglThen: return "csingl(" + to_string(*s.a) + ")>" + print_unary_operand(*s.b);
    }
    return {};
}

// ---------------------------------------------------------------- traces

Instance replay(const Instance& input, const std::vector<ReductionEvent>& events) {
    Instance cur = input;
    for (const auto& e : events) {
        if (e.kind == ReductionEvent::Kind::DomainRemoval) {
            auto d = cur.domain(e.owner);
            std::erase(d, e.tuple.at(0));
            cur = reduce_domain(cur, e.owner, d);
        } else {
            for (auto& c : cur.constraints)
                if (c.id == e.owner) std::erase(c.tuples, e.tuple);
        }
    }
    return cur;
}

namespace {

// Events turning `before` into `after`, where `after` only removes things.
void diff_events(const Instance& before, const Instance& after, std::vector<ReductionEvent>& out) {
    for (const auto& x : before.variables)
        for (const auto& e : before.domain(x)) {
            const auto& nd = after.domain(x);
            if (std::find(nd.begin(), nd.end(), e) == nd.end())
                out.push_back({ReductionEvent::Kind::DomainRemoval, x, {e}});
        }
    for (std::size_t c = 0; c < before.constraints.size(); ++c) {
        const auto& nt = after.constraints[c].tuples;
        for (const auto& t : before.constraints[c].tuples)
            if (!std::binary_search(nt.begin(), nt.end(), t))
                out.push_back({ReductionEvent::Kind::TupleRemoval, before.constraints[c].id, t});
    }
}

// A verdict computed on a reduction of `input`; traces are re-rooted at `input`.
Verdict lift(Verdict v, const Instance& input, const Instance& derived) {
    if (auto* tr = std::get_if<ReductionTrace>(&v.certificate)) {
        std::vector<ReductionEvent> events;
        diff_events(input, derived, events);
        events.insert(events.end(), tr->events.begin(), tr->events.end());
        tr->events = std::move(events);
    }
    return v;
}

}  // namespace

// ---------------------------------------------------------------- atoms

Verdict arccons(const Instance& inst) {
    if (has_empty_domain_or_relation(inst)) return Verdict::no();
    Instance cur = inst;
    std::map<std::string, std::set<Element>> dom;
    for (const auto& x : cur.variables) dom[x] = {cur.domain(x).begin(), cur.domain(x).end()};
    auto order = constraints_in_order(cur);
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto ci : order) {
            auto& con = cur.constraints[ci];
            std::erase_if(con.tuples, [&](const Tuple& t) {
                for (std::size_t i = 0; i < t.size(); ++i)
                    if (!dom[con.scope[i]].count(t[i])) return true;
                return false;
            });
            if (con.tuples.empty()) return Verdict::no();
            for (std::size_t i = 0; i < con.scope.size(); ++i) {
                std::set<Element> proj;
                for (const auto& t : con.tuples) proj.insert(t[i]);
                auto& d = dom[con.scope[i]];
                if (proj.size() < d.size()) {
                    std::erase_if(d, [&](const Element& e) { return !proj.count(e); });
                    changed = true;
                    if (d.empty()) return Verdict::no();
                }
            }
        }
    }
    for (const auto& x : cur.variables) std::erase_if(cur.domains[x], [&](const Element& e) { return !dom[x].count(e); });
    Verdict v;
    v.yes = true;
    ReductionTrace tr;
    diff_events(inst, cur, tr.events);
    tr.final_instance = cur;
    v.certificate = std::move(tr);
    v.reduced = std::move(cur);
    return v;
}

Verdict blp(const Instance& inst) {
    if (has_empty_domain_or_relation(inst)) return Verdict::no();
    auto sol = lp_feasible_01(build_relaxation(inst, 1));
    if (!sol) return Verdict::no();
    Verdict v;
    v.yes = true;
    v.certificate = std::move(*sol);
    return v;
}

Verdict aip(const Instance& inst) {
    if (has_empty_domain_or_relation(inst)) return Verdict::no();
    auto sol = int_feasible(build_relaxation(inst, 1));
    if (!sol) return Verdict::no();
    Verdict v;
    v.yes = true;
    v.certificate = std::move(*sol);
    return v;
}

// ---------------------------------------------------------------- wrappers

namespace {

Verdict singl(const AlgorithmSpec& inner, const Instance& input, const RunOptions& opts) {
    if (has_empty_domain_or_relation(input)) return Verdict::no();
    Instance cur = input;
    std::vector<ReductionEvent> events;
    std::mt19937_64 rng(opts.sweep_seed);
    std::optional<Certificate> last;
    for (bool changed = true; changed;) {
        changed = false;
        auto xs = variables_in_order(cur);
        if (opts.sweep_seed) std::shuffle(xs.begin(), xs.end(), rng);
        for (const auto& x : xs) {
            auto values = cur.domain(x);
            if (opts.sweep_seed) std::shuffle(values.begin(), values.end(), rng);
            for (const auto& a : values) {
                auto r = run(inner, reduce_domain(cur, x, {a}), opts);
                if (r.yes) {
                    last = std::move(r.certificate);
                    continue;
                }
                auto keep = cur.domain(x);
                std::erase(keep, a);
                Instance next = reduce_domain(cur, x, keep);
                diff_events(cur, next, events);
                cur = std::move(next);
                changed = true;
                if (has_empty_domain_or_relation(cur)) {
                    Verdict v;
                    v.certificate = ReductionTrace{std::move(events), std::move(cur)};
                    return v;
                }
            }
        }
    }
    Verdict v;
    v.yes = true;
    v.reduced = cur;
    v.certificate = ReductionTrace{std::move(events), std::move(cur)};
    v.last_inner = std::move(last);
    return v;
}

Verdict csingl(const AlgorithmSpec& inner, const Instance& input, const RunOptions& opts) {
    if (has_empty_domain_or_relation(input)) return Verdict::no();
    Instance cur = input;
    std::vector<ReductionEvent> events;
    std::mt19937_64 rng(opts.sweep_seed);
    std::optional<Certificate> last;
    for (bool changed = true; changed;) {
        changed = false;
        auto order = constraints_in_order(cur);
        if (opts.sweep_seed) std::shuffle(order.begin(), order.end(), rng);
        for (auto ci : order) {
            const std::string cid = cur.constraints[ci].id;
            auto tuples = cur.constraints[ci].tuples;
            if (opts.sweep_seed) std::shuffle(tuples.begin(), tuples.end(), rng);
            for (const auto& t : tuples) {
                auto r = run(inner, change_constraint(cur, cid, {t}), opts);
                if (r.yes) {
                    last = std::move(r.certificate);
                    continue;
                }
                std::erase(cur.constraints[ci].tuples, t);
                events.push_back({ReductionEvent::Kind::TupleRemoval, cid, t});
                changed = true;
                if (cur.constraints[ci].tuples.empty()) {
                    Verdict v;
                    v.certificate = ReductionTrace{std::move(events), std::move(cur)};
                    return v;
                }
            }
        }
    }
    Verdict v;
    v.yes = true;
    v.reduced = cur;
    v.certificate = ReductionTrace{std::move(events), std::move(cur)};
    v.last_inner = std::move(last);
    return v;
}

}  // namespace

Verdict run(const AlgorithmSpec& spec, const Instance& inst, const RunOptions& opts) {
    switch (spec.kind) {
        case K::ArcCons: return arccons(inst);
        case K::Blp: return blp(inst);
        case K::Aip: return aip(inst);
        case K::And: {
            auto va = run(*spec.a, inst, opts);
            if (!va.yes) return Verdict::no();
            auto vb = run(*spec.b, inst, opts);
            if (!vb.yes) return Verdict::no();
            va.last_inner = std::move(vb.certificate);
            return va;
        }
        case K::SeqArcCons: {
            auto v = arccons(inst);
            if (!v.yes) return v;
            return lift(run(*spec.a, *v.reduced, opts), inst, *v.reduced);
        }
        case K::SeqBlp: {
            if (has_empty_domain_or_relation(inst)) return Verdict::no();
            auto sys = build_relaxation(inst, 1);
            auto ms = lp_max_support(sys);
            if (!ms) return Verdict::no();
            Instance pruned = prune_to_support(inst, sys, ms->support);
            return lift(run(*spec.a, pruned, opts), inst, pruned);
        }
        case K::Singl: return singl(*spec.a, inst, opts);
        case K::CSingl: return csingl(*spec.a, inst, opts);
        case K::SinglThen:
        case K::CSinglThen: {
            auto v = spec.kind == K::SinglThen ? singl(*spec.a, inst, opts) : csingl(*spec.a, inst, opts);
            if (!v.yes) return v;
            auto r = lift(run(*spec.b, *v.reduced, opts), inst, *v.reduced);
            if (!r.last_inner) r.last_inner = std::move(v.certificate);
            return r;
        }
    }
    throw UsageError("unknown algorithm kind");
}

Verdict run(std::string_view spec, const Instance& inst, const RunOptions& opts) {
    return run(parse_algorithm(spec), inst, opts);
}

// ---------------------------------------------------------------- oracle and checks

Verdict brute_force_solve(const Instance& inst, const SearchLimits& limits) {
    auto s = brute_force_search(inst, limits);
    if (!s) return Verdict::no();
    Verdict v;
    v.yes = true;
    v.certificate = std::move(*s);
    return v;
}

namespace {

template <class Sol>
bool lifted_solution_valid(const Instance& inst, const Sol& sol) {
    auto sys = build_relaxation(inst, 1);
    std::map<LPVar, std::size_t> where;
    for (std::size_t k = 0; k < sys.vars.size(); ++k) where[sys.vars[k]] = k;
    Sol full;
    full.vars = sys.vars;
    full.values.assign(sys.vars.size(), 0);
    for (std::size_t k = 0; k < sol.vars.size(); ++k) {
        auto it = where.find(sol.vars[k]);
        if (it == where.end()) return false;
        full.values[it->second] = sol.values[k];
    }
    return check_solution(sys, full);
}

}  // namespace

bool certificate_valid(const Instance& inst, const Certificate& cert) {
    return std::visit(
        [&](const auto& c) -> bool {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, std::monostate>) {
                return true;
            } else if constexpr (std::is_same_v<T, Assignment>) {
                return satisfies(inst, c);
            } else if constexpr (std::is_same_v<T, ReductionTrace>) {
                return replay(inst, c.events) == c.final_instance && !has_empty_domain_or_relation(c.final_instance);
            } else {
                return lifted_solution_valid(inst, c);
            }
        },
        cert);
}

}  // namespace cspuniv
