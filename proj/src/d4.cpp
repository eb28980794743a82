#include "cspuniv/d4.hpp"

#include <algorithm>
#include <cctype>
#include <random>
#include <set>

#include <json.hpp>

#include "cspuniv/errors.hpp"

namespace cspuniv {

G8 G8::from_index(int i) {
    if (i < 0 || i > 7) throw UsageError("G8 index out of range");
    return G8{{static_cast<std::uint8_t>(i >> 2 & 1), static_cast<std::uint8_t>(i >> 1 & 1),
               static_cast<std::uint8_t>(i & 1)}};
}

G8 G8::parse(const std::string& s) {
    if (s.size() != 3 || s.find_first_not_of("01") != std::string::npos)
        throw UsageError("not an element of Z2^3: " + s);
    return G8{{static_cast<std::uint8_t>(s[0] - '0'), static_cast<std::uint8_t>(s[1] - '0'),
               static_cast<std::uint8_t>(s[2] - '0')}};
}

std::string G8::str() const { return {char('0' + bit[0]), char('0' + bit[1]), char('0' + bit[2])}; }

G8 compose(const G8& x, const G8& y) {
    return G8{{static_cast<std::uint8_t>(x.bit[0] ^ y.bit[0]), static_cast<std::uint8_t>(x.bit[1] ^ y.bit[1]),
               static_cast<std::uint8_t>(x.bit[2] ^ y.bit[2] ^ (x.bit[0] & y.bit[1]))}};
}

G8 inverse(const G8& x) {
    return G8{{x.bit[0], x.bit[1], static_cast<std::uint8_t>(x.bit[2] ^ (x.bit[0] & x.bit[1]))}};
}

namespace {

G8 power(const G8& x, int k) {
    G8 r;
    for (int i = 0; i < k; ++i) r = compose(r, x);
    return r;
}

}  // namespace

bool check_group_presentation() {
    const G8 e, r = G8::parse("110"), s = G8::parse("010");
    if (!(power(r, 4) == e) || power(r, 2) == e || !(power(s, 2) == e)) return false;
    if (!(compose(r, s) == compose(s, power(r, 3)))) return false;
    const std::pair<const char*, G8> table[] = {
        {"000", e},
        {"001", power(r, 2)},
        {"110", r},
        {"111", power(r, 3)},
        {"010", s},
        {"011", compose(s, power(r, 2))},
        {"100", compose(s, r)},
        {"101", compose(s, power(r, 3))},
    };
    for (const auto& [bits, word] : table)
        if (!(G8::parse(bits) == word)) return false;
    return true;
}

// ---------------------------------------------------------------- the family

D4Op D4Op::zero(int N) {
    if (N < 0) throw UsageError("negative arity");
    return D4Op{N, std::vector<std::uint8_t>(N, 0),
                std::vector<std::vector<std::uint8_t>>(N, std::vector<std::uint8_t>(N, 0))};
}

D4Op D4Op::identity() {
    D4Op op = zero(1);
    op.a[0] = 1;
    return op;
}

D4Op D4Op::compose_op() {
    D4Op op = zero(2);
    op.a = {1, 1};
    op.c[0][1] = 1;
    return op;
}

bool D4Op::valid() const {
    if (static_cast<int>(a.size()) != N || static_cast<int>(c.size()) != N) return false;
    for (const auto& row : c)
        if (static_cast<int>(row.size()) != N) return false;
    for (int i = 0; i < N; ++i)
        for (int j = i + 1; j < N; ++j)
            if ((c[i][j] ^ c[j][i]) != (a[i] & a[j])) return false;
    return true;
}

G8 D4Op::eval(const std::vector<G8>& x) const {
    if (static_cast<int>(x.size()) != N) throw UsageError("D4Op: expected " + std::to_string(N) + " arguments");
    G8 r;
    for (int i = 0; i < N; ++i) {
        if (!a[i]) continue;
        for (int k = 0; k < 3; ++k) r.bit[k] ^= x[i].bit[k];
    }
    for (int i = 0; i < N; ++i) {
        if (!x[i].bit[0]) continue;
        for (int j = 0; j < N; ++j) r.bit[2] ^= c[i][j] & x[j].bit[1];
    }
    return r;
}

FiniteFunction D4Op::as_function() const {
    FiniteFunction f;
    f.name = "d4op";
    for (int i = 1; i <= N; ++i) f.arg_names.push_back("x" + std::to_string(i));
    for (int e = 0; e < 8; ++e) f.domain.push_back(G8::from_index(e).str());
    f.codomain = f.domain;
    D4Op self = *this;
    f.rule = [self](const std::vector<int>& idx) {
        std::vector<G8> x;
        x.reserve(idx.size());
        for (int i : idx) x.push_back(G8::from_index(i));
        return self.eval(x).index();
    };
    return f;
}

// ---------------------------------------------------------------- terms

namespace {

class TermParser {
public:
    TermParser(const std::string& s, const std::vector<G8>* args) : s_(s), args_(args) {}

    G8 run() {
        G8 v = expr();
        skip();
        if (pos_ != s_.size()) fail("trailing input");
        return v;
    }
    int max_var = 0;

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw UsageError("term: " + what + " at offset " + std::to_string(pos_));
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) return ++pos_, true;
        return false;
    }
    int integer() {
        skip();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_ || pos_ - start > 6) fail("expected a number");
        return std::stoi(s_.substr(start, pos_ - start));
    }
    G8 expr() {
        G8 v = factor();
        while (eat('*')) v = compose(v, factor());
        return v;
    }
    G8 factor() {
        G8 v = primary();
        while (eat('^')) {
            if (eat('-')) {
                if (integer() != 1) fail("only ^-1 is allowed as a negative exponent");
                v = inverse(v);
            } else {
                v = power(v, integer() % 4);
            }
        }
        return v;
    }
    G8 primary() {
        if (eat('(')) {
            G8 v = expr();
            if (!eat(')')) fail("expected )");
            return v;
        }
        if (!eat('x')) fail("expected a variable or (");
        int i = integer();
        if (i < 1) fail("variables start at x1");
        max_var = std::max(max_var, i);
        if (!args_) return G8{};
        if (i > static_cast<int>(args_->size())) fail("x" + std::to_string(i) + " has no argument");
        return (*args_)[i - 1];
    }

    const std::string& s_;
    const std::vector<G8>* args_;
    std::size_t pos_ = 0;
};

}  // namespace

G8 eval_term(const std::string& term, const std::vector<G8>& args) { return TermParser(term, &args).run(); }

int term_arity(const std::string& term) {
    TermParser p(term, nullptr);
    p.run();
    return p.max_var;
}

std::string generate_by_terms(const D4Op& op, std::uint64_t seed) {
    if (!op.valid()) throw PropertyViolation("generate_by_terms: c_ij + c_ji = a_i a_j does not hold");
    auto x = [](int i) { return "x" + std::to_string(i + 1); };
    std::vector<std::string> factors;
    for (int i = 0; i < op.N; ++i)
        if (op.a[i]) factors.push_back(x(i));
    for (int i = 0; i < op.N; ++i)
        for (int j = i + 1; j < op.N; ++j)
            if (op.c[j][i]) factors.push_back("(" + x(i) + "*" + x(j) + "*" + x(i) + "^-1*" + x(j) + "^-1)");
    for (int i = 0; i < op.N; ++i)
        if (op.c[i][i]) factors.push_back("(" + x(i) + "*" + x(i) + ")");
    std::string term;
    for (const auto& f : factors) term += (term.empty() ? "" : "*") + f;
    // The constant identity element is x1^4.
    if (term.empty()) term = op.N > 0 ? "x1^4" : "";
    if (op.N == 0) return term;

    std::vector<G8> args(op.N);
    auto check = [&] {
        if (!(eval_term(term, args) == op.eval(args)))
            throw PropertyViolation("generate_by_terms: term " + term + " disagrees with the operation");
    };
    if (op.N <= 3) {
        int total = 1 << (3 * op.N);
        for (int code = 0; code < total; ++code) {
            for (int i = 0; i < op.N; ++i) args[i] = G8::from_index(code >> (3 * i) & 7);
            check();
        }
    } else {
        std::mt19937_64 rng(seed);
        for (int round = 0; round < 4096; ++round) {
            for (auto& g : args) g = G8::from_index(static_cast<int>(rng() & 7));
            check();
        }
    }
    return term;
}

PolymorphismReport d4op_is_polymorphism(const D4Op& op, const Limits& lim) {
    static const Template d4 = d4_relations();
    return is_polymorphism(op.as_function(), d4, d4, lim);
}

// ---------------------------------------------------------------- GF(2)

std::size_t Gf2System::add_variable() { return n_++; }

std::size_t Gf2System::add_equation(const std::vector<std::size_t>& vars, bool rhs) {
    std::vector<std::size_t> v = vars;
    std::sort(v.begin(), v.end());
    std::vector<std::size_t> odd;
    for (std::size_t k = 0; k < v.size();) {
        std::size_t m = k;
        while (m < v.size() && v[m] == v[k]) ++m;
        if (v[k] >= n_) throw UsageError("Gf2System: variable out of range");
        if ((m - k) % 2) odd.push_back(v[k]);
        k = m;
    }
    eqs_.push_back({std::move(odd), rhs});
    return eqs_.size() - 1;
}

namespace {

using Bits = std::vector<std::uint64_t>;

inline void set_bit(Bits& b, std::size_t i) { b[i >> 6] |= std::uint64_t{1} << (i & 63); }
inline bool get_bit(const Bits& b, std::size_t i) { return b[i >> 6] >> (i & 63) & 1; }
inline void xor_into(Bits& dst, const Bits& src) {
    for (std::size_t w = 0; w < dst.size(); ++w) dst[w] ^= src[w];
}

// Lowest set bit at or after `from`, or npos.
std::size_t next_bit(const Bits& b, std::size_t from, std::size_t limit) {
    for (std::size_t w = from >> 6; w < b.size(); ++w) {
        std::uint64_t word = b[w];
        if (w == from >> 6) word &= ~std::uint64_t{0} << (from & 63);
        if (word) {
            std::size_t i = (w << 6) + static_cast<std::size_t>(__builtin_ctzll(word));
            return i < limit ? i : std::string::npos;
        }
    }
    return std::string::npos;
}

}  // namespace

Gf2System::Solution Gf2System::solve(bool want_kernel) const {
    const std::size_t words = (n_ + 64) / 64;  // bit n_ holds the right-hand side
    const std::size_t owords = (eqs_.size() + 63) / 64;
    struct Row {
        Bits bits, origin;
    };
    std::vector<Row> pivots;
    std::vector<std::size_t> pivot_of(n_, std::string::npos);
    Solution sol;

    for (std::size_t e = 0; e < eqs_.size(); ++e) {
        Row r{Bits(words, 0), Bits(owords, 0)};
        for (auto v : eqs_[e].vars) set_bit(r.bits, v);
        if (eqs_[e].rhs) set_bit(r.bits, n_);
        set_bit(r.origin, e);
        std::size_t col = next_bit(r.bits, 0, n_);
        while (col != std::string::npos && pivot_of[col] != std::string::npos) {
            const Row& p = pivots[pivot_of[col]];
            xor_into(r.bits, p.bits);
            xor_into(r.origin, p.origin);
            col = next_bit(r.bits, col + 1, n_);
        }
        if (col == std::string::npos) {
            if (get_bit(r.bits, n_)) {
                for (std::size_t k = 0; k < eqs_.size(); ++k)
                    if (get_bit(r.origin, k)) sol.refutation.push_back(k);
                sol.rank = pivots.size();
                return sol;
            }
            continue;
        }
        pivot_of[col] = pivots.size();
        pivots.push_back(std::move(r));
    }
    sol.solvable = true;
    sol.rank = pivots.size();

    // Every pivot row has its pivot as lowest bit, so back substitution runs
    // from the highest pivot column down.
    auto back_substitute = [&](std::vector<std::uint8_t>& x, bool homogeneous) {
        for (std::size_t col = n_; col-- > 0;) {
            if (pivot_of[col] == std::string::npos) continue;
            const Bits& b = pivots[pivot_of[col]].bits;
            std::uint8_t v = homogeneous ? 0 : static_cast<std::uint8_t>(get_bit(b, n_));
            for (std::size_t k = next_bit(b, col + 1, n_); k != std::string::npos; k = next_bit(b, k + 1, n_))
                v ^= x[k];
            x[col] = v;
        }
    };
    sol.particular.assign(n_, 0);
    back_substitute(sol.particular, false);
    if (want_kernel)
        for (std::size_t f = 0; f < n_; ++f) {
            if (pivot_of[f] != std::string::npos) continue;
            std::vector<std::uint8_t> x(n_, 0);
            x[f] = 1;
            back_substitute(x, true);
            sol.kernel.push_back(std::move(x));
        }
    return sol;
}

bool Gf2System::is_refutation(const std::vector<std::size_t>& eqs) const {
    std::vector<std::uint8_t> acc(n_, 0);
    bool rhs = false;
    for (auto e : eqs) {
        if (e >= eqs_.size()) return false;
        for (auto v : eqs_[e].vars) acc[v] ^= 1;
        rhs ^= eqs_[e].rhs;
    }
    return rhs && std::none_of(acc.begin(), acc.end(), [](std::uint8_t b) { return b; });
}

bool Gf2System::satisfied_by(const std::vector<std::uint8_t>& x) const {
    if (x.size() != n_) return false;
    for (const auto& eq : eqs_) {
        bool s = false;
        for (auto v : eq.vars) s ^= x[v] & 1;
        if (s != eq.rhs) return false;
    }
    return true;
}

// ---------------------------------------------------------------- nonexistence

PaletteShape d4_palette_shape(int n, int ell) {
    if (n < 1 || ell < 1) throw UsageError("d4 shape needs n >= 1 and l >= 1");
    PaletteShape s;
    for (int k = 0; k < n; ++k) {
        s.block_sizes.push_back(ell + 1);
        s.block_sizes.push_back(ell);
        s.groups.push_back({2 * k, 2 * k + 1});
    }
    return s;
}

std::vector<G8> D4Substitution::materialize(const PaletteShape& shape) const {
    std::vector<G8> x(shape.total());
    auto fill = [&](int g, const G8& v) {
        for (int b : shape.groups.at(g))
            for (int k = 0; k < shape.block_sizes[b]; ++k) x[shape.block_start(b) + k] = v;
    };
    if (g1 >= 0) fill(g1, G8::parse("100"));
    if (g2 >= 0) fill(g2, G8::parse("010"));
    if (p >= 0) x.at(p) = G8::parse("100");
    if (q >= 0) x.at(q) = G8::parse("010");
    return x;
}

std::string D4Substitution::str() const {
    return "100@x" + std::to_string(p + 1) + " 010@x" + std::to_string(q + 1) + " 100>group" + std::to_string(g1 + 1) +
           " 010>group" + std::to_string(g2 + 1);
}

std::string D4Condition::str() const {
    switch (kind) {
        case Idempotency: return "sum a_i = 1";
        case Coupling:
            return "c" + std::to_string(i + 1) + "," + std::to_string(j + 1) + " + c" + std::to_string(j + 1) + "," +
                   std::to_string(i + 1) + " = a" + std::to_string(i + 1) + "*a" + std::to_string(j + 1);
        case PaletteSwap: break;
    }
    return "f" + std::to_string(component + 1) + "[" + lhs.str() + "] = f" + std::to_string(component + 1) + "[" +
           rhs.str() + "]";
}

namespace {

// A condition as "sum of c-variables = constant" once a is fixed. Variables of
// the c-system are c_ij -> i*N + j.
struct CForm {
    std::vector<std::size_t> vars;
    bool rhs = false;
};

// Coefficients of f_component(x) as a linear form in (a, c).
void add_linear_form(const std::vector<G8>& x, int component, const std::vector<std::uint8_t>& a,
                     std::vector<std::size_t>& cvars, bool& constant) {
    const int N = static_cast<int>(x.size());
    for (int k = 0; k < N; ++k)
        if (x[k].bit[component] && a[k]) constant ^= true;
    if (component != 2) return;
    for (int i = 0; i < N; ++i) {
        if (!x[i].bit[0]) continue;
        for (int j = 0; j < N; ++j)
            if (x[j].bit[1]) cvars.push_back(static_cast<std::size_t>(i) * N + j);
    }
}

CForm condition_form(const D4Condition& cond, const PaletteShape& shape, const std::vector<std::uint8_t>& a,
                     bool abelian) {
    const int N = static_cast<int>(a.size());
    CForm f;
    switch (cond.kind) {
        case D4Condition::Idempotency:
            for (auto b : a) f.rhs ^= b != 0;
            f.rhs ^= true;  // sum a = 1
            break;
        case D4Condition::Coupling:
            f.vars = {static_cast<std::size_t>(cond.i) * N + cond.j, static_cast<std::size_t>(cond.j) * N + cond.i};
            f.rhs = abelian ? false : (a[cond.i] & a[cond.j]);
            break;
        case D4Condition::PaletteSwap: {
            bool constant = false;
            add_linear_form(cond.lhs.materialize(shape), cond.component, a, f.vars, constant);
            add_linear_form(cond.rhs.materialize(shape), cond.component, a, f.vars, constant);
            f.rhs = constant;  // sum of c-terms = a-terms
            break;
        }
    }
    return f;
}

// Conditions that only involve a (components 1 and 2 and idempotency) as
// equations over a_1..a_N.
Gf2System a_system(const NonexistenceResult& r, const PaletteShape& shape) {
    Gf2System sys(r.N);
    for (auto ci : r.a_conditions) {
        const auto& cond = r.conditions.at(ci);
        std::vector<std::size_t> vars;
        bool rhs = false;
        if (cond.kind == D4Condition::Idempotency) {
            for (int k = 0; k < r.N; ++k) vars.push_back(k);
            rhs = true;
        } else {
            for (const auto* s : {&cond.lhs, &cond.rhs}) {
                auto x = s->materialize(shape);
                for (int k = 0; k < r.N; ++k)
                    if (x[k].bit[cond.component]) vars.push_back(k);
            }
        }
        sys.add_equation(vars, rhs);
    }
    return sys;
}

Gf2System c_system(const NonexistenceResult& r, const PaletteShape& shape, const std::vector<std::uint8_t>& a,
                   std::vector<std::size_t>& origin) {
    Gf2System sys(static_cast<std::size_t>(r.N) * r.N);
    origin.clear();
    for (std::size_t ci = 0; ci < r.conditions.size(); ++ci) {
        const auto& cond = r.conditions[ci];
        if (cond.kind == D4Condition::PaletteSwap && cond.component != 2) continue;
        if (cond.kind == D4Condition::Idempotency) continue;
        CForm f = condition_form(cond, shape, a, r.abelian_control);
        sys.add_equation(f.vars, f.rhs);
        origin.push_back(ci);
    }
    return sys;
}

std::vector<std::vector<std::uint8_t>> enumerate_affine(const std::vector<std::uint8_t>& particular,
                                                        const std::vector<std::vector<std::uint8_t>>& kernel) {
    std::vector<std::vector<std::uint8_t>> out;
    const std::uint64_t count = std::uint64_t{1} << kernel.size();
    for (std::uint64_t m = 0; m < count; ++m) {
        auto v = particular;
        for (std::size_t k = 0; k < kernel.size(); ++k)
            if (m >> k & 1)
                for (std::size_t i = 0; i < v.size(); ++i) v[i] ^= kernel[k][i];
        out.push_back(std::move(v));
    }
    // a read as a binary number with a_1 least significant.
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
        return std::lexicographical_compare(x.rbegin(), x.rend(), y.rbegin(), y.rend());
    });
    return out;
}

}  // namespace

NonexistenceResult check_palette_nonexistence(int n, int ell, bool abelian_control, const NonexistenceLimits& lim) {
    if (n < 1 || ell < 2) throw UsageError("d4 nonexistence needs n >= 1 and l >= 2");
    const PaletteShape shape = d4_palette_shape(n, ell);
    NonexistenceResult r;
    r.n = n;
    r.ell = ell;
    r.N = shape.total();
    r.abelian_control = abelian_control;

    D4Condition idem;
    idem.kind = D4Condition::Idempotency;
    r.conditions.push_back(idem);
    r.a_conditions.push_back(0);

    // Within each block move the (1,0,0) and (0,1,0) entries away from the
    // first two positions; only pairs of palette inputs are kept.
    for (int k = 0; k < n; ++k)
        for (int b : shape.groups[k]) {
            const int start = shape.block_start(b), size = shape.block_sizes[b];
            for (int g1 = 0; g1 < n; ++g1)
                for (int g2 = 0; g2 < n; ++g2) {
                    if (g1 == k || g2 == k || g1 == g2) continue;
                    D4Substitution ref{start, start + 1, g1, g2};
                    if (!is_palette_tuple(shape, [&] {
                            Tuple t;
                            for (const auto& g : ref.materialize(shape)) t.push_back(g.str());
                            return t;
                        }()))
                        continue;
                    for (int p = start; p < start + size; ++p)
                        for (int q = start; q < start + size; ++q) {
                            if (p == q || (p == ref.p && q == ref.q)) continue;
                            D4Substitution other{p, q, g1, g2};
                            for (int comp = 0; comp < 3; ++comp) {
                                if (comp < 2) r.a_conditions.push_back(r.conditions.size());
                                r.conditions.push_back({D4Condition::PaletteSwap, comp, ref, other, -1, -1});
                            }
                        }
                }
            // Couplings inside this block come right after its swaps, so a
            // refutation usually closes early.
            for (int i = start; i < start + size; ++i)
                for (int j = i + 1; j < start + size; ++j) {
                    D4Condition c;
                    c.kind = D4Condition::Coupling;
                    c.i = i;
                    c.j = j;
                    r.conditions.push_back(c);
                }
        }
    {
        std::set<std::pair<int, int>> have;
        for (const auto& c : r.conditions)
            if (c.kind == D4Condition::Coupling) have.insert({c.i, c.j});
        for (int i = 0; i < r.N; ++i)
            for (int j = i + 1; j < r.N; ++j)
                if (!have.count({i, j})) {
                    D4Condition c;
                    c.kind = D4Condition::Coupling;
                    c.i = i;
                    c.j = j;
                    r.conditions.push_back(c);
                }
    }

    Gf2System as = a_system(r, shape);
    auto asol = as.solve(true);
    if (!asol.solvable) {
        // No a at all: the refutation lives in the a-system alone.
        r.infeasible = true;
        D4Refutation ref;
        for (auto e : asol.refutation) ref.conditions.push_back(r.a_conditions[e]);
        r.refutations.push_back(std::move(ref));
        return r;
    }
    if (static_cast<int>(asol.kernel.size()) > lim.max_a_dimension)
        throw ResourceError("d4 nonexistence: a-space has dimension " + std::to_string(asol.kernel.size()));
    r.a_particular = asol.particular;
    r.a_kernel = asol.kernel;

    for (const auto& a : enumerate_affine(r.a_particular, r.a_kernel)) {
        std::vector<std::size_t> origin;
        Gf2System cs = c_system(r, shape, a, origin);
        auto csol = cs.solve();
        if (csol.solvable) {
            D4Op op = D4Op::zero(r.N);
            op.a = a;
            for (int i = 0; i < r.N; ++i)
                for (int j = 0; j < r.N; ++j) op.c[i][j] = csol.particular[static_cast<std::size_t>(i) * r.N + j];
            r.witness = op;
            r.infeasible = false;
            return r;
        }
        D4Refutation ref{a, {}};
        for (auto e : csol.refutation) ref.conditions.push_back(origin[e]);
        r.refutations.push_back(std::move(ref));
    }
    r.infeasible = true;
    return r;
}

bool verify_nonexistence(const NonexistenceResult& r) {
    const PaletteShape shape = d4_palette_shape(r.n, r.ell);
    if (shape.total() != r.N) return false;
    const std::vector<BlockFlavor> sym(shape.block_sizes.size(), BlockFlavor::Symmetric);
    auto as_tuple = [](const std::vector<G8>& x) {
        Tuple t;
        for (const auto& g : x) t.push_back(g.str());
        return t;
    };
    // Every swap condition compares two equivalent palette inputs.
    for (const auto& c : r.conditions) {
        if (c.kind == D4Condition::PaletteSwap) {
            if (c.component < 0 || c.component > 2) return false;
            if (!palette_equivalent(shape, sym, as_tuple(c.lhs.materialize(shape)), as_tuple(c.rhs.materialize(shape))))
                return false;
        } else if (c.kind == D4Condition::Coupling) {
            if (c.i < 0 || c.j < 0 || c.i >= r.N || c.j >= r.N || c.i == c.j) return false;
        }
    }

    // Sum of a set of conditions under a, with the coefficients recomputed by
    // evaluating the op on unit parameter vectors.
    auto sums_to_contradiction = [&](const std::vector<std::uint8_t>& a, const std::vector<std::size_t>& conds) {
        std::vector<std::uint8_t> acc(static_cast<std::size_t>(r.N) * r.N, 0);
        bool rhs = false;
        for (auto ci : conds) {
            if (ci >= r.conditions.size()) return false;
            const auto& c = r.conditions[ci];
            if (c.kind == D4Condition::PaletteSwap) {
                auto x = c.lhs.materialize(shape), y = c.rhs.materialize(shape);
                D4Op base = D4Op::zero(r.N);
                base.a = a;
                rhs ^= base.eval(x).bit[c.component] ^ base.eval(y).bit[c.component];
                if (c.component == 2)
                    for (int i = 0; i < r.N; ++i)
                        for (int j = 0; j < r.N; ++j) {
                            D4Op unit = D4Op::zero(r.N);
                            if (!(x[i].bit[0] && x[j].bit[1]) && !(y[i].bit[0] && y[j].bit[1])) continue;
                            unit.c[i][j] = 1;
                            acc[static_cast<std::size_t>(i) * r.N + j] ^= unit.eval(x).bit[2] ^ unit.eval(y).bit[2];
                        }
            } else if (c.kind == D4Condition::Coupling) {
                acc[static_cast<std::size_t>(c.i) * r.N + c.j] ^= 1;
                acc[static_cast<std::size_t>(c.j) * r.N + c.i] ^= 1;
                rhs ^= r.abelian_control ? false : (a[c.i] & a[c.j]);
            } else {
                bool s = false;
                for (auto b : a) s ^= b != 0;
                rhs ^= !s;
            }
        }
        return rhs && std::none_of(acc.begin(), acc.end(), [](std::uint8_t b) { return b; });
    };

    Gf2System as = a_system(r, shape);
    if (r.a_particular.empty()) {
        // The a-system itself is contradictory.
        if (!r.infeasible || r.refutations.size() != 1) return false;
        std::vector<std::size_t> eqs;
        for (auto ci : r.refutations[0].conditions) {
            auto it = std::find(r.a_conditions.begin(), r.a_conditions.end(), ci);
            if (it == r.a_conditions.end()) return false;
            eqs.push_back(static_cast<std::size_t>(it - r.a_conditions.begin()));
        }
        return as.is_refutation(eqs);
    }
    // The a-space: particular solves it, the kernel is homogeneous and
    // independent, and its size matches N minus the rank.
    if (!as.satisfied_by(r.a_particular)) return false;
    Gf2System homogeneous(r.N);
    for (std::size_t e = 0; e < as.equations(); ++e) homogeneous.add_equation(as.equation_vars(e), false);
    for (const auto& k : r.a_kernel)
        if (!homogeneous.satisfied_by(k)) return false;
    {
        Gf2System basis(r.N);
        for (const auto& k : r.a_kernel) {
            std::vector<std::size_t> vars;
            for (int i = 0; i < r.N; ++i)
                if (k[i]) vars.push_back(i);
            basis.add_equation(vars, false);
        }
        if (basis.solve().rank != r.a_kernel.size()) return false;
    }
    if (as.solve().rank + r.a_kernel.size() != static_cast<std::size_t>(r.N)) return false;

    auto candidates = enumerate_affine(r.a_particular, r.a_kernel);
    if (r.witness) {
        const D4Op& op = *r.witness;
        if (op.N != r.N) return false;
        bool coupling_ok = r.abelian_control ? [&] {
            for (int i = 0; i < r.N; ++i)
                for (int j = i + 1; j < r.N; ++j)
                    if (op.c[i][j] != op.c[j][i]) return false;
            return true;
        }()
                                             : op.valid();
        if (!coupling_ok || !as.satisfied_by(op.a)) return false;
        for (const auto& c : r.conditions) {
            if (c.kind != D4Condition::PaletteSwap) continue;
            if (op.eval(c.lhs.materialize(shape)).bit[c.component] != op.eval(c.rhs.materialize(shape)).bit[c.component])
                return false;
        }
        // Earlier candidates must all be refuted.
        auto it = std::find(candidates.begin(), candidates.end(), op.a);
        if (it == candidates.end() || static_cast<std::size_t>(it - candidates.begin()) != r.refutations.size())
            return false;
        candidates.erase(it, candidates.end());
    } else if (!r.infeasible || candidates.size() != r.refutations.size()) {
        return false;
    }
    for (std::size_t k = 0; k < candidates.size(); ++k) {
        if (r.refutations[k].a != candidates[k]) return false;
        if (!sums_to_contradiction(candidates[k], r.refutations[k].conditions)) return false;
    }
    return true;
}

std::string NonexistenceResult::to_json() const {
    using nlohmann::ordered_json;
    ordered_json j;
    j["n"] = n;
    j["l"] = ell;
    j["arity"] = N;
    j["shape"] = d4_palette_shape(n, ell).render();
    j["abelian_control"] = abelian_control;
    j["result"] = infeasible ? "infeasible" : "witness";
    std::size_t swaps = 0;
    for (const auto& c : conditions) swaps += c.kind == D4Condition::PaletteSwap;
    j["swap_conditions"] = swaps;
    // A swap needs the block's group, two filled groups and a group for the 000 fill.
    if (n < 4) j["note"] = "below n = 4 no substitution is palette; the witness only meets idempotency and coupling";
    auto bits = [](const std::vector<std::uint8_t>& v) {
        std::string s;
        for (auto b : v) s += char('0' + b);
        return s;
    };
    if (witness) {
        ordered_json w;
        w["a"] = bits(witness->a);
        ordered_json c = ordered_json::array();
        for (const auto& row : witness->c) c.push_back(bits(row));
        w["c"] = c;
        j["witness"] = w;
    }
    ordered_json trace;
    trace["conditions"] = conditions.size();
    trace["a_space_dimension"] = a_kernel.size();
    ordered_json refs = ordered_json::array();
    for (const auto& ref : refutations) {
        ordered_json e;
        e["a"] = bits(ref.a);
        ordered_json used = ordered_json::array();
        for (auto ci : ref.conditions) used.push_back(conditions[ci].str());
        e["sum_to_contradiction"] = used;
        refs.push_back(e);
    }
    trace["refutations"] = refs;
    j["trace"] = trace;
    return j.dump(2) + "\n";
}

}  // namespace cspuniv
