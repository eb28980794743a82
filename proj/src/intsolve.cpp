#include <algorithm>
#include <numeric>

#include "cspuniv/errors.hpp"
#include "cspuniv/linrelax.hpp"

namespace cspuniv {

namespace {

using SparseVec = std::vector<std::pair<std::size_t, mpz_class>>;  // sorted by index, no zeros

// A column of [A; U] where U accumulates the unimodular transformation.
struct Column {
    SparseVec a;
    SparseVec u;
};

const mpz_class* entry(const SparseVec& v, std::size_t row) {
    auto it = std::lower_bound(v.begin(), v.end(), row, [](const auto& p, std::size_t r) { return p.first < r; });
    if (it == v.end() || it->first != row) return nullptr;
    return &it->second;
}

// dst -= q * src
void axpy(SparseVec& dst, const mpz_class& q, const SparseVec& src) {
    SparseVec out;
    out.reserve(dst.size() + src.size());
    std::size_t i = 0, j = 0;
    mpz_class tmp;
    while (i < dst.size() || j < src.size()) {
        if (j == src.size() || (i < dst.size() && dst[i].first < src[j].first)) {
            out.push_back(std::move(dst[i++]));
        } else if (i == dst.size() || src[j].first < dst[i].first) {
            tmp = -q * src[j].second;
            out.emplace_back(src[j].first, tmp);
            ++j;
        } else {
            tmp = dst[i].second - q * src[j].second;
            if (sgn(tmp) != 0) out.emplace_back(dst[i].first, tmp);
            ++i;
            ++j;
        }
    }
    dst = std::move(out);
}

void negate(SparseVec& v) {
    for (auto& [k, c] : v) c = -c;
}

}  // namespace

std::optional<IntegerSolution> int_feasible(const LinearSystem& sys) {
    const std::size_t m = sys.equations.size();
    const std::size_t n = sys.vars.size();
    std::vector<Column> cols(n);
    for (std::size_t j = 0; j < n; ++j) cols[j].u.emplace_back(j, 1);
    for (std::size_t i = 0; i < m; ++i)
        for (const auto& [j, c] : sys.equations[i].coeffs)
            if (sgn(c) != 0) cols[j].a.emplace_back(i, c);
    for (auto& c : cols) std::sort(c.a.begin(), c.a.end(), [](const auto& x, const auto& y) { return x.first < y.first; });

    // order[0..p) are pivot columns; pivot_row[q] is the row owning order[q]
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<std::size_t> pivot_row;
    std::vector<int> row_pivot(m, -1);
    std::size_t p = 0;

    for (std::size_t r = 0; r < m; ++r) {
        for (;;) {
            std::vector<std::size_t> nz;  // positions in order
            for (std::size_t q = p; q < n; ++q)
                if (entry(cols[order[q]].a, r)) nz.push_back(q);
            if (nz.empty()) break;
            std::size_t best = nz[0];
            for (auto q : nz)
                if (abs(*entry(cols[order[q]].a, r)) < abs(*entry(cols[order[best]].a, r))) best = q;
            if (nz.size() == 1) {
                std::swap(order[p], order[best]);
                Column& pc = cols[order[p]];
                if (sgn(*entry(pc.a, r)) < 0) {
                    negate(pc.a);
                    negate(pc.u);
                }
                pivot_row.push_back(r);
                row_pivot[r] = static_cast<int>(p);
                ++p;
                break;
            }
            const Column& bc = cols[order[best]];
            mpz_class piv = *entry(bc.a, r);
            mpz_class q_factor;
            for (auto q : nz) {
                if (q == best) continue;
                Column& c = cols[order[q]];
                mpz_fdiv_q(q_factor.get_mpz_t(), entry(c.a, r)->get_mpz_t(), piv.get_mpz_t());
                axpy(c.a, q_factor, bc.a);
                axpy(c.u, q_factor, bc.u);
            }
        }
    }

    // Forward substitution on the lower triangular part.
    std::vector<mpz_class> y(p);
    mpz_class s, rem;
    for (std::size_t r = 0; r < m; ++r) {
        s = sys.equations[r].rhs;
        std::size_t limit = row_pivot[r] >= 0 ? static_cast<std::size_t>(row_pivot[r]) : p;
        for (std::size_t q = 0; q < limit; ++q)
            if (const mpz_class* e = entry(cols[order[q]].a, r)) s -= *e * y[q];
        if (row_pivot[r] < 0) {
            if (sgn(s) != 0) return std::nullopt;
            continue;
        }
        const mpz_class& g = *entry(cols[order[row_pivot[r]]].a, r);
        mpz_fdiv_qr(y[row_pivot[r]].get_mpz_t(), rem.get_mpz_t(), s.get_mpz_t(), g.get_mpz_t());
        if (sgn(rem) != 0) return std::nullopt;
    }

    IntegerSolution sol;
    sol.vars = sys.vars;
    sol.values.assign(n, 0);
    for (std::size_t q = 0; q < p; ++q) {
        if (sgn(y[q]) == 0) continue;
        for (const auto& [k, c] : cols[order[q]].u) sol.values[k] += y[q] * c;
    }
    if (!check_solution(sys, sol)) throw PropertyViolation("integer back-substitution produced a non-solution");
    return sol;
}

}  // namespace cspuniv
