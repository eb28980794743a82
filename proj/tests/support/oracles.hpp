#pragma once
// Reference deciders for BLP and AIP, written against the instance data only.
// They share no code with linrelax: the relaxation is rebuilt here, BLP is a
// dense phase-one simplex with Bland's rule, AIP an integer column lattice.

#include <gmpxx.h>

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "cspuniv/instance.hpp"

namespace oracle {

using cspuniv::Instance;

// Rows of I^L as dense integer vectors plus rhs.
struct Dense {
    std::size_t cols = 0;
    std::vector<std::vector<long>> rows;
    std::vector<long> rhs;
};

inline Dense relaxation(const Instance& inst) {
    Dense d;
    std::map<std::pair<std::string, std::string>, std::size_t> xcol;
    for (const auto& x : inst.variables)
        for (const auto& b : inst.domain(x)) xcol[{x, b}] = d.cols++;
    std::vector<std::size_t> first(inst.constraints.size());
    for (std::size_t c = 0; c < inst.constraints.size(); ++c) {
        first[c] = d.cols;
        d.cols += inst.constraints[c].tuples.size();
    }
    for (std::size_t c = 0; c < inst.constraints.size(); ++c) {
        const auto& con = inst.constraints[c];
        std::vector<long> sum(d.cols, 0);
        for (std::size_t t = 0; t < con.tuples.size(); ++t) sum[first[c] + t] = 1;
        d.rows.push_back(sum);
        d.rhs.push_back(1);
        for (std::size_t i = 0; i < con.scope.size(); ++i)
            for (const auto& b : inst.domain(con.scope[i])) {
                std::vector<long> row(d.cols, 0);
                for (std::size_t t = 0; t < con.tuples.size(); ++t)
                    if (con.tuples[t][i] == b) row[first[c] + t] = 1;
                row[xcol.at({con.scope[i], b})] -= 1;
                d.rows.push_back(row);
                d.rhs.push_back(0);
            }
    }
    return d;
}

// Ax = b, x >= 0 over Q. Every x^b is tied to a sum row through a marginal,
// so the unit upper bound is implied whenever the variable is constrained.
inline bool lp_feasible(const Dense& d) {
    const std::size_t m = d.rows.size(), n = d.cols;
    if (m == 0) return true;
    // Tableau columns: n originals, m artificials, rhs.
    std::vector<std::vector<mpq_class>> T(m, std::vector<mpq_class>(n + m + 1));
    for (std::size_t r = 0; r < m; ++r) {
        long s = d.rhs[r] < 0 ? -1 : 1;
        for (std::size_t j = 0; j < n; ++j) T[r][j] = s * d.rows[r][j];
        T[r][n + r] = 1;
        T[r][n + m] = s * d.rhs[r];
    }
    std::vector<std::size_t> basis(m);
    for (std::size_t r = 0; r < m; ++r) basis[r] = n + r;
    // Minimize the sum of artificials; reduced cost of column j is -sum_r T[r][j].
    while (true) {
        std::size_t enter = n + m;
        for (std::size_t j = 0; j < n + m && enter == n + m; ++j) {
            bool basic = false;
            for (auto b : basis) basic |= b == j;
            if (basic) continue;
            mpq_class rc = 0;
            for (std::size_t r = 0; r < m; ++r)
                if (basis[r] >= n) rc -= T[r][j];
            if (j >= n) rc += 1;
            if (rc < 0) enter = j;
        }
        if (enter == n + m) break;
        std::size_t leave = m;
        mpq_class best;
        for (std::size_t r = 0; r < m; ++r) {
            if (T[r][enter] <= 0) continue;
            mpq_class ratio = T[r][n + m] / T[r][enter];
            if (leave == m || ratio < best || (ratio == best && basis[r] < basis[leave])) {
                leave = r;
                best = ratio;
            }
        }
        if (leave == m) break;  // cannot happen: phase one is bounded
        mpq_class piv = T[leave][enter];
        for (auto& v : T[leave]) v /= piv;
        for (std::size_t r = 0; r < m; ++r) {
            if (r == leave || T[r][enter] == 0) continue;
            mpq_class f = T[r][enter];
            for (std::size_t j = 0; j <= n + m; ++j) T[r][j] -= f * T[leave][j];
        }
        basis[leave] = enter;
    }
    mpq_class art = 0;
    for (std::size_t r = 0; r < m; ++r)
        if (basis[r] >= n) art += T[r][n + m];
    return art == 0;
}

// Ax = b over Z: b must lie in the lattice spanned by the columns. Columns
// are inserted into an echelon basis keyed by their lowest nonzero row.
inline bool int_feasible(const Dense& d) {
    using Vec = std::map<std::size_t, mpz_class>;
    std::map<std::size_t, Vec> basis;
    auto comb = [](const mpz_class& s, const Vec& u, const mpz_class& t, const Vec& v) {
        Vec out;
        for (const auto& [k, x] : u) out[k] += s * x;
        for (const auto& [k, x] : v) out[k] += t * x;
        for (auto it = out.begin(); it != out.end();) it = it->second == 0 ? out.erase(it) : std::next(it);
        return out;
    };
    auto negate = [](Vec v) {
        for (auto& [k, x] : v) x = -x;
        return v;
    };
    for (std::size_t j = 0; j < d.cols; ++j) {
        Vec v;
        for (std::size_t r = 0; r < d.rows.size(); ++r)
            if (d.rows[r][j]) v[r] = d.rows[r][j];
        while (!v.empty()) {
            std::size_t p = v.begin()->first;
            auto it = basis.find(p);
            if (it == basis.end()) {
                basis[p] = v.begin()->second < 0 ? negate(v) : v;
                break;
            }
            Vec u = it->second;
            mpz_class a = u[p], c = v[p], g, s, t;
            mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(), c.get_mpz_t());
            Vec w1 = comb(s, u, t, v);
            Vec w2 = comb(c / g, u, -(a / g), v);
            if (w1.begin()->second < 0) w1 = negate(w1);
            it->second = w1;
            v = w2;
        }
    }
    Vec v;
    for (std::size_t r = 0; r < d.rhs.size(); ++r)
        if (d.rhs[r]) v[r] = d.rhs[r];
    while (!v.empty()) {
        std::size_t p = v.begin()->first;
        auto it = basis.find(p);
        if (it == basis.end()) return false;
        const Vec& u = it->second;
        mpz_class up = u.at(p);
        if (v[p] % up != 0) return false;
        v = comb(1, v, -(v[p] / up), u);
    }
    return true;
}

inline bool has_empty(const Instance& inst) {
    for (const auto& x : inst.variables)
        if (inst.domain(x).empty()) return true;
    for (const auto& c : inst.constraints)
        if (c.tuples.empty()) return true;
    return false;
}

inline bool blp(const Instance& inst) { return !has_empty(inst) && lp_feasible(relaxation(inst)); }
inline bool aip(const Instance& inst) { return !has_empty(inst) && int_feasible(relaxation(inst)); }

}  // namespace oracle
