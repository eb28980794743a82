#include "simplex.hpp"

#include "cspuniv/errors.hpp"

namespace cspuniv::detail {

BoundedSimplex::BoundedSimplex(const LinearSystem& sys)
    : m_(sys.equations.size()), n_(sys.vars.size()), ncol_(n_ + m_) {
    t_.assign(m_, std::vector<mpq_class>(ncol_));
    beta_.resize(m_);
    basic_.resize(m_);
    row_of_.assign(ncol_, -1);
    at_upper_.assign(ncol_, false);
    upper_.assign(ncol_, 1);
    for (std::size_t i = 0; i < m_; ++i) {
        const auto& eq = sys.equations[i];
        int sign = sgn(eq.rhs) < 0 ? -1 : 1;
        for (const auto& [j, c] : eq.coeffs) t_[i][j] += sign * c;
        t_[i][n_ + i] = 1;
        beta_[i] = sign * eq.rhs;
        basic_[i] = n_ + i;
        row_of_[n_ + i] = static_cast<int>(i);
        upper_[n_ + i] = -1;
    }
}

bool BoundedSimplex::enterable(std::size_t j) const {
    if (row_of_[j] >= 0) return false;
    if (j >= n_) return false;  // artificials never re-enter
    return upper_[j] != 0;
}

void BoundedSimplex::set_costs(const std::vector<int>& cost) {
    dcost_.assign(ncol_, 0);
    for (std::size_t k = 0; k < ncol_; ++k) dcost_[k] = cost[k];
    mpq_class tmp;
    for (std::size_t i = 0; i < m_; ++i) {
        int cb = cost[basic_[i]];
        if (cb == 0) continue;
        for (std::size_t k = 0; k < (artificial_frozen_ ? n_ : ncol_); ++k) {
            if (sgn(t_[i][k]) == 0) continue;
            mpq_mul(tmp.get_mpq_t(), t_[i][k].get_mpq_t(), mpq_class(cb).get_mpq_t());
            mpq_sub(dcost_[k].get_mpq_t(), dcost_[k].get_mpq_t(), tmp.get_mpq_t());
        }
    }
}

void BoundedSimplex::pivot(std::size_t r, std::size_t j) {
    mpq_class piv = t_[r][j];
    std::vector<std::size_t> nz;
    const std::size_t cols = artificial_frozen_ ? n_ : ncol_;
    for (std::size_t k = 0; k < cols; ++k)
        if (sgn(t_[r][k]) != 0) {
            nz.push_back(k);
            mpq_div(t_[r][k].get_mpq_t(), t_[r][k].get_mpq_t(), piv.get_mpq_t());
        }
    mpq_class f, tmp;
    auto eliminate = [&](std::vector<mpq_class>& row) {
        if (sgn(row[j]) == 0) return;
        f = row[j];
        for (auto k : nz) {
            mpq_mul(tmp.get_mpq_t(), f.get_mpq_t(), t_[r][k].get_mpq_t());
            mpq_sub(row[k].get_mpq_t(), row[k].get_mpq_t(), tmp.get_mpq_t());
        }
    };
    for (std::size_t i = 0; i < m_; ++i)
        if (i != r) eliminate(t_[i]);
    eliminate(dcost_);
}

void BoundedSimplex::iterate() {
    bool degenerate_mode = false;
    mpq_class limit, best, tmp;
    for (;;) {
        // pricing
        std::size_t enter = ncol_;
        for (std::size_t j = 0; j < ncol_; ++j) {
            if (!enterable(j)) continue;
            int s = sgn(dcost_[j]);
            bool improving = at_upper_[j] ? s > 0 : s < 0;
            if (!improving) continue;
            if (degenerate_mode) {
                enter = j;
                break;
            }
            if (enter == ncol_ || abs(dcost_[j]) > abs(dcost_[enter])) enter = j;
        }
        if (enter == ncol_) return;
        const std::size_t j = enter;
        const int dir = at_upper_[j] ? -1 : 1;

        // ratio test; candidate index ncol_ + 1 stands for the bound flip of j
        best = upper_[j];
        std::size_t best_row = m_;
        std::size_t best_index = j;
        for (std::size_t i = 0; i < m_; ++i) {
            int a = sgn(t_[i][j]);
            if (a == 0) continue;
            int rate = -a * dir;
            if (rate < 0) {
                limit = beta_[i] / abs(t_[i][j]);
            } else {
                int u = upper_[basic_[i]];
                if (u < 0) continue;
                limit = (u - beta_[i]) / abs(t_[i][j]);
            }
            int c = cmp(limit, best);
            if (c < 0 || (c == 0 && basic_[i] < best_index)) {
                best = limit;
                best_row = i;
                best_index = basic_[i];
            }
        }
        degenerate_mode = sgn(best) == 0;

        if (sgn(best) != 0) {
            for (std::size_t i = 0; i < m_; ++i) {
                if (sgn(t_[i][j]) == 0) continue;
                mpq_mul(tmp.get_mpq_t(), t_[i][j].get_mpq_t(), best.get_mpq_t());
                if (dir > 0)
                    mpq_sub(beta_[i].get_mpq_t(), beta_[i].get_mpq_t(), tmp.get_mpq_t());
                else
                    mpq_add(beta_[i].get_mpq_t(), beta_[i].get_mpq_t(), tmp.get_mpq_t());
            }
        }
        if (best_row == m_) {
            at_upper_[j] = !at_upper_[j];
            continue;
        }
        const std::size_t r = best_row;
        const std::size_t leaving = basic_[r];
        const int rate_r = -sgn(t_[r][j]) * dir;
        mpq_class entering_value = (at_upper_[j] ? mpq_class(upper_[j]) : mpq_class(0)) + dir * best;
        pivot(r, j);
        basic_[r] = j;
        row_of_[j] = static_cast<int>(r);
        row_of_[leaving] = -1;
        at_upper_[j] = false;
        at_upper_[leaving] = rate_r > 0 && upper_[leaving] > 0;
        beta_[r] = entering_value;
    }
}

bool BoundedSimplex::find_feasible() {
    std::vector<int> cost(ncol_, 0);
    for (std::size_t k = n_; k < ncol_; ++k) cost[k] = 1;
    set_costs(cost);
    iterate();
    for (std::size_t i = 0; i < m_; ++i)
        if (basic_[i] >= n_ && sgn(beta_[i]) != 0) return false;
    for (std::size_t k = n_; k < ncol_; ++k) upper_[k] = 0;
    artificial_frozen_ = true;
    return true;
}

mpq_class BoundedSimplex::maximize(const std::vector<int>& weight) {
    if (!artificial_frozen_) throw PropertyViolation("maximize called before a feasible basis was found");
    std::vector<int> cost(ncol_, 0);
    for (std::size_t k = 0; k < n_; ++k) cost[k] = -weight[k];
    set_costs(cost);
    iterate();
    auto x = values();
    mpq_class obj = 0;
    for (std::size_t k = 0; k < n_; ++k)
        if (weight[k]) obj += weight[k] * x[k];
    return obj;
}

std::vector<mpq_class> BoundedSimplex::values() const {
    std::vector<mpq_class> x(n_);
    for (std::size_t k = 0; k < n_; ++k) {
        if (row_of_[k] >= 0)
            x[k] = beta_[row_of_[k]];
        else
            x[k] = at_upper_[k] ? upper_[k] : 0;
    }
    return x;
}

}  // namespace cspuniv::detail
