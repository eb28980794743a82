#pragma once

#include <vector>

#include <gmpxx.h>

#include "cspuniv/linrelax.hpp"

namespace cspuniv::detail {

// Primal simplex on a dense exact tableau. Structural variables live in
// [0,1]; one artificial per row starts the first phase. Pricing is Dantzig's
// rule, falling back to Bland's rule for the whole of any degenerate stretch,
// which rules out cycling.
class BoundedSimplex {
public:
    explicit BoundedSimplex(const LinearSystem& sys);

    // Phase one. Returns false iff the system has no solution in [0,1].
    bool find_feasible();

    // Maximizes sum weight[k] * x_k from the current feasible basis.
    mpq_class maximize(const std::vector<int>& weight);

    std::vector<mpq_class> values() const;

private:
    void iterate();
    void pivot(std::size_t r, std::size_t j);
    void set_costs(const std::vector<int>& cost);  // cost per column, artificials included
    bool enterable(std::size_t j) const;

    std::size_t m_, n_, ncol_;
    std::vector<std::vector<mpq_class>> t_;
    std::vector<mpq_class> beta_;   // values of basic variables
    std::vector<mpq_class> dcost_;  // reduced costs
    std::vector<std::size_t> basic_;
    std::vector<int> row_of_;       // -1 when nonbasic
    std::vector<bool> at_upper_;
    std::vector<int> upper_;        // 1, 0 (fixed) or -1 (unbounded)
    bool artificial_frozen_ = false;
};

}  // namespace cspuniv::detail
