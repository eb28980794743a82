#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "cspuniv/instance.hpp"

namespace cspuniv {

// A variable of the relaxation: either the weight C^a of tuple a in
// constraint C, or the weight x^b of element b for variable x.
struct LPVar {
    enum class Kind { ConstraintTuple, VarValue };
    Kind kind = Kind::ConstraintTuple;
    std::string owner;  // constraint id or variable id
    Tuple tuple;        // the tuple, or the single element for VarValue

    static LPVar tuple_weight(std::string cid, Tuple t) { return {Kind::ConstraintTuple, std::move(cid), std::move(t)}; }
    static LPVar value_weight(std::string x, Element b) { return {Kind::VarValue, std::move(x), Tuple{std::move(b)}}; }

    std::string render() const;  // "C:<cid>:<t1,...>" or "X:<var>:<el>"
    auto operator<=>(const LPVar&) const = default;
};

struct Equation {
    std::vector<std::pair<std::size_t, mpz_class>> coeffs;  // (var index, coefficient), indices increasing
    mpz_class rhs;
};

struct LinearSystem {
    std::vector<LPVar> vars;
    std::vector<Equation> equations;
    mpz_class d = 1;

    std::optional<std::size_t> index_of(const LPVar& v) const;
    std::string to_json() const;
};

struct RationalSolution {
    std::vector<LPVar> vars;
    std::vector<mpq_class> values;
    mpq_class at(const LPVar& v) const;  // zero for unknown vars
};

struct IntegerSolution {
    std::vector<LPVar> vars;
    std::vector<mpz_class> values;
    mpz_class at(const LPVar& v) const;  // zero for unknown vars
};

struct MaxSupport {
    RationalSolution solution;
    std::vector<bool> support;  // aligned with the system's vars
};

// I^{L,d}: one sum equation per constraint with rhs d and one marginal
// equation sum_{a(i)=b} C^a - x^b = 0 per (constraint, position, b in D_{x_i}).
LinearSystem build_relaxation(const Instance& inst, const mpz_class& d = 1);

// Exact rational feasibility over [0,1].
std::optional<RationalSolution> lp_feasible_01(const LinearSystem& sys);

// A solution whose support is the union of the supports of all feasible
// solutions. Repeatedly maximizes the sum of the coordinates not yet known to
// be positive and averages the optima.
std::optional<MaxSupport> lp_max_support(const LinearSystem& sys);

// Reference method: maximize every coordinate separately and average.
std::optional<MaxSupport> lp_max_support_per_coordinate(const LinearSystem& sys);

// Unbounded integer feasibility by unimodular column reduction to a
// triangular form followed by divisibility checks and back-substitution.
std::optional<IntegerSolution> int_feasible(const LinearSystem& sys);

// Nonnegative integer solution of I^{L,d} built from scaled rational
// solutions and their nonnegative integer combinations; see linrelax.cpp.
std::optional<IntegerSolution> find_d_solution(const Instance& inst, const mpz_class& d);

// Exact substitution checks. The rational check also enforces [0,1] unless told otherwise.
bool check_solution(const LinearSystem& sys, const RationalSolution& s, bool unit_interval = true);
bool check_solution(const LinearSystem& sys, const IntegerSolution& s);
bool is_d_solution(const Instance& inst, const IntegerSolution& s, const mpz_class& d);

// Drops every constraint tuple whose C^a is outside the support.
Instance prune_to_support(const Instance& inst, const LinearSystem& sys, const std::vector<bool>& support);

// Pieces of the construction behind find_d_solution, exposed for the property suite.
struct ScalingData {
    RationalSolution blp;     // maximal support solution of I^L
    IntegerSolution aip;      // AIP solution of the pruned instance, extended by zero
    mpz_class q;              // q*blp is integral and q*blp + aip >= 0
    std::vector<mpz_class> q_solution;       // q * blp
    std::vector<mpz_class> q_plus_1_solution;  // q * blp + aip
};
std::optional<ScalingData> blp_aip_scaling(const Instance& inst);

std::vector<Tuple> parallelogram_closure(const std::vector<Tuple>& relation, std::size_t arity);

}  // namespace cspuniv
