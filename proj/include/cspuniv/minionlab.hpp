#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "cspuniv/instance.hpp"

namespace cspuniv {

// pi: N -> N'. `target` lists N' (pi need not be onto).
struct MinorMap {
    std::map<std::string, std::string> pi;
    std::vector<std::string> target;

    static MinorMap identity(const std::vector<std::string>& rows);
    // (this after first)(i) = this(first(i)).
    MinorMap after(const MinorMap& first) const;
};

// Rows are named; entries[r][j] is M(rows[r], j).
struct SkeletonMatrix {
    std::vector<std::string> rows;
    std::size_t width = 0;
    std::vector<std::vector<std::uint8_t>> entries;

    // Empty string when both invariants hold; otherwise what fails.
    std::string violation() const;
    bool valid() const { return violation().empty(); }
    bool operator==(const SkeletonMatrix&) const = default;
};

struct BlpAipPair {
    std::vector<std::string> rows;
    std::size_t width = 0;
    std::vector<std::vector<mpq_class>> blp;
    std::vector<std::vector<mpz_class>> aip;

    std::string violation() const;
    bool valid() const { return violation().empty(); }
    bool operator==(const BlpAipPair&) const = default;
};

// Row i of the minor is the OR (resp. the sum) of the rows pi^{-1}(i).
SkeletonMatrix minor_skeleton(const SkeletonMatrix& m, const MinorMap& pi);
BlpAipPair minor_pair(const BlpAipPair& p, const MinorMap& pi);

// Constraint rows are named by tuple_key; variable rows by element.
template <class Matrix>
struct MinionWitness {
    std::vector<std::pair<std::string, Tuple>> columns;  // (constraint id, tuple) per column
    std::map<std::string, Matrix> variables;
    std::map<std::string, Matrix> constraints;
};
using ArcWitness = MinionWitness<SkeletonMatrix>;
using PairWitness = MinionWitness<BlpAipPair>;

// Projection of the constraint's relation onto scope position k, landing in
// the domain of the k-th scope variable.
MinorMap projection(const Instance& inst, const Constraint& c, std::size_t k);

// Every matrix is valid, widths agree, and h(x_k) = minor(h(C), pi_k) for all
// constraints and positions.
std::string witness_violation(const Instance& inst, const ArcWitness& w);
std::string witness_violation(const Instance& inst, const PairWitness& w);

// Runs csingl(arccons) (resp. csingl(blp>aip)); on Yes one column per
// surviving (constraint, tuple) with the inner run on that restriction.
// M_C(a, i) = 1 iff a survives in the inner run's relation of C, which on
// arc-consistent runs matches domain membership of every component.
// Throws PropertyViolation if the built object fails witness_violation.
std::optional<ArcWitness> extract_witness_arccons(const Instance& inst);
std::optional<PairWitness> extract_witness_blpaip(const Instance& inst);

std::string to_json(const ArcWitness& w);
std::string to_json(const PairWitness& w);

}  // namespace cspuniv
