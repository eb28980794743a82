#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cspuniv/poly.hpp"

namespace cspuniv {

// An element of Z2^3 with the product x∘y = (x1+y1, x2+y2, x3+y3+x1*y2).
// Serialized as the bit string "x1x2x3", matching d4_relations().
struct G8 {
    std::array<std::uint8_t, 3> bit{0, 0, 0};

    bool operator==(const G8&) const = default;
    int index() const { return bit[0] << 2 | bit[1] << 1 | bit[2]; }
    static G8 from_index(int i);
    static G8 parse(const std::string& s);
    std::string str() const;
};

G8 compose(const G8& x, const G8& y);
G8 inverse(const G8& x);

// r = 110, s = 010: checks r^4 = s^2 = 1, rs = sr^3 and the element table.
bool check_group_presentation();

// f1 = sum a_i x_i1, f2 = sum a_i x_i2, f3 = sum a_i x_i3 + sum c_ij x_i1 x_j2.
struct D4Op {
    int N = 0;
    std::vector<std::uint8_t> a;
    std::vector<std::vector<std::uint8_t>> c;

    static D4Op zero(int N);
    static D4Op identity();
    static D4Op compose_op();  // a = (1,1), c_12 = 1
    bool valid() const;        // c_ij + c_ji = a_i a_j for i != j
    G8 eval(const std::vector<G8>& args) const;
    FiniteFunction as_function() const;  // over the bit-string domain of d4_relations()
};

// Term language: x1..xN, "*" for the product, postfix "^-1" and "^k", parentheses.
G8 eval_term(const std::string& term, const std::vector<G8>& args);
int term_arity(const std::string& term);  // largest variable index used

// The product of the supported variables, commutators for the c_ji = 1 with i < j
// and squares for c_ii = 1. Throws PropertyViolation for an invalid op, or if
// the term and the op disagree on some input (checked exhaustively for N <= 3,
// on random inputs above that).
std::string generate_by_terms(const D4Op& op, std::uint64_t seed = 0);

PolymorphismReport d4op_is_polymorphism(const D4Op& op, const Limits& lim = {});

// Affine equations over GF(2) with bitset rows. solve() runs Gaussian
// elimination that tracks which input equations were combined, so a
// contradiction comes with the subset of equations summing to 0 = 1.
class Gf2System {
public:
    explicit Gf2System(std::size_t nvars = 0) : n_(nvars) {}

    std::size_t add_variable();
    std::size_t variables() const { return n_; }
    std::size_t equations() const { return eqs_.size(); }
    // Repeated variables cancel.
    std::size_t add_equation(const std::vector<std::size_t>& vars, bool rhs);
    const std::vector<std::size_t>& equation_vars(std::size_t e) const { return eqs_[e].vars; }
    bool equation_rhs(std::size_t e) const { return eqs_[e].rhs; }

    struct Solution {
        bool solvable = false;
        std::vector<std::uint8_t> particular;           // free variables set to 0
        std::vector<std::vector<std::uint8_t>> kernel;  // basis of the homogeneous solutions
        std::vector<std::size_t> refutation;            // equations summing to 0 = 1
        std::size_t rank = 0;
    };
    Solution solve(bool want_kernel = false) const;

    // Re-adds the listed equations and checks that they sum to 0 = 1.
    bool is_refutation(const std::vector<std::size_t>& eqs) const;
    bool satisfied_by(const std::vector<std::uint8_t>& x) const;

private:
    struct Eq {
        std::vector<std::size_t> vars;
        bool rhs;
    };
    std::size_t n_;
    std::vector<Eq> eqs_;
};

// Shape (ell+1, ell | ell+1, ell | ...) with n overlined pairs: block 2k has
// size ell+1, block 2k+1 has size ell, and group k = {2k, 2k+1}.
PaletteShape d4_palette_shape(int n, int ell);

// One input of the op used to derive a necessary condition: position p gets
// (1,0,0), position q gets (0,1,0), group g1 is filled with (1,0,0), group g2
// with (0,1,0) and every other position with (0,0,0).
struct D4Substitution {
    int p = -1, q = -1, g1 = -1, g2 = -1;
    std::vector<G8> materialize(const PaletteShape& shape) const;
    std::string str() const;
};

// f(lhs) and f(rhs) agree in component `component` (0-based).
struct D4Condition {
    enum Kind { Idempotency, PaletteSwap, Coupling } kind = PaletteSwap;
    int component = 0;
    D4Substitution lhs, rhs;
    int i = -1, j = -1;  // Coupling: c_ij + c_ji = a_i a_j (or 0 in the abelian control)
    std::string str() const;
};

struct D4Refutation {
    std::vector<std::uint8_t> a;
    std::vector<std::size_t> conditions;  // indices into conditions, summing to 0 = 1 under a
};

struct NonexistenceResult {
    int n = 0, ell = 0, N = 0;
    bool abelian_control = false;
    bool infeasible = false;
    std::vector<D4Condition> conditions;
    // The a-space: solutions of the idempotency and component 1/2 conditions.
    std::vector<std::size_t> a_conditions;
    std::vector<std::uint8_t> a_particular;
    std::vector<std::vector<std::uint8_t>> a_kernel;
    std::vector<D4Refutation> refutations;  // one per candidate a, in enumeration order
    std::optional<D4Op> witness;
    std::string to_json() const;
};

struct NonexistenceLimits {
    int max_a_dimension = 24;
};

// Searches the parametric family for an idempotent palette block symmetric op
// of the d4_palette_shape(n, ell). abelian_control replaces the coupling by
// c_ij + c_ji = 0, where the system becomes satisfiable. Below n = 4 no
// substitution is a palette tuple, so any witness there is vacuous.
NonexistenceResult check_palette_nonexistence(int n, int ell, bool abelian_control = false,
                                              const NonexistenceLimits& lim = {});

// Recomputes every condition from its substitutions, checks the a-space
// description and every refutation. Independent of the elimination order used
// by check_palette_nonexistence.
bool verify_nonexistence(const NonexistenceResult& r);

}  // namespace cspuniv
