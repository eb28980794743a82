#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cspuniv/linrelax.hpp"
#include "cspuniv/templates.hpp"

namespace cspuniv {

// f: A^N -> B. The rule works on element indices into `domain` / `codomain`.
struct FiniteFunction {
    std::string name;
    std::vector<std::string> arg_names;
    std::vector<Element> domain;
    std::vector<Element> codomain;
    std::function<int(const std::vector<int>&)> rule;

    std::size_t arity() const { return arg_names.size(); }
    int eval(const std::vector<int>& args) const;  // checks range of the result
    Element operator()(const Tuple& args) const;
};

struct PaletteShape {
    std::vector<int> block_sizes;
    std::vector<std::vector<int>> groups;  // disjoint sets of block indices (0-based)

    // All blocks overlined, each its own group.
    static PaletteShape overlined(int blocks, int size);
    // "(3,3,3)" overlines every block; "(2,1,2,1|1,2;3,4)" lists groups of 1-based block indices.
    static PaletteShape parse(const std::string& text);
    std::string render() const;
    int total() const;
    int block_start(int i) const;
    void validate() const;
};

enum class BlockFlavor { Symmetric, TotallySymmetric, Alternating };
BlockFlavor parse_flavor(const std::string& s);  // sym | tsym | alt
std::string to_string(BlockFlavor f);

struct PolyCounterexample {
    std::string relation;
    std::vector<Tuple> rows;  // the N chosen relation tuples
    Tuple image;
};

struct CheckReport {
    bool holds = true;
    bool exhaustive = true;
    std::uint64_t checks = 0;
};

struct PolymorphismReport : CheckReport {
    std::optional<PolyCounterexample> counterexample;
};

struct Limits {
    std::uint64_t exhaustive_cap = 10'000'000;  // checks per relation (resp. tuples for palette enumeration)
    std::uint64_t samples = 1'000'000;
    std::uint64_t seed = 0;
};

// Applies f column-wise to every choice of N tuples of each source relation.
PolymorphismReport is_polymorphism(const FiniteFunction& f, const Template& src, const Template& dst,
                                   const Limits& lim = {});

bool is_palette_tuple(const PaletteShape& shape, const Tuple& t);

// Block-wise canonical invariants: multiset, support, or net count per
// element (odd positions minus even positions).
bool block_equivalent(BlockFlavor flavor, const Tuple& x, const Tuple& y);
bool palette_equivalent(const PaletteShape& shape, const std::vector<BlockFlavor>& flavors, const Tuple& a,
                        const Tuple& b);

struct PaletteReport : CheckReport {
    std::optional<std::pair<Tuple, Tuple>> counterexample;
    int block = -1;
};

// For every block i: palette tuples a, b that agree outside block i and have
// equivalent i-th blocks must get the same value.
PaletteReport is_palette_block(const FiniteFunction& f, const PaletteShape& shape,
                               const std::vector<BlockFlavor>& flavors, const Limits& lim = {});

// first_const_block, z2z3_alt, z2arrow2_sum(_x11) take a shape; conj_n and
// majority_odd take one block whose size is the arity; z2arrow2_ternary is ternary.
FiniteFunction construct(const std::string& name, const std::vector<Element>& domain, const PaletteShape& shape);
FiniteFunction conj_n(int n);
FiniteFunction majority_odd(int n);
FiniteFunction first_const_block(const std::vector<Element>& domain, const PaletteShape& shape);
FiniteFunction z2z3_alt(const PaletteShape& shape);
// Without a block inside {0,1} it returns the first argument different from 2
// (2 if there is none); first_argument_fallback returns x_1 instead, which is
// not a polymorphism (construction name "z2arrow2_sum_x11").
FiniteFunction z2arrow2_sum(const PaletteShape& shape, bool first_argument_fallback = false);
FiniteFunction z2arrow2_ternary();

// Spot re-evaluation of random inputs.
bool check_purity(const FiniteFunction& f, std::uint64_t samples, std::uint64_t seed);

// A d-solution of a singleton restriction of the instance; d is the block size.
struct BlockSolution {
    Instance restricted;
    IntegerSolution solution;
    mpz_class d;
};

// x := f(a_{x,1}, ..., a_{x,n}) where a_{x,j} lists each element c exactly
// s_j(x^c) times. Throws PropertyViolation if the result is not a solution.
Assignment build_solution_from_polymorphism(const Instance& inst, const FiniteFunction& f, const PaletteShape& shape,
                                            const std::vector<BlockSolution>& blocks);

// Runs singl(blp>aip); on Yes gathers one common-d solution per singleton
// restriction and assembles a solution with first_const_block on the
// instance's (shared) domain. Returns nullopt when the algorithm says No.
struct Synthesis {
    Assignment solution;
    PaletteShape shape;
    mpz_class d;
};
std::optional<Synthesis> synthesize_solution(const Instance& inst);

}  // namespace cspuniv
