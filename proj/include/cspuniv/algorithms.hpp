#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>

#include "cspuniv/verdict.hpp"

namespace cspuniv {

struct AlgorithmSpec {
    enum class Kind { ArcCons, Blp, Aip, And, SeqArcCons, SeqBlp, Singl, CSingl, SinglThen, CSinglThen };
    Kind kind = Kind::ArcCons;
    std::shared_ptr<const AlgorithmSpec> a;  // operand, or the singleton-wrapped algorithm
    std::shared_ptr<const AlgorithmSpec> b;  // second operand of And / SinglThen / CSinglThen

    static AlgorithmSpec atom(Kind k) { return {k, nullptr, nullptr}; }
    static AlgorithmSpec unary(Kind k, AlgorithmSpec x);
    static AlgorithmSpec binary(Kind k, AlgorithmSpec x, AlgorithmSpec y);
};

// Grammar (whitespace ignored):
//   spec  := unary ("&" unary)*
//   unary := "arccons>" unary | "blp>" unary
//          | "singl(" spec ")" [">" unary] | "csingl(" spec ")" [">" unary]
//          | "arccons" | "blp" | "aip" | "(" spec ")"
// The parenthesized form is only needed to print an "&" under a prefix.
AlgorithmSpec parse_algorithm(std::string_view text);
std::string to_string(const AlgorithmSpec& spec);

struct RunOptions {
    // 0 is the normative sweep order (lexicographic ids, domain order,
    // sorted tuples); any other value shuffles each sweep deterministically.
    std::uint64_t sweep_seed = 0;
};

Verdict run(const AlgorithmSpec& spec, const Instance& inst, const RunOptions& opts = {});
Verdict run(std::string_view spec, const Instance& inst, const RunOptions& opts = {});

Verdict arccons(const Instance& inst);
Verdict blp(const Instance& inst);
Verdict aip(const Instance& inst);

}  // namespace cspuniv
