#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "cspuniv/instance.hpp"
#include "cspuniv/linrelax.hpp"

namespace cspuniv {

struct ReductionEvent {
    enum class Kind { DomainRemoval, TupleRemoval };
    Kind kind;
    std::string owner;  // variable id or constraint id
    Tuple tuple;        // removed element (one entry) or removed tuple

    bool operator==(const ReductionEvent&) const = default;
};

struct ReductionTrace {
    std::vector<ReductionEvent> events;
    Instance final_instance;
};

// Replays removal events on a copy of the input.
Instance replay(const Instance& input, const std::vector<ReductionEvent>& events);

using Certificate = std::variant<std::monostate, Assignment, RationalSolution, IntegerSolution, ReductionTrace>;

struct Verdict {
    bool yes = false;
    Certificate certificate;
    std::optional<Instance> reduced;       // ArcCons and the singleton wrappers
    std::optional<Certificate> last_inner;  // singleton wrappers: certificate of the last accepting inner run

    static Verdict no() { return {}; }
};

// Exhaustive oracle; a Yes carries the satisfying assignment.
Verdict brute_force_solve(const Instance& inst, const SearchLimits& limits = {});

// Independent re-check of a Yes certificate against the instance it claims to certify.
bool certificate_valid(const Instance& inst, const Certificate& cert);

}  // namespace cspuniv
