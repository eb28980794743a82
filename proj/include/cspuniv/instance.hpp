#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cspuniv {

using Element = std::string;
using Tuple = std::vector<Element>;

struct Constraint {
    std::string id;
    std::vector<std::string> scope;
    std::vector<Tuple> tuples;  // sorted, pairwise distinct

    bool operator==(const Constraint&) const = default;
};

// An instance <X, D, C>. Values are treated as immutable; every mutation
// primitive below returns a fresh instance.
struct Instance {
    std::vector<std::string> variables;
    std::map<std::string, std::vector<Element>> domains;
    std::vector<Constraint> constraints;

    bool operator==(const Instance&) const = default;

    const std::vector<Element>& domain(const std::string& x) const;
    const Constraint& constraint(const std::string& cid) const;
    bool has_variable(const std::string& x) const;
};

using Assignment = std::map<std::string, Element>;

// Throws UsageError when an invariant of Instance does not hold.
void validate(const Instance& inst);

// Sorts and deduplicates every relation in place.
void normalize(Instance& inst);

// Variable ids and constraint indices in the normative sweep order
// (lexicographic on ids).
std::vector<std::string> variables_in_order(const Instance& inst);
std::vector<std::size_t> constraints_in_order(const Instance& inst);

bool has_empty_domain_or_relation(const Instance& inst);

Instance reduce_domain(const Instance& inst, const std::string& x, const std::vector<Element>& keep);
Instance change_constraint(const Instance& inst, const std::string& cid, std::vector<Tuple> relation);

// True iff the assignment is total, respects domains and satisfies every constraint.
bool satisfies(const Instance& inst, const Assignment& s);

// Backtracking search. The cap bounds the number of search nodes.
struct SearchLimits {
    std::uint64_t node_cap = 100'000'000;
};
std::optional<Assignment> brute_force_search(const Instance& inst, const SearchLimits& limits = {});

Instance load_instance(std::string_view json_text);
std::string save_instance(const Instance& inst);

std::string tuple_key(const Tuple& t);  // "a,b,c"

}  // namespace cspuniv
