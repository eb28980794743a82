#pragma once

#include <map>
#include <string>
#include <vector>

#include "cspuniv/instance.hpp"

namespace cspuniv {

struct Template {
    std::string name;
    std::vector<Element> domain;
    std::map<std::string, std::vector<Tuple>> relations;  // each sorted, duplicate-free
    std::map<std::string, std::size_t> empty_arity;        // relations without tuples

    const std::vector<Tuple>& relation(const std::string& rel) const;
    std::size_t arity(const std::string& rel) const;
    std::string to_json() const;
};

// Collects relation applications over one template. Variables are created on
// first use with the full template domain; constraints get ids c01, c02, ...
class InstanceBuilder {
public:
    explicit InstanceBuilder(Template t) : t_(std::move(t)) {}
    InstanceBuilder& add(const std::string& relation, const std::vector<std::string>& scope);
    Instance build() const { return inst_; }

private:
    Template t_;
    Instance inst_;
};

Template horn3sat();                 // clause, zero, one
Template two_sat();                  // 16 relations: eq neq le ge lt gt or nand full empty, the rest b<mask>
Template lin(int n, int p);          // "a1...an=a0", one per distinct relation; p must be prime
Template bij5();                     // rho
Template z2_union_z3();              // l0_z2 l1_z2 l0_z3 l1_z3 l2_z3 over {0,1,0p,1p,2p}
Template z2_arrow_2();               // L3_0 L3_1 L4_0 L4_1 u01 S
Template d4_relations();             // L3_12 L23_1 L13_2 E12 E23_0 E13_0 R zero over "000".."111"
Template d4_idemp();                 // d4_relations plus c000 ... c111

// "horn3sat", "two_sat", "lin(n,p)", "bij5", "z2_union_z3", "z2_arrow_2", "d4", "d4_idemp".
Template template_by_name(const std::string& name);
std::vector<std::string> template_names();

// twosat_cycle, lin32_contradiction, bij5_cycle, z2z3_mixed, z2z3_twin, z2arrow2_chain,
// d4_main, horn_chain.
Instance fooling_instance(const std::string& name);
std::vector<std::string> fooling_instance_names();
std::string fooling_template(const std::string& name);

}  // namespace cspuniv
