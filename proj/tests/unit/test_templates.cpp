#include <catch_amalgamated.hpp>

#include "cspuniv/errors.hpp"
#include "cspuniv/linrelax.hpp"
#include "cspuniv/templates.hpp"
#include "cspuniv/verdict.hpp"

using namespace cspuniv;

TEST_CASE("boolean templates") {
    CHECK(horn3sat().relation("clause").size() == 7);
    Template ts = two_sat();
    CHECK(ts.relations.size() == 16);
    CHECK(ts.relation("le") == std::vector<Tuple>{{"0", "0"}, {"0", "1"}, {"1", "1"}});
    CHECK(ts.relation("empty").empty());
    CHECK(ts.arity("empty") == 2);
}

TEST_CASE("linear equations") {
    Template l32 = lin(3, 2);
    CHECK(l32.relation("111=0").size() == 4);
    Template l33 = lin(3, 3);
    for (const auto& [name, r] : l33.relations)
        if (name.substr(0, 3) != "000") CHECK(r.size() == 9);
    Template l12 = lin(1, 2);
    CHECK(l12.relation("1=0") == std::vector<Tuple>{{"0"}});
    CHECK(l12.relation("1=1") == std::vector<Tuple>{{"1"}});
    CHECK_THROWS_AS(lin(3, 4), UsageError);
    // x1+x1+... style duplicates collapse: 2x = 0 and x = 0 name one relation mod 3 only once.
    std::set<std::vector<Tuple>> distinct;
    for (const auto& [name, r] : l33.relations) distinct.insert(r);
    CHECK(distinct.size() == l33.relations.size());
}

TEST_CASE("bijection and union templates") {
    CHECK(bij5().relation("rho").size() == 5);
    Template z = z2_union_z3();
    CHECK(z.domain.size() == 5);
    CHECK(z.relation("l0_z2").size() == 4 + 27);
    CHECK(z.relation("l0_z3").size() == 9 + 8);
    Template a = z2_arrow_2();
    CHECK(a.relation("L3_0").size() == 5);
    CHECK(a.relation("L4_1").size() == 9);
    CHECK(a.relation("S").size() == 21);
    CHECK(a.relation("u01").size() == 2);
}

TEST_CASE("dihedral template") {
    Template d = d4_relations();
    CHECK(d.domain.size() == 8);
    CHECK(d.relation("R").size() == 8);
    CHECK(d.relation("E12").size() == 32);
    CHECK(d.relation("zero").size() == 1);
    // Three independent linear conditions on 12 bits.
    for (const char* L : {"L3_12", "L23_1", "L13_2"}) CHECK(d.relation(L).size() == 128);
    Template di = d4_idemp();
    CHECK(di.relations.size() == d.relations.size() + 8);
    CHECK(di.relation("c101") == std::vector<Tuple>{{"101"}});
}

TEST_CASE("fooling instances") {
    Instance cyc = fooling_instance("twosat_cycle");
    CHECK(cyc.constraints.size() == 5);
    CHECK(cyc.variables.size() == 4);
    Instance d4 = fooling_instance("d4_main");
    CHECK(d4.constraints.size() == 7);
    CHECK(d4.variables.size() == 9);
    CHECK(fooling_instance("z2arrow2_chain").variables.size() == 18);
    for (const auto& n : fooling_instance_names()) {
        INFO(n);
        Instance I = fooling_instance(n);
        validate(I);
        CHECK_FALSE(brute_force_solve(I).yes);
        CHECK_NOTHROW(template_by_name(fooling_template(n)));
    }
    CHECK_THROWS_AS(fooling_instance("nope"), UsageError);
}

TEST_CASE("lookup by name") {
    for (const auto& n : template_names())
        if (n != "lin(n,p)") CHECK(template_by_name(n).name == n);
    CHECK(template_by_name("lin(2,5)").domain.size() == 5);
    CHECK_THROWS_AS(template_by_name("lin(2,4)"), UsageError);
    CHECK_THROWS_AS(InstanceBuilder(horn3sat()).add("clause", {"x", "y"}), UsageError);
}
