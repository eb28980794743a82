#include <catch_amalgamated.hpp>

#include "cspuniv/linrelax.hpp"
#include "cspuniv/templates.hpp"
#include "support/oracles.hpp"
#include "support/random_instances.hpp"

using namespace cspuniv;

namespace {

Instance binary(std::vector<Tuple> rel) {
    Instance I;
    I.variables = {"x", "y"};
    I.domains = {{"x", {"0", "1"}}, {"y", {"0", "1"}}};
    I.constraints.push_back({"C", {"x", "y"}, std::move(rel)});
    normalize(I);
    return I;
}

std::size_t sum_rows(const LinearSystem& s) {
    std::size_t n = 0;
    for (const auto& e : s.equations) n += e.rhs != 0;
    return n;
}

Instance lin_pair() {
    InstanceBuilder b(lin(3, 2));
    b.add("111=0", {"x1", "x2", "x3"}).add("111=1", {"x1", "x2", "x3"});
    return b.build();
}

}  // namespace

TEST_CASE("relaxation shape") {
    LinearSystem s = build_relaxation(binary({{"0", "1"}, {"1", "0"}}));
    CHECK(s.vars.size() == 6);
    CHECK(s.equations.size() == 5);
    CHECK(sum_rows(s) == 1);

    LinearSystem cyc = build_relaxation(fooling_instance("twosat_cycle"));
    CHECK(sum_rows(cyc) == 5);
    CHECK(cyc.equations.size() - sum_rows(cyc) == 20);

    LinearSystem e = build_relaxation(binary({}));
    bool zero_eq_one = false;
    for (const auto& eq : e.equations) zero_eq_one |= eq.coeffs.empty() && eq.rhs == 1;
    CHECK(zero_eq_one);
    CHECK_FALSE(lp_feasible_01(e));

    LinearSystem d3 = build_relaxation(binary({{"0", "1"}}), 3);
    for (const auto& eq : d3.equations) CHECK((eq.rhs == 0 || eq.rhs == 3));
}

TEST_CASE("blp on the 2-SAT cycle is the one-half point") {
    Instance cyc = fooling_instance("twosat_cycle");
    auto s = lp_feasible_01(build_relaxation(cyc));
    REQUIRE(s);
    CHECK(check_solution(build_relaxation(cyc), *s));
    CHECK(lp_feasible_01(build_relaxation(lin_pair())));
}

TEST_CASE("max support drops (0,1) from every <= constraint of the cycle") {
    Instance cyc = fooling_instance("twosat_cycle");
    LinearSystem sys = build_relaxation(cyc);
    auto ms = lp_max_support(sys);
    REQUIRE(ms);
    auto ref = lp_max_support_per_coordinate(sys);
    REQUIRE(ref);
    CHECK(ms->support == ref->support);
    for (const auto& c : cyc.constraints) {
        auto idx = sys.index_of(LPVar::tuple_weight(c.id, {"0", "1"}));
        if (idx && c.tuples.size() == 3) CHECK_FALSE(ms->support[*idx]);
    }
    LinearSystem full = build_relaxation(binary({{"0", "0"}, {"0", "1"}, {"1", "0"}, {"1", "1"}}));
    auto fs = lp_max_support(full);
    REQUIRE(fs);
    CHECK(std::all_of(fs->support.begin(), fs->support.end(), [](bool b) { return b; }));
    CHECK_FALSE(lp_max_support(build_relaxation(binary({}))));
}

TEST_CASE("max support agrees with the per-coordinate method") {
    gen::Rng rng(8);
    for (int k = 0; k < 60; ++k) {
        LinearSystem sys = build_relaxation(gen::random_instance(rng));
        auto a = lp_max_support(sys), b = lp_max_support_per_coordinate(sys);
        REQUIRE(a.has_value() == b.has_value());
        if (a) {
            CHECK(a->support == b->support);
            CHECK(check_solution(sys, a->solution));
        }
    }
}

TEST_CASE("integer feasibility on the bijection and D4 instances") {
    Instance b5 = fooling_instance("bij5_cycle");
    auto s = int_feasible(build_relaxation(b5));
    REQUIRE(s);
    CHECK(check_solution(build_relaxation(b5), *s));
    Instance d4 = fooling_instance("d4_main");
    auto t = int_feasible(build_relaxation(d4));
    REQUIRE(t);
    CHECK(check_solution(build_relaxation(d4), *t));
    CHECK_FALSE(int_feasible(build_relaxation(lin_pair())));
}

TEST_CASE("blp and aip agree with the reference deciders") {
    gen::Rng rng(9);
    for (int k = 0; k < 300; ++k) {
        Instance I = gen::random_instance(rng, 4, 3, 3, 4);
        LinearSystem sys = build_relaxation(I);
        auto lp = lp_feasible_01(sys);
        auto ip = int_feasible(sys);
        INFO(save_instance(I));
        CHECK(lp.has_value() == oracle::blp(I));
        CHECK(ip.has_value() == oracle::aip(I));
        if (lp) CHECK(check_solution(sys, *lp));
        if (ip) CHECK(check_solution(sys, *ip));
    }
    for (const auto& n : fooling_instance_names()) {
        Instance I = fooling_instance(n);
        LinearSystem sys = build_relaxation(I);
        INFO(n);
        CHECK(lp_feasible_01(sys).has_value() == oracle::blp(I));
        CHECK(int_feasible(sys).has_value() == oracle::aip(I));
    }
}

TEST_CASE("d-solutions") {
    Instance cyc = fooling_instance("twosat_cycle");
    auto s2 = find_d_solution(cyc, 2);
    REQUIRE(s2);
    CHECK(is_d_solution(cyc, *s2, 2));
    CHECK_FALSE(find_d_solution(binary({}), 4));

    Instance pair = lin_pair();
    auto s4 = find_d_solution(pair, 4);
    REQUIRE(s4);
    CHECK(is_d_solution(pair, *s4, 4));
    // Uniform: every tuple weight p^n / |R| = 8 / 4.
    for (std::size_t i = 0; i < s4->vars.size(); ++i)
        if (s4->vars[i].kind == LPVar::Kind::ConstraintTuple) CHECK(s4->values[i] == 1);

    IntegerSolution neg = *s4;
    neg.values[0] = -neg.values[0];
    CHECK_FALSE(is_d_solution(pair, neg, 4));
}

TEST_CASE("parallelogram closure") {
    std::vector<Tuple> le{{"0", "0"}, {"0", "1"}, {"1", "1"}};
    CHECK(parallelogram_closure(le, 2).size() == 4);
    std::vector<Tuple> neq{{"0", "1"}, {"1", "0"}};
    CHECK(parallelogram_closure(neq, 2) == neq);
    CHECK(parallelogram_closure({{"1", "0", "1"}}, 3).size() == 1);

    auto clause = horn3sat().relation("clause");
    CHECK(parallelogram_closure(clause, 3).size() == 8);

    // A bijection graph has one tuple per row and per column: nothing completes.
    auto rho = bij5().relation("rho");
    CHECK(parallelogram_closure(rho, 2) == rho);
    CHECK_THROWS(parallelogram_closure({{"0"}}, 2));
}

TEST_CASE("relaxation json names every variable") {
    LinearSystem s = build_relaxation(binary({{"0", "1"}}));
    std::string j = s.to_json();
    for (const auto& v : s.vars) CHECK(j.find(v.render()) != std::string::npos);
    CHECK(LPVar::tuple_weight("C", {"0", "1"}).render() == "C:C:0,1");
    CHECK(LPVar::value_weight("x", "1").render() == "X:x:1");
}
