#include <catch_amalgamated.hpp>

#include "cspuniv/errors.hpp"
#include "cspuniv/templates.hpp"
#include "cspuniv/verdict.hpp"
#include "support/random_instances.hpp"

using namespace cspuniv;

namespace {

Instance single(const std::vector<std::string>& scope, std::vector<Tuple> tuples, std::vector<Element> dom = {"0", "1"}) {
    Instance I;
    for (const auto& x : scope)
        if (!I.has_variable(x)) {
            I.variables.push_back(x);
            I.domains[x] = dom;
        }
    I.constraints.push_back({"C1", scope, std::move(tuples)});
    normalize(I);
    validate(I);
    return I;
}

}  // namespace

TEST_CASE("reduce_domain filters every occurrence of the variable") {
    Instance cyc = fooling_instance("twosat_cycle");
    Instance r = reduce_domain(cyc, "x1", {"0"});
    CHECK(r.domain("x1") == std::vector<Element>{"0"});
    for (const auto& c : r.constraints)
        for (std::size_t i = 0; i < c.scope.size(); ++i)
            if (c.scope[i] == "x1")
                for (const auto& t : c.tuples) CHECK(t[i] == "0");
    CHECK(reduce_domain(cyc, "x1", cyc.domain("x1")) == cyc);
    CHECK(reduce_domain(r, "x1", {"0"}) == r);

    Instance rep = single({"x", "x"}, {{"0", "1"}, {"1", "1"}, {"0", "0"}});
    CHECK(reduce_domain(rep, "x", {"1"}).constraints[0].tuples == std::vector<Tuple>{{"1", "1"}});
    CHECK_THROWS_AS(reduce_domain(cyc, "nope", {"0"}), UsageError);
}

TEST_CASE("horn clause reduced on its first position keeps three tuples") {
    InstanceBuilder b(horn3sat());
    b.add("clause", {"x", "y", "z"});
    Instance r = reduce_domain(b.build(), "x", {"1"});
    CHECK(r.constraints[0].tuples.size() == 3);
}

TEST_CASE("change_constraint touches only the named relation") {
    Instance b5 = fooling_instance("bij5_cycle");
    const auto& first = b5.constraints[0];
    Instance s = change_constraint(b5, first.id, {{"0", "1"}});
    CHECK(s.constraints[0].tuples == std::vector<Tuple>{{"0", "1"}});
    for (std::size_t i = 1; i < b5.constraints.size(); ++i) CHECK(s.constraints[i] == b5.constraints[i]);
    CHECK(s.domains == b5.domains);
    CHECK(change_constraint(b5, first.id, first.tuples) == b5);
    Instance e = change_constraint(b5, first.id, {});
    CHECK(has_empty_domain_or_relation(e));
    CHECK_THROWS_AS(change_constraint(b5, first.id, {{"0"}}), UsageError);
}

TEST_CASE("brute force oracle") {
    CHECK_FALSE(brute_force_solve(fooling_instance("twosat_cycle")).yes);
    CHECK_FALSE(brute_force_solve(fooling_instance("d4_main")).yes);
    Verdict v = brute_force_solve(single({"x", "y"}, {{"0", "1"}}));
    REQUIRE(v.yes);
    CHECK(std::get<Assignment>(v.certificate) == Assignment{{"x", "0"}, {"y", "1"}});
    CHECK(certificate_valid(single({"x", "y"}, {{"0", "1"}}), v.certificate));

    SearchLimits tiny;
    tiny.node_cap = 3;
    CHECK_THROWS_AS(brute_force_solve(fooling_instance("z2arrow2_chain"), tiny), ResourceError);
}

TEST_CASE("oracle verdict ignores constraint order") {
    gen::Rng rng(5);
    for (int k = 0; k < 50; ++k) {
        Instance I = gen::random_instance(rng);
        Instance J = I;
        std::reverse(J.constraints.begin(), J.constraints.end());
        CHECK(brute_force_solve(I).yes == brute_force_solve(J).yes);
        CHECK(brute_force_solve(load_instance(save_instance(I))).yes == brute_force_solve(I).yes);
    }
}

TEST_CASE("json round trip and schema errors") {
    for (const auto& n : fooling_instance_names()) {
        Instance I = fooling_instance(n);
        CHECK(load_instance(save_instance(I)) == I);
    }
    Instance one = load_instance(R"({"variables":["x"],"domains":{"x":["0","1"]},
        "constraints":[{"id":"u","scope":["x"],"tuples":[["1"]]}]})");
    CHECK(one.variables.size() == 1);
    CHECK(brute_force_solve(one).yes);

    auto msg = [](const char* text) {
        try {
            load_instance(text);
        } catch (const ParseError& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    std::string m = msg(R"({"variables":["x"],"domains":{"x":["0"]},
        "constraints":[{"id":"u","scope":["x"],"tuples":[["7"]]}]})");
    CHECK(m.find("constraints") != std::string::npos);
    CHECK_FALSE(msg(R"({"variables":["x"]})").empty());
    CHECK_FALSE(msg("not json").empty());
}

TEST_CASE("save orders keys and sorts tuples") {
    Instance I = single({"x", "y"}, {{"1", "0"}, {"0", "1"}});
    std::string s = save_instance(I);
    CHECK(s.find("\"variables\"") < s.find("\"domains\""));
    CHECK(s.find("\"domains\"") < s.find("\"constraints\""));
    CHECK(I.constraints[0].tuples.front() == Tuple{"0", "1"});
}
