#include <catch_amalgamated.hpp>

#include "cspuniv/algorithms.hpp"
#include "cspuniv/errors.hpp"
#include "cspuniv/templates.hpp"
#include "support/oracles.hpp"
#include "support/random_instances.hpp"

using namespace cspuniv;

namespace {

bool says(const char* alg, const Instance& I) {
    Verdict v = run(alg, I);
    if (v.yes) REQUIRE(certificate_valid(I, v.certificate));
    return v.yes;
}

Instance unary_clash() {
    Instance I;
    I.variables = {"x"};
    I.domains = {{"x", {"0", "1"}}};
    I.constraints = {{"a", {"x"}, {{"0"}}}, {"b", {"x"}, {{"1"}}}};
    return I;
}

}  // namespace

TEST_CASE("grammar round trip") {
    for (const char* s : {"arccons", "blp", "aip", "blp&aip", "arccons>aip", "blp>aip", "singl(aip)",
                          "csingl(blp>aip)", "singl(blp)>aip", "csingl(arccons)>blp", "arccons>(blp&aip)",
                          "singl(blp>aip)&arccons"}) {
        INFO(s);
        CHECK(to_string(parse_algorithm(s)) == s);
    }
    CHECK(to_string(parse_algorithm(" singl ( aip ) ")) == "singl(aip)");
    for (const char* bad : {"", "sing(aip)", "blp>", "singl(aip", "aip&", "arccons>>aip"}) {
        INFO(bad);
        CHECK_THROWS_AS(parse_algorithm(bad), UsageError);
    }
}

TEST_CASE("arc consistency") {
    CHECK_FALSE(says("arccons", unary_clash()));
    Instance cyc = fooling_instance("twosat_cycle");
    Verdict v = arccons(cyc);
    REQUIRE(v.yes);
    CHECK(v.reduced->domains == cyc.domains);
    CHECK_FALSE(says("arccons", fooling_instance("horn_chain")));
    CHECK_FALSE(brute_force_solve(fooling_instance("horn_chain")).yes);
}

TEST_CASE("single relaxations on the named instances") {
    Instance cyc = fooling_instance("twosat_cycle");
    CHECK(says("blp", cyc));
    CHECK(says("aip", cyc));
    CHECK(says("blp&aip", cyc));
    CHECK_FALSE(says("blp>aip", cyc));
    CHECK(says("arccons>blp", cyc));
    CHECK(says("aip", fooling_instance("bij5_cycle")));
    CHECK(says("blp>aip", fooling_instance("bij5_cycle")));
    CHECK_FALSE(says("arccons>aip", fooling_instance("lin32_contradiction")));
    CHECK_FALSE(says("arccons>aip", unary_clash()));
    CHECK_FALSE(says("arccons&aip", unary_clash()));
}

TEST_CASE("singleton wrappers on the named instances") {
    CHECK(says("singl(aip)", fooling_instance("twosat_cycle")));
    CHECK_FALSE(says("csingl(arccons)", fooling_instance("twosat_cycle")));
    CHECK(says("singl(blp)", fooling_instance("lin32_contradiction")));
    CHECK_FALSE(says("singl(aip)", fooling_instance("z2arrow2_chain")));
    CHECK(says("singl(blp)>aip", fooling_instance("z2arrow2_chain")));
    CHECK_FALSE(says("singl(aip)>arccons", fooling_instance("z2z3_mixed")));
}

TEST_CASE("singleton trace replays to the reduced instance") {
    for (const char* alg : {"singl(aip)", "csingl(arccons)", "singl(blp)"}) {
        Instance I = fooling_instance("twosat_cycle");
        Verdict v = run(alg, I);
        if (!v.yes) continue;
        const auto& tr = std::get<ReductionTrace>(v.certificate);
        CHECK(replay(I, tr.events) == tr.final_instance);
        CHECK(tr.final_instance == *v.reduced);
    }
}

TEST_CASE("conjunction and combinators are monotone and sound") {
    gen::Rng rng(12);
    for (int k = 0; k < 120; ++k) {
        Instance I = gen::random_instance(rng);
        bool sat = brute_force_solve(I).yes;
        bool a = says("arccons", I), b = says("blp", I), z = says("aip", I);
        INFO(save_instance(I));
        CHECK(b == oracle::blp(I));
        CHECK(z == oracle::aip(I));
        CHECK(says("blp&aip", I) == (b && z));
        CHECK(says("aip&aip", I) == z);
        // blp>aip is at least as strong as both.
        bool ba = says("blp>aip", I);
        CHECK((!ba || (b && z)));
        CHECK((!sat || ba));
        // Singleton wrappers refine their inner algorithm; csingl refines singl for arccons.
        bool sa = says("singl(arccons)", I), ca = says("csingl(arccons)", I);
        CHECK((!sa || a));
        CHECK((!ca || sa));
        CHECK((!sat || ca));
    }
}

TEST_CASE("empty relations and domains are an immediate No") {
    Instance I = fooling_instance("bij5_cycle");
    I = change_constraint(I, I.constraints[0].id, {});
    for (const char* alg : {"arccons", "blp", "aip", "blp>aip", "singl(aip)", "csingl(arccons)"}) {
        INFO(alg);
        CHECK_FALSE(says(alg, I));
    }
}
