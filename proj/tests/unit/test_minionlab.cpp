#include <catch_amalgamated.hpp>

#include "cspuniv/algorithms.hpp"
#include "cspuniv/errors.hpp"
#include "cspuniv/minionlab.hpp"
#include "cspuniv/templates.hpp"
#include "support/random_instances.hpp"

using namespace cspuniv;

TEST_CASE("skeleton minors") {
    SkeletonMatrix m{{"a", "b", "c"}, 3, {{1, 0, 1}, {0, 1, 1}, {0, 0, 0}}};
    REQUIRE(m.valid());
    MinorMap pi{{{"a", "u"}, {"b", "u"}, {"c", "v"}}, {"u", "v"}};
    SkeletonMatrix n = minor_skeleton(m, pi);
    CHECK(n.entries == std::vector<std::vector<std::uint8_t>>{{1, 1, 1}, {0, 0, 0}});
    CHECK(minor_skeleton(m, MinorMap::identity(m.rows)) == m);

    SkeletonMatrix shared{{"a", "b"}, 1, {{1}, {1}}};
    CHECK_FALSE(shared.violation().empty());
    MinorMap partial{{{"a", "u"}}, {"u"}};
    CHECK_THROWS_AS(minor_skeleton(m, partial), UsageError);
    MinorMap outside{{{"a", "u"}, {"b", "w"}, {"c", "u"}}, {"u"}};
    CHECK_THROWS_AS(minor_skeleton(m, outside), UsageError);
}

TEST_CASE("BLP/AIP pair minors") {
    BlpAipPair p;
    p.rows = {"a", "b"};
    p.width = 3;
    p.blp = {{1, mpq_class(1, 3), 0}, {0, mpq_class(2, 3), 1}};
    p.aip = {{1, -1, 0}, {0, 2, 1}};
    REQUIRE(p.valid());
    MinorMap pi{{{"a", "u"}, {"b", "u"}}, {"u"}};
    auto q = minor_pair(p, pi);
    CHECK(q.blp[0][1] == 1);
    CHECK(q.aip[0][1] == 1);
    CHECK(q.valid());

    auto neg = p;
    neg.aip[1][1] = 0;
    CHECK_FALSE(neg.valid());
    auto off = p;
    off.blp[1][1] = 0;
    off.blp[0][1] = 1;
    CHECK_FALSE(off.valid());
}

TEST_CASE("composition of minor maps") {
    MinorMap f{{{"a", "x"}, {"b", "y"}}, {"x", "y"}};
    MinorMap g{{{"x", "s"}, {"y", "s"}}, {"s"}};
    MinorMap h = g.after(f);
    CHECK(h.pi.at("a") == "s");
    CHECK(h.pi.at("b") == "s");
    CHECK_THROWS_AS(MinorMap({{{"z", "s"}}, {"s"}}).after(f), UsageError);
}

TEST_CASE("arc witnesses") {
    CHECK_FALSE(extract_witness_arccons(fooling_instance("twosat_cycle")));
    Instance b5 = fooling_instance("bij5_cycle");
    CHECK(extract_witness_arccons(b5).has_value() == run("csingl(arccons)", b5).yes);

    InstanceBuilder b(two_sat());
    b.add("le", {"x", "y"}).add("neq", {"y", "z"});
    Instance I = b.build();
    auto w = extract_witness_arccons(I);
    REQUIRE(w);
    CHECK(witness_violation(I, *w).empty());
    CHECK(to_json(*w).find("\"columns\"") != std::string::npos);

    auto broken = *w;
    auto& any = broken.variables.begin()->second;
    for (auto& row : any.entries) std::fill(row.begin(), row.end(), 0);
    CHECK_FALSE(witness_violation(I, broken).empty());
}

TEST_CASE("BLP/AIP witnesses follow csingl(blp>aip)") {
    gen::Rng rng(21);
    for (int k = 0; k < 25; ++k) {
        Instance I = gen::random_instance(rng, 3, 3, 2, 3);
        auto w = extract_witness_blpaip(I);
        INFO(save_instance(I));
        CHECK(w.has_value() == run("csingl(blp>aip)", I).yes);
        if (w) CHECK(witness_violation(I, *w).empty());
    }
}
