#include <catch_amalgamated.hpp>

#include "cspuniv/d4.hpp"
#include "cspuniv/errors.hpp"

using namespace cspuniv;

namespace {

std::vector<G8> all_elements() {
    std::vector<G8> out;
    for (int i = 0; i < 8; ++i) out.push_back(G8::from_index(i));
    return out;
}

}  // namespace

TEST_CASE("group axioms on Z2^3 with the twisted product") {
    const auto G = all_elements();
    const G8 e = G8::parse("000");
    bool abelian = true;
    for (const auto& x : G) {
        CHECK(compose(x, e) == x);
        CHECK(compose(x, inverse(x)) == e);
        CHECK(compose(inverse(x), x) == e);
        CHECK(G8::parse(x.str()) == x);
        for (const auto& y : G) {
            abelian &= compose(x, y) == compose(y, x);
            for (const auto& z : G) CHECK(compose(compose(x, y), z) == compose(x, compose(y, z)));
        }
    }
    CHECK_FALSE(abelian);
    CHECK(compose(G8::parse("100"), G8::parse("010")) == G8::parse("111"));
    CHECK(compose(G8::parse("010"), G8::parse("100")) == G8::parse("110"));
    CHECK(check_group_presentation());
    CHECK_THROWS(G8::parse("12"));
}

TEST_CASE("parametric ops") {
    int valid = 0;
    for (int N = 1; N <= 2; ++N)
        for (int code = 0; code < 1 << (N + N * N); ++code) {
            D4Op op = D4Op::zero(N);
            for (int i = 0; i < N; ++i) op.a[i] = code >> i & 1;
            for (int k = 0; k < N * N; ++k) op.c[k / N][k % N] = code >> (N + k) & 1;
            if (!op.valid()) continue;
            ++valid;
            std::string term = generate_by_terms(op);
            CHECK(term_arity(term) <= N);
        }
    CHECK(valid == 36);

    D4Op comp = D4Op::compose_op();
    CHECK(generate_by_terms(comp) == "x1*x2");
    for (const auto& x : all_elements())
        for (const auto& y : all_elements()) CHECK(comp.eval({x, y}) == compose(x, y));
    CHECK(generate_by_terms(D4Op::identity()) == "x1");
    CHECK(generate_by_terms(D4Op::zero(1)) == "x1^4");

    D4Op bad = D4Op::zero(2);
    bad.a = {1, 1};
    CHECK_FALSE(bad.valid());
    CHECK_THROWS_AS(generate_by_terms(bad), PropertyViolation);
}

TEST_CASE("term evaluation") {
    std::vector<G8> x{G8::parse("100"), G8::parse("010"), G8::parse("110")};
    CHECK(eval_term("x1*x2", x) == compose(x[0], x[1]));
    CHECK(eval_term("x3^-1", x) == inverse(x[2]));
    CHECK(eval_term("x3^4", x) == G8::parse("000"));
    CHECK(eval_term("x3^2", x) == G8::parse("001"));
    CHECK(eval_term("(x1*x2)^-1*x1", x) == compose(inverse(compose(x[0], x[1])), x[0]));
    CHECK(term_arity("x1*x3^-1") == 3);
    CHECK_THROWS(eval_term("x1**x2", x));
    CHECK_THROWS(eval_term("x4", x));
}

TEST_CASE("compose preserves the eight relations") {
    auto r = d4op_is_polymorphism(D4Op::compose_op());
    CHECK(r.holds);
    CHECK(r.exhaustive);
}

TEST_CASE("GF(2) elimination with refutations") {
    Gf2System s(3);
    s.add_equation({0, 1}, true);
    s.add_equation({1, 2}, false);
    s.add_equation({0, 2}, false);
    auto sol = s.solve(true);
    CHECK_FALSE(sol.solvable);
    CHECK(s.is_refutation(sol.refutation));
    CHECK(sol.refutation.size() == 3);

    Gf2System t(4);
    t.add_equation({0, 1}, true);
    t.add_equation({2, 2, 3}, true);  // x2 cancels
    auto ok = t.solve(true);
    REQUIRE(ok.solvable);
    CHECK(t.satisfied_by(ok.particular));
    CHECK(ok.rank == 2);
    CHECK(ok.kernel.size() == 2);
    for (const auto& k : ok.kernel) {
        auto y = ok.particular;
        for (std::size_t i = 0; i < y.size(); ++i) y[i] ^= k[i];
        CHECK(t.satisfied_by(y));
    }
    CHECK_FALSE(t.is_refutation({0}));
}

TEST_CASE("nonexistence in the palette family") {
    auto r = check_palette_nonexistence(4, 2);
    CHECK(r.infeasible);
    CHECK(r.N == 4 * 5);
    CHECK(verify_nonexistence(r));
    CHECK(r.to_json().find("\"infeasible\"") != std::string::npos);

    auto ctl = check_palette_nonexistence(4, 2, true);
    CHECK_FALSE(ctl.infeasible);
    REQUIRE(ctl.witness);
    CHECK(verify_nonexistence(ctl));
    CHECK(ctl.to_json().find("\"witness\"") != std::string::npos);

    // A tampered trace must not replay.
    auto bad = r;
    REQUIRE_FALSE(bad.refutations.empty());
    bad.refutations[0].conditions.pop_back();
    CHECK_FALSE(verify_nonexistence(bad));
    auto bad_a = r;
    bad_a.refutations[0].a[0] ^= 1;
    CHECK_FALSE(verify_nonexistence(bad_a));

    auto small = check_palette_nonexistence(3, 2);
    CHECK_FALSE(small.infeasible);
    CHECK(small.to_json().find("\"swap_conditions\": 0") != std::string::npos);
    CHECK_THROWS_AS(check_palette_nonexistence(4, 1), UsageError);
    NonexistenceLimits tight;
    tight.max_a_dimension = 2;
    CHECK_THROWS_AS(check_palette_nonexistence(4, 2, false, tight), ResourceError);
}

TEST_CASE("palette shape of the family") {
    auto s = d4_palette_shape(2, 3);
    CHECK(s.render() == "(4,3,4,3|1,2;3,4)");
    CHECK(s.total() == 2 * 7);
}
