#include "catch_amalgamated.hpp"

#include "support.hpp"
#include "wittlab/expression.hpp"

using namespace wittlab;
using namespace wittlab::testing;

TEST_CASE("parsing forms", "[expression]") {
    const FieldTower f = parse_field("R((t1))((t2))");
    const SquareClass m1 = f.minus_one();
    const SquareClass t1 = f.variable(0);
    const SquareClass t2 = f.variable(1);

    CHECK(parse_form(f, "<1,-1,t1>") == QuadForm(f, {SquareClass(0), m1, t1}));
    CHECK(parse_form(f, "< 2 , -t1*t2 >") == QuadForm(f, {SquareClass(0), m1 * t1 * t2}));
    CHECK(parse_form(f, "<<t1,t2>>") == pfister(f, {t1, t2}));
    CHECK(parse_form(f, "<1> + <t1>") == QuadForm(f, {SquareClass(0), t1}));
    CHECK(parse_form(f, "3 x <t1>") == multiple(3, QuadForm(f, {t1})));
    CHECK(parse_form(f, "<<t1>> x <<t2>>") == pfister(f, {t1, t2}));
    CHECK(parse_form(f, "<1> + 2 x <t2> x <t1>") == QuadForm(f, {SquareClass(0), t1 * t2, t1 * t2}));
    CHECK(parse_form(f, "scale(-t1, <1,t2>)") == QuadForm(f, {m1 * t1, m1 * t1 * t2}));
    CHECK(parse_form(f, "<>").dim() == 0);
}

TEST_CASE("parsing algebras", "[expression]") {
    const FieldTower f = parse_field("C((t1))((t2))");
    const BrauerClass alpha = parse_algebra(f, "(t1,t2)(x)(t1,t1*t2)");
    REQUIRE(alpha.symbols().size() == 2);
    CHECK(alpha.symbols()[1] == SymbolSlots{f.variable(0), f.variable(0) * f.variable(1)});
    CHECK_THROWS_AS(parse_algebra(f, "<1>"), ParseError);
    CHECK_THROWS_AS(parse_form(f, "(t1,t2)"), ParseError);
}

TEST_CASE("the letter x is a variable where a variable is expected", "[expression]") {
    const FieldTower f = parse_field("C((x))((y))");
    const QuadForm phi = parse_form(f, "<x>x<y>");
    CHECK(phi == QuadForm(f, {f.variable(0) * f.variable(1)}));
    CHECK(parse_form(f, "<x> x <x*y>") == QuadForm(f, {f.variable(1)}));
}

TEST_CASE("finite bases accept u", "[expression]") {
    const FieldTower f = parse_field("F3((t))");
    CHECK(parse_form(f, "<u*t, 2>") == QuadForm(f, {SquareClass(1) * f.variable(0), SquareClass(1)}));
    CHECK_THROWS_AS(parse_form(parse_field("R((t))"), "<u>"), UnknownVariable);
}

TEST_CASE("parse errors", "[expression]") {
    const FieldTower f = parse_field("F5((t))");
    CHECK_THROWS_AS(parse_form(f, ""), ParseError);
    CHECK_THROWS_AS(parse_form(f, "<1,"), ParseError);
    CHECK_THROWS_AS(parse_form(f, "<1> +"), ParseError);
    CHECK_THROWS_AS(parse_form(f, "<5>"), ParseError);
    CHECK_THROWS_AS(parse_form(f, "<0>"), ZeroElement);
    CHECK_THROWS_AS(parse_form(f, "<s>"), UnknownVariable);
    CHECK_THROWS_AS(parse_form(f, "3"), ParseError);
    CHECK_THROWS_AS(parse_form(f, "0 x <1>"), ParseError);
    CHECK_THROWS_AS(parse_form(f, "5000 x <1>"), ParseError);
    CHECK_THROWS_AS(parse_form(f, "<1> <t>"), ParseError);
    CHECK_THROWS_AS(parse_form(f, "<1> x 2"), ParseError);
    CHECK_THROWS_AS(parse_form(f, "$a"), UnknownVariable);
    try {
        (void)parse_form(f, "<1,t> + <t,,1>");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.position() == 11);
    }
}

TEST_CASE("bindings", "[expression]") {
    const FieldTower f = parse_field("C((t))");
    Bindings b;
    b.emplace("a", parse_form(f, "<1,t>"));
    b.emplace("q", Expression(parse_algebra(f, "(t,t)")));
    CHECK(parse_form(f, "$a + $a", &b).dim() == 4);
    CHECK_THROWS_AS(parse_form(f, "$q", &b), ParseError);
}

TEST_CASE("render and parse round-trip", "[expression][property]") {
    Sampler s(13);
    for (const auto& spec : tower_specs()) {
        const FieldTower f = parse_field(spec);
        for (int i = 0; i < 50; ++i) {
            const QuadForm phi = random_form(f, s, 8);
            INFO(spec << " " << render(phi));
            CHECK(parse_form(f, render(phi)) == phi);
            std::vector<SymbolSlots> symbols;
            for (std::size_t k = 1 + s.below(3); k > 0; --k) symbols.emplace_back(random_class(f, s), random_class(f, s));
            const BrauerClass alpha(f, symbols);
            CHECK(parse_algebra(f, render(alpha)).symbols() == alpha.symbols());
            const auto slots = random_slots(f, s, 1 + s.below(3));
            CHECK(parse_form(f, render_pfister(f, slots)) == pfister(f, slots));
        }
    }
}
