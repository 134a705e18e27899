#include "catch_amalgamated.hpp"

#include "support.hpp"
#include "wittlab/field_tower.hpp"
#include "wittlab/quadform.hpp"

using namespace wittlab;
using namespace wittlab::testing;

TEST_CASE("parse_field accepts the documented grammar", "[field_tower]") {
    const FieldTower c = parse_field("C");
    CHECK(c.class_count() == 1);
    CHECK(c.depth() == 0);

    const FieldTower r = parse_field("R((t1))");
    CHECK(r.generator_count() == 2);
    CHECK(r.class_count() == 4);
    CHECK(r.generator_name(0) == "-1");
    CHECK(r.generator_name(1) == "t1");

    const FieldTower f = parse_field("F3((s))((t))");
    CHECK(f.base().order() == 3);
    CHECK(f.variables() == std::vector<std::string>{"s", "t"});
    CHECK(f.spec() == "F3((s))((t))");

    CHECK(parse_field("  C (( x )) ((y2))").spec() == "C((x))((y2))");
    CHECK(parse_field("F9").base().degree() == 2);
}

TEST_CASE("parse_field rejects malformed specs and unsupported bases", "[field_tower]") {
    CHECK_THROWS_AS(parse_field(""), ParseError);
    CHECK_THROWS_AS(parse_field("Q"), ParseError);
    CHECK_THROWS_AS(parse_field("C((t)"), ParseError);
    CHECK_THROWS_AS(parse_field("C((1t))"), ParseError);
    CHECK_THROWS_AS(parse_field("C((t))((t))"), ParseError);
    CHECK_THROWS_AS(parse_field("F"), ParseError);
    CHECK_THROWS_AS(parse_field("F4"), UnsupportedBase);
    CHECK_THROWS_AS(parse_field("F2"), UnsupportedBase);
    CHECK_THROWS_AS(parse_field("F1"), UnsupportedBase);
    CHECK_THROWS_AS(parse_field("F15"), UnsupportedBase);
    CHECK_THROWS_AS(parse_field("F3((u))"), ParseError);
}

TEST_CASE("minus one over F3 is the nonsquare generator", "[field_tower]") {
    // Direct check: the squares mod 3 are {0, 1}, so -1 = 2 is not a square.
    const auto sq = squares_mod(3);
    REQUIRE_FALSE(sq[2]);
    const FieldTower f = parse_field("F3((t))");
    CHECK(f.minus_one() == SquareClass(1));
    CHECK(parse_field("F5").minus_one().is_trivial());
    CHECK(parse_field("C((t))").minus_one().is_trivial());
    CHECK(parse_field("R").minus_one() == SquareClass(1));
}

TEST_CASE("class_of_constant", "[field_tower]") {
    CHECK(class_of_constant(parse_field("C((t1))"), -1).is_trivial());
    CHECK(class_of_constant(parse_field("R((t1))"), 2).is_trivial());
    CHECK(class_of_constant(parse_field("R((t1))"), -7) == SquareClass(1));
    // 2 is a nonresidue mod 3: squares are {1}.
    CHECK(class_of_constant(parse_field("F3((t))"), 2) == SquareClass(1));
    // Every element of F3 is a square in F9.
    CHECK(class_of_constant(parse_field("F9"), 2).is_trivial());
    CHECK_THROWS_AS(class_of_constant(parse_field("R"), 0), ZeroElement);
    CHECK_THROWS_AS(class_of_constant(parse_field("F5"), 10), NotAUnit);
    CHECK_THROWS_AS(class_of_constant(parse_field("F3"), -3), NotAUnit);
}

TEST_CASE("class_of_constant agrees with enumeration of squares mod p", "[field_tower][property]") {
    for (std::uint64_t p : {3U, 5U, 7U, 11U, 13U}) {
        const auto sq = squares_mod(p);
        const FieldTower f(BaseField::finite(p));
        for (std::int64_t c = -40; c <= 40; ++c) {
            const auto residue = static_cast<std::uint64_t>(((c % static_cast<std::int64_t>(p)) + static_cast<std::int64_t>(p)) %
                                                            static_cast<std::int64_t>(p));
            if (residue == 0) continue;
            CHECK(class_of_constant(f, c).is_trivial() == sq[residue]);
        }
    }
}

TEST_CASE("class_of_constant is multiplicative", "[field_tower][property]") {
    Sampler s(7);
    for (const auto& spec : tower_specs()) {
        const FieldTower f = parse_field(spec);
        for (int i = 0; i < 200; ++i) {
            const std::int64_t c1 = s.between(1, 300) * (s.coin() ? 1 : -1);
            const std::int64_t c2 = s.between(1, 300) * (s.coin() ? 1 : -1);
            if (f.base().kind() == BaseKind::FiniteOdd) {
                const auto p = static_cast<std::int64_t>(f.base().characteristic());
                if (c1 % p == 0 || c2 % p == 0) continue;
            }
            CHECK(class_of_constant(f, c1 * c2) == class_of_constant(f, c1) * class_of_constant(f, c2));
        }
    }
}

TEST_CASE("orderings", "[field_tower]") {
    CHECK(orderings(parse_field("C((t1))")).empty());
    CHECK(orderings(parse_field("F3((t1))")).empty());
    CHECK(orderings(parse_field("R")).size() == 1);

    const FieldTower f = parse_field("R((t1))((t2))");
    const auto os = orderings(f);
    REQUIRE(os.size() == 4);
    std::set<std::pair<int, int>> signs;
    for (const Ordering& o : os) {
        CHECK(o.sign(f.minus_one()) == -1);
        signs.emplace(o.sign(f.variable(0)), o.sign(f.variable(1)));
        // Multiplicative on all pairs of classes.
        for (std::uint64_t a = 0; a < f.class_count(); ++a) {
            for (std::uint64_t b = 0; b < f.class_count(); ++b) {
                CHECK(o.sign(SquareClass(a) * SquareClass(b)) == o.sign(SquareClass(a)) * o.sign(SquareClass(b)));
            }
        }
    }
    CHECK(signs.size() == 4);
}

TEST_CASE("the base kind decides the level of the field", "[field_tower][property]") {
    for (const auto& spec : tower_specs()) {
        const FieldTower f = parse_field(spec);
        const auto ones = [&](std::size_t n) { return QuadForm(f, std::vector<SquareClass>(n, SquareClass(0))); };
        switch (f.base().kind()) {
            case BaseKind::RealClosed:
                for (std::size_t n = 1; n <= 9; ++n) CHECK(is_anisotropic(ones(n)));
                break;
            case BaseKind::QuadClosed:
                CHECK(is_isotropic(ones(2)));
                break;
            case BaseKind::FiniteOdd:
                CHECK(is_isotropic(ones(3)));
                break;
        }
        CHECK(orderings(f).empty() == (f.base().kind() != BaseKind::RealClosed));
    }
}

TEST_CASE("is_sum_of_two_squares", "[field_tower]") {
    for (const auto& spec : tower_specs()) {
        CHECK(is_sum_of_two_squares(parse_field(spec), SquareClass(0)));
    }
    const FieldTower c = parse_field("C((t1))");
    CHECK(is_sum_of_two_squares(c, c.variable(0)));
    const FieldTower r = parse_field("R((t1))");
    CHECK_FALSE(is_sum_of_two_squares(r, r.variable(0)));
    CHECK_FALSE(is_sum_of_two_squares(r, r.minus_one()));
    // Over a finite field every element is a sum of two squares.
    const FieldTower f = parse_field("F3");
    CHECK(is_sum_of_two_squares(f, SquareClass(1)));
}

TEST_CASE("adjoin_sqrt", "[field_tower]") {
    SECTION("R(sqrt -1) = C") {
        const auto ext = adjoin_sqrt(parse_field("R"), SquareClass(1));
        CHECK(ext.field.spec() == "C");
        CHECK(ext.class_map(SquareClass(1)).is_trivial());
    }
    SECTION("R((t))(sqrt -1) keeps the variable") {
        const FieldTower r = parse_field("R((t))");
        const auto ext = adjoin_sqrt(r, r.minus_one());
        CHECK(ext.field.spec() == "C((t))");
        CHECK(ext.class_map(r.variable(0)) == ext.field.variable(0));
        CHECK(ext.class_map(r.variable(0) * r.minus_one()) == ext.field.variable(0));
    }
    SECTION("ramified extension renames the top variable") {
        const FieldTower f = parse_field("C((t1))((t2))");
        const SquareClass b = f.variable(0) * f.variable(1);
        const auto ext = adjoin_sqrt(f, b);
        CHECK(ext.field.spec() == "C((t1))((s1))");
        // s^2 = t1 t2, so t2 = s^2 / t1 has the class of t1.
        CHECK(ext.class_map(f.variable(1)) == ext.field.variable(0));
        CHECK(ext.class_map(f.variable(0)) == ext.field.variable(0));
        CHECK(ext.class_map(b).is_trivial());
    }
    SECTION("F3(sqrt u) = F9") {
        const auto ext = adjoin_sqrt(parse_field("F3"), SquareClass(1));
        CHECK(ext.field.spec() == "F9");
        CHECK(ext.class_map(SquareClass(1)).is_trivial());
        // F9 = F3[i]/(i^2 + 1): search for x with x^2 = 2.
        bool found = false;
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) {
                // (a + b i)^2 = a^2 - b^2 + 2ab i
                const int re = ((a * a - b * b) % 3 + 3) % 3;
                const int im = (2 * a * b) % 3;
                found = found || (re == 2 && im == 0);
            }
        }
        CHECK(found);
    }
    SECTION("fresh names avoid existing variables") {
        const FieldTower f = parse_field("C((s1))((t))");
        CHECK(adjoin_sqrt(f, f.variable(1)).field.spec() == "C((s1))((s2))");
    }
}

TEST_CASE("adjoin_sqrt properties", "[field_tower][property]") {
    Sampler s(11);
    for (const auto& spec : tower_specs()) {
        const FieldTower f = parse_field(spec);
        CHECK(adjoin_sqrt(f, SquareClass(0)).field == f);
        for (int i = 0; i < 20; ++i) {
            const SquareClass b = random_class(f, s);
            const auto ext = adjoin_sqrt(f, b);
            CHECK(ext.class_map(b).is_trivial());
            // Isotropy survives field extension.
            const QuadForm phi = random_form(f, s, 6);
            std::vector<SquareClass> image;
            for (SquareClass e : phi.entries()) image.push_back(ext.class_map(e));
            if (is_isotropic(phi)) CHECK(is_isotropic(QuadForm(ext.field, image)));
            // The class map is a group homomorphism.
            const SquareClass x = random_class(f, s);
            const SquareClass y = random_class(f, s);
            CHECK(ext.class_map(x * y) == ext.class_map(x) * ext.class_map(y));
            CHECK(ext.class_map(f.minus_one()) == ext.field.minus_one());
        }
    }
}

TEST_CASE("render uses signed monomials", "[field_tower]") {
    const FieldTower r = parse_field("R((t1))((t2))");
    CHECK(r.render(SquareClass(0)) == "1");
    CHECK(r.render(r.minus_one()) == "-1");
    CHECK(r.render(r.minus_one() * r.variable(0) * r.variable(1)) == "-t1*t2");
    const FieldTower f = parse_field("F3((t))");
    CHECK(f.render(SquareClass(1) * f.variable(0)) == "u*t");
}
