#include "catch_amalgamated.hpp"

#include "support.hpp"
#include "wittlab/witness_search.hpp"

using namespace wittlab;
using namespace wittlab::testing;

namespace {

// Sum of rep_i * v_i^2 with exponent vectors as keys and Gaussian integer
// coefficients, reduced mod p when p > 0.
using Coefficient = std::pair<std::int64_t, std::int64_t>;

bool evaluates_to_zero(const QuadForm& phi, const IsotropyWitness& w) {
    const FieldTower& f = phi.field();
    const std::int64_t p = f.base().kind() == BaseKind::FiniteOdd ? static_cast<std::int64_t>(f.base().order()) : 0;
    const auto reduce = [p](std::int64_t x) { return p == 0 ? x : ((x % p) + p) % p; };
    const std::int64_t base_rep = f.base().kind() == BaseKind::FiniteOdd ? nonsquare_mod(p) : -1;

    bool nonzero = false;
    std::map<std::vector<int>, Coefficient> total;
    REQUIRE(w.coordinates.size() == phi.dim());
    for (std::size_t i = 0; i < phi.dim(); ++i) {
        const SquareClass e = phi.entries()[i];
        const std::int64_t c = f.base_generators() == 1 && e.test(0) ? base_rep : 1;
        std::vector<int> shift(static_cast<std::size_t>(f.depth()), 0);
        for (int j = 0; j < f.depth(); ++j) shift[static_cast<std::size_t>(j)] = e.test(f.variable_bit(j)) ? 1 : 0;
        const auto& poly = w.coordinates[i];
        for (const auto& x : poly) nonzero = nonzero || reduce(x.re) != 0 || x.im != 0;
        for (const auto& x : poly) {
            for (const auto& y : poly) {
                std::vector<int> key = shift;
                for (std::size_t j = 0; j < key.size(); ++j) key[j] += static_cast<int>(x.exponents[j] + y.exponents[j]);
                auto& slot = total[key];
                slot.first = reduce(slot.first + c * (x.re * y.re - x.im * y.im));
                slot.second = reduce(slot.second + c * (x.re * y.im + x.im * y.re));
            }
        }
    }
    if (!nonzero) return false;
    for (const auto& [key, value] : total) {
        if (value.first != 0 || value.second != 0) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("witnesses for small isotropic forms", "[witness_search]") {
    const FieldTower f3 = parse_field("F3((t))");
    const QuadForm three_ones(f3, {SquareClass(0), SquareClass(0), SquareClass(0)});
    const auto w = isotropy_witness_search(three_ones);
    REQUIRE(w.has_value());
    CHECK(evaluates_to_zero(three_ones, *w));
    CHECK(verify_witness(three_ones, *w));

    const FieldTower r = parse_field("R((t))");
    const QuadForm plane(r, {SquareClass(0), r.minus_one()});
    const auto wr = isotropy_witness_search(plane);
    REQUIRE(wr.has_value());
    CHECK(evaluates_to_zero(plane, *wr));

    // <1,1> over C((t)) needs i.
    const FieldTower c = parse_field("C((t))");
    const QuadForm ones(c, {SquareClass(0), SquareClass(0)});
    const auto wc = isotropy_witness_search(ones);
    REQUIRE(wc.has_value());
    CHECK(evaluates_to_zero(ones, *wc));
}

TEST_CASE("no witness is ever reported for anisotropic forms", "[witness_search]") {
    const FieldTower r = parse_field("R((t))");
    CHECK_FALSE(isotropy_witness_search(QuadForm(r, {SquareClass(0), SquareClass(0), r.variable(0)}), {3, 2000, 1}));
    const FieldTower c = parse_field("C((t1))((t2))((t3))");
    const QuadForm pi = pfister(c, {c.variable(0), c.variable(1), c.variable(2)});
    CHECK_FALSE(isotropy_witness_search(pi, {2, 500, 1}));
}

TEST_CASE("witness search on random forms over small prime bases", "[witness_search][property]") {
    Sampler s(77);
    std::size_t isotropic_small = 0;
    std::size_t found_small = 0;
    const std::vector<std::string> specs = {"F3", "F5((t))", "F7((t1))((t2))", "F3((a))((b))", "F5((a))((b))"};
    for (int i = 0; i < 150; ++i) {
        const FieldTower f = parse_field(specs[s.below(specs.size())]);
        const QuadForm phi = random_form(f, s, 6);
        const auto w = isotropy_witness_search(phi, {4, 4000, static_cast<std::uint64_t>(i)});
        INFO(f.spec() << " " << render(phi));
        if (w) {
            CHECK(witt_index(phi) >= 1);
            CHECK(evaluates_to_zero(phi, *w));
        }
        if (phi.dim() <= 4 && witt_index(phi) >= 1) {
            ++isotropic_small;
            if (w) ++found_small;
        }
    }
    CHECK(found_small * 100 >= isotropic_small * 95);
}

TEST_CASE("witness search is deterministic and checks its inputs", "[witness_search]") {
    const FieldTower f = parse_field("F5((t1))((t2))");
    const QuadForm phi(f, {SquareClass(1), f.variable(0), f.variable(0) * SquareClass(1), f.variable(0) * f.variable(1), SquareClass(1)});
    const auto a = isotropy_witness_search(phi, {3, 500, 42});
    const auto b = isotropy_witness_search(phi, {3, 500, 42});
    REQUIRE(a.has_value());
    REQUIRE(b.has_value());
    CHECK(render(f, *a) == render(f, *b));

    CHECK_THROWS_AS(isotropy_witness_search(QuadForm(parse_field("F9"), {SquareClass(0)})), UnsupportedBase);
    CHECK_THROWS_AS(isotropy_witness_search(QuadForm(parse_field("C((a))((b))((c))((d))((e))((f))((g))((h))((i))"))),
                    UnsupportedBase);

    IsotropyWitness zero{std::vector<LaurentPolynomial>(phi.dim())};
    CHECK_FALSE(verify_witness(phi, zero));
    IsotropyWitness tampered = *a;
    for (auto& coordinate : tampered.coordinates) {
        if (!coordinate.empty()) {
            coordinate.front().re += 1;
            break;
        }
    }
    CHECK(verify_witness(phi, tampered) == evaluates_to_zero(phi, tampered));
}
