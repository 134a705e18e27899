#pragma once

// Generators and brute-force oracles shared by the unit tests. Nothing here
// calls into the residue recursion; the oracles work on concrete field elements.

#include <cstdint>
#include <cstdlib>
#include <map>
#include <string>
#include <vector>

#include "wittlab/field_tower.hpp"
#include "wittlab/quadform.hpp"
#include "wittlab/random.hpp"

namespace wittlab::testing {

inline std::vector<std::string> tower_specs() {
    return {"C", "R", "F3", "F5", "F9",
            "C((t1))", "R((t1))", "F3((t))", "F5((t))",
            "C((t1))((t2))", "R((t1))((t2))", "F3((s))((t))", "F7((t1))((t2))",
            "C((t1))((t2))((t3))", "R((t1))((t2))((t3))", "F5((a))((b))((c))",
            "C((t1))((t2))((t3))((t4))", "R((t1))((t2))((t3))((t4))"};
}

inline SquareClass random_class(const FieldTower& f, Sampler& s) { return SquareClass(s.below(f.class_count())); }

inline QuadForm random_form(const FieldTower& f, Sampler& s, std::size_t max_dim) {
    const std::size_t dim = s.below(max_dim + 1);
    std::vector<SquareClass> entries;
    for (std::size_t i = 0; i < dim; ++i) entries.push_back(random_class(f, s));
    return QuadForm(f, std::move(entries));
}

inline std::vector<SquareClass> random_slots(const FieldTower& f, Sampler& s, std::size_t count) {
    std::vector<SquareClass> out;
    for (std::size_t i = 0; i < count; ++i) out.push_back(random_class(f, s));
    return out;
}

/// Squares in Z/p by direct enumeration.
inline std::vector<bool> squares_mod(std::uint64_t p) {
    std::vector<bool> sq(p, false);
    for (std::uint64_t x = 0; x < p; ++x) sq[(x * x) % p] = true;
    return sq;
}

/// Whether sum c_i x_i^2 = 0 has a nonzero solution over Z/p, by exhaustion.
inline bool isotropic_mod_p_bruteforce(const std::vector<std::int64_t>& coefficients, std::int64_t p) {
    const std::size_t n = coefficients.size();
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < n; ++i) total *= static_cast<std::uint64_t>(p);
    for (std::uint64_t code = 1; code < total; ++code) {
        std::uint64_t c = code;
        std::int64_t value = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const auto x = static_cast<std::int64_t>(c % static_cast<std::uint64_t>(p));
            c /= static_cast<std::uint64_t>(p);
            value = (value + coefficients[i] * x * x) % p;
        }
        if (value == 0) return true;
    }
    return false;
}

/// Smallest nonsquare mod p, found by enumeration.
inline std::int64_t nonsquare_mod(std::int64_t p) {
    const auto sq = squares_mod(static_cast<std::uint64_t>(p));
    for (std::int64_t a = 1; a < p; ++a) {
        if (!sq[static_cast<std::size_t>(a)]) return a;
    }
    return 0;
}

/// Number of multisets of size k from n items, by direct enumeration of sorted tuples.
inline std::uint64_t count_sorted_tuples(std::uint64_t n, unsigned k) {
    std::uint64_t count = 0;
    std::vector<std::uint64_t> tuple(k, 0);
    while (true) {
        ++count;
        int i = static_cast<int>(k) - 1;
        while (i >= 0 && tuple[static_cast<std::size_t>(i)] + 1 >= n) --i;
        if (i < 0) break;
        const std::uint64_t next = tuple[static_cast<std::size_t>(i)] + 1;
        for (auto j = static_cast<std::size_t>(i); j < k; ++j) tuple[j] = next;
    }
    return count;
}

/**
 * Anisotropic dimension by counting in the Witt ring, which for these towers is a
 * group ring over W(base) on the classes of variable monomials: Z over R, F2[u]
 * over C and F_q with q = 1 mod 4, Z/4 over F_q with q = 3 mod 4.
 */
inline std::size_t aniso_dim_by_counting(const QuadForm& phi) {
    const FieldTower& f = phi.field();
    const int shift = f.base_generators();
    std::map<std::uint64_t, std::int64_t> coeff;
    for (SquareClass e : phi.entries()) {
        const std::uint64_t monomial = e.bits >> shift;
        const bool base_bit = shift == 1 && (e.bits & 1U) != 0;
        switch (f.base().kind()) {
            case BaseKind::QuadClosed:
                coeff[monomial] ^= 1;
                break;
            case BaseKind::RealClosed:
                coeff[monomial] += base_bit ? -1 : 1;
                break;
            case BaseKind::FiniteOdd:
                if (f.base().minus_one_is_generator()) {
                    coeff[monomial] = (coeff[monomial] + (base_bit ? 3 : 1)) % 4;
                } else {
                    coeff[(monomial << 1) | (base_bit ? 1U : 0U)] ^= 1;
                }
                break;
        }
    }
    std::size_t dim = 0;
    for (const auto& [monomial, c] : coeff) {
        if (f.base().kind() == BaseKind::FiniteOdd && f.base().minus_one_is_generator()) {
            dim += static_cast<std::size_t>(c == 2 ? 2 : c % 2);
        } else {
            dim += static_cast<std::size_t>(std::llabs(c));
        }
    }
    return dim;
}

/// Integer representative of a base class over F_p: 1 or the smallest nonsquare.
inline std::int64_t representative_mod_p(SquareClass c, std::int64_t p) { return c.is_trivial() ? 1 : nonsquare_mod(p); }

}  // namespace wittlab::testing
