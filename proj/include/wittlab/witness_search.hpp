#pragma once

/**
 * @file witness_search.hpp
 * @brief Randomized search for explicit isotropic vectors.
 *
 * A one-sided oracle for isotropy that shares nothing with the residue recursion:
 * every square class gets a concrete representative c * t^e (c a base constant,
 * e in {0,1}^n), candidate vectors are truncated Laurent polynomials, and the value
 * sum_i rep_i * v_i^2 is expanded exactly. A zero value with v != 0 proves isotropy.
 *
 * Coefficient rings: Z/p for a prime finite base, Z for a real closed base, and
 * Z[i] for a quadratically closed base (x^2 + y^2 needs sqrt(-1)).
 */

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "wittlab/errors.hpp"
#include "wittlab/field_tower.hpp"
#include "wittlab/quadform.hpp"
#include "wittlab/random.hpp"

namespace wittlab {

/// One monomial re+im*i times t1^e1 ... tn^en. For finite bases `im` is always 0.
struct LaurentTerm {
    std::int64_t re = 0;
    std::int64_t im = 0;
    std::vector<unsigned> exponents;

    friend bool operator==(const LaurentTerm&, const LaurentTerm&) = default;
};

using LaurentPolynomial = std::vector<LaurentTerm>;

struct IsotropyWitness {
    std::vector<LaurentPolynomial> coordinates;
};

struct WitnessSearchOptions {
    unsigned truncation_depth = 4;
    std::uint64_t trials = 10000;
    std::uint64_t seed = 0;
};

namespace detail {

// Exponents are packed 8 bits per variable.
inline constexpr int kExponentBits = 8;
inline constexpr int kMaxSearchVariables = 8;

struct ModP {
    std::int64_t p;
    using Value = std::int64_t;
    [[nodiscard]] Value zero() const { return 0; }
    [[nodiscard]] Value add(Value a, Value b) const { return (a + b) % p; }
    [[nodiscard]] Value mul(Value a, Value b) const { return (a * b) % p; }
    [[nodiscard]] bool is_zero(Value a) const { return a % p == 0; }
    [[nodiscard]] Value from(std::int64_t re, std::int64_t /*im*/) const { return ((re % p) + p) % p; }
    Value random_nonzero(Sampler& s) const { return s.between(1, p - 1); }
    [[nodiscard]] std::pair<std::int64_t, std::int64_t> parts(Value a) const { return {a, 0}; }
};

struct Integers {
    using Value = std::int64_t;
    [[nodiscard]] Value zero() const { return 0; }
    [[nodiscard]] Value add(Value a, Value b) const { return a + b; }
    [[nodiscard]] Value mul(Value a, Value b) const { return a * b; }
    [[nodiscard]] bool is_zero(Value a) const { return a == 0; }
    [[nodiscard]] Value from(std::int64_t re, std::int64_t /*im*/) const { return re; }
    Value random_nonzero(Sampler& s) const {
        const std::int64_t v = s.between(1, 3);
        return s.coin() ? v : -v;
    }
    [[nodiscard]] std::pair<std::int64_t, std::int64_t> parts(Value a) const { return {a, 0}; }
};

struct GaussianIntegers {
    using Value = std::pair<std::int64_t, std::int64_t>;
    [[nodiscard]] Value zero() const { return {0, 0}; }
    [[nodiscard]] Value add(Value a, Value b) const { return {a.first + b.first, a.second + b.second}; }
    [[nodiscard]] Value mul(Value a, Value b) const {
        return {a.first * b.first - a.second * b.second, a.first * b.second + a.second * b.first};
    }
    [[nodiscard]] bool is_zero(Value a) const { return a.first == 0 && a.second == 0; }
    [[nodiscard]] Value from(std::int64_t re, std::int64_t im) const { return {re, im}; }
    Value random_nonzero(Sampler& s) const {
        Value v{0, 0};
        while (is_zero(v)) v = {s.between(-2, 2), s.between(-2, 2)};
        return v;
    }
    [[nodiscard]] std::pair<std::int64_t, std::int64_t> parts(Value a) const { return a; }
};

template <class Ring>
using Poly = std::map<std::uint64_t, typename Ring::Value>;

template <class Ring>
void add_term(const Ring& ring, Poly<Ring>& poly, std::uint64_t monomial, typename Ring::Value c) {
    auto [it, inserted] = poly.try_emplace(monomial, c);
    if (!inserted) {
        it->second = ring.add(it->second, c);
    }
    if (ring.is_zero(it->second)) poly.erase(it);
}

template <class Ring>
Poly<Ring> multiply(const Ring& ring, const Poly<Ring>& a, const Poly<Ring>& b) {
    Poly<Ring> out;
    for (const auto& [ma, ca] : a) {
        for (const auto& [mb, cb] : b) add_term(ring, out, ma + mb, ring.mul(ca, cb));
    }
    return out;
}

/// Representatives c * t^e of each entry, as single-term polynomials.
template <class Ring>
std::vector<Poly<Ring>> representatives(const Ring& ring, const QuadForm& phi, std::int64_t base_generator) {
    const FieldTower& field = phi.field();
    std::vector<Poly<Ring>> reps;
    for (SquareClass e : phi.entries()) {
        std::uint64_t monomial = 0;
        for (int j = 0; j < field.depth(); ++j) {
            if (e.test(field.variable_bit(j))) monomial |= std::uint64_t{1} << (kExponentBits * j);
        }
        const bool has_base = field.base_generators() == 1 && e.test(0);
        Poly<Ring> rep;
        rep.emplace(monomial, ring.from(has_base ? base_generator : 1, 0));
        reps.push_back(std::move(rep));
    }
    return reps;
}

template <class Ring>
bool evaluates_to_zero(const Ring& ring, const std::vector<Poly<Ring>>& reps, const std::vector<Poly<Ring>>& v) {
    Poly<Ring> total;
    for (std::size_t i = 0; i < reps.size(); ++i) {
        if (v[i].empty()) continue;
        for (const auto& [m, c] : multiply(ring, reps[i], multiply(ring, v[i], v[i]))) add_term(ring, total, m, c);
    }
    return total.empty();
}

template <class Ring>
IsotropyWitness to_witness(const Ring& ring, const std::vector<Poly<Ring>>& v, int depth) {
    IsotropyWitness w;
    for (const auto& poly : v) {
        LaurentPolynomial coordinate;
        for (const auto& [m, c] : poly) {
            LaurentTerm term;
            std::tie(term.re, term.im) = ring.parts(c);
            for (int j = 0; j < depth; ++j) term.exponents.push_back(static_cast<unsigned>((m >> (kExponentBits * j)) & 0xFFU));
            coordinate.push_back(std::move(term));
        }
        w.coordinates.push_back(std::move(coordinate));
    }
    return w;
}

template <class Ring>
std::optional<IsotropyWitness> search_with(const Ring& ring, const QuadForm& phi, std::int64_t base_generator,
                                           const WitnessSearchOptions& options) {
    const std::size_t dim = phi.dim();
    if (dim == 0) return std::nullopt;
    const int depth = phi.field().depth();
    const auto reps = representatives(ring, phi, base_generator);
    std::uint64_t budget = options.trials;

    // Sweep 0/1 constant vectors first; these settle most small isotropic forms.
    if (dim <= 12) {
        for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << dim) && budget > 0; ++mask, --budget) {
            std::vector<Poly<Ring>> v(dim);
            for (std::size_t i = 0; i < dim; ++i) {
                if (((mask >> i) & 1U) != 0) v[i].emplace(0, ring.from(1, 0));
            }
            if (evaluates_to_zero(ring, reps, v)) return to_witness(ring, v, depth);
        }
    }

    Sampler sampler(options.seed);
    const unsigned max_degree = options.truncation_depth == 0 ? 0 : options.truncation_depth - 1;
    for (; budget > 0; --budget) {
        const unsigned degree = sampler.coin() ? 0 : static_cast<unsigned>(sampler.below(max_degree + 1));
        std::vector<Poly<Ring>> v(dim);
        bool nonzero = false;
        for (std::size_t i = 0; i < dim; ++i) {
            if (sampler.coin()) continue;
            const std::uint64_t terms = 1 + sampler.below(degree + 1);
            for (std::uint64_t k = 0; k < terms; ++k) {
                std::uint64_t monomial = 0;
                for (int j = 0; j < depth; ++j) {
                    monomial |= sampler.below(degree + 1) << (kExponentBits * j);
                }
                add_term(ring, v[i], monomial, ring.random_nonzero(sampler));
            }
            nonzero = nonzero || !v[i].empty();
        }
        if (nonzero && evaluates_to_zero(ring, reps, v)) return to_witness(ring, v, depth);
    }
    return std::nullopt;
}

inline std::int64_t smallest_nonresidue(std::int64_t p) {
    for (std::int64_t a = 2; a < p; ++a) {
        if (pow_mod(static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(p - 1) / 2, static_cast<std::uint64_t>(p)) != 1) {
            return a;
        }
    }
    return 1;
}

inline void check_search_support(const FieldTower& field) {
    if (field.base().kind() == BaseKind::FiniteOdd && !field.base().is_prime_field()) {
        throw UnsupportedBase("witness search needs a prime finite base, got " + field.base().name());
    }
    if (field.base().kind() == BaseKind::FiniteOdd && field.base().order() > (std::uint64_t{1} << 30)) {
        throw UnsupportedBase("witness search: prime too large");
    }
    if (field.depth() > kMaxSearchVariables) throw UnsupportedBase("witness search supports at most 8 variables");
}

template <class Ring>
bool verify_with(const Ring& ring, const QuadForm& phi, const IsotropyWitness& w, std::int64_t base_generator) {
    if (w.coordinates.size() != phi.dim()) return false;
    const int depth = phi.field().depth();
    std::vector<Poly<Ring>> v(phi.dim());
    bool nonzero = false;
    for (std::size_t i = 0; i < phi.dim(); ++i) {
        for (const LaurentTerm& term : w.coordinates[i]) {
            if (static_cast<int>(term.exponents.size()) != depth) return false;
            std::uint64_t monomial = 0;
            for (int j = 0; j < depth; ++j) {
                if (term.exponents[static_cast<std::size_t>(j)] >= 64) return false;
                monomial |= std::uint64_t{term.exponents[static_cast<std::size_t>(j)]} << (kExponentBits * j);
            }
            add_term(ring, v[i], monomial, ring.from(term.re, term.im));
        }
        nonzero = nonzero || !v[i].empty();
    }
    return nonzero && evaluates_to_zero(ring, representatives(ring, phi, base_generator), v);
}

}  // namespace detail

/**
 * Looks for a nonzero vector v of truncated Laurent polynomials with phi(v) = 0.
 * A returned witness proves isotropy; std::nullopt proves nothing.
 */
inline std::optional<IsotropyWitness> isotropy_witness_search(const QuadForm& phi, const WitnessSearchOptions& options = {}) {
    const FieldTower& field = phi.field();
    detail::check_search_support(field);
    if (options.truncation_depth > 32) throw InvalidArgument("truncation depth must be at most 32");
    switch (field.base().kind()) {
        case BaseKind::FiniteOdd: {
            const auto p = static_cast<std::int64_t>(field.base().order());
            return detail::search_with(detail::ModP{p}, phi, detail::smallest_nonresidue(p), options);
        }
        case BaseKind::RealClosed:
            return detail::search_with(detail::Integers{}, phi, -1, options);
        case BaseKind::QuadClosed:
            return detail::search_with(detail::GaussianIntegers{}, phi, 1, options);
    }
    return std::nullopt;
}

/// Recomputes phi(v) exactly for a witness; true iff v is nonzero and isotropic.
inline bool verify_witness(const QuadForm& phi, const IsotropyWitness& witness) {
    const FieldTower& field = phi.field();
    detail::check_search_support(field);
    switch (field.base().kind()) {
        case BaseKind::FiniteOdd: {
            const auto p = static_cast<std::int64_t>(field.base().order());
            return detail::verify_with(detail::ModP{p}, phi, witness, detail::smallest_nonresidue(p));
        }
        case BaseKind::RealClosed:
            return detail::verify_with(detail::Integers{}, phi, witness, -1);
        case BaseKind::QuadClosed:
            return detail::verify_with(detail::GaussianIntegers{}, phi, witness, 1);
    }
    return false;
}

inline std::string render(const FieldTower& field, const IsotropyWitness& witness) {
    std::string out = "(";
    for (std::size_t i = 0; i < witness.coordinates.size(); ++i) {
        if (i != 0) out += ", ";
        const LaurentPolynomial& poly = witness.coordinates[i];
        if (poly.empty()) {
            out += "0";
            continue;
        }
        for (std::size_t k = 0; k < poly.size(); ++k) {
            const LaurentTerm& term = poly[k];
            if (k != 0) out += " + ";
            if (term.im == 0) {
                out += std::to_string(term.re);
            } else {
                out += "(" + std::to_string(term.re) + (term.im < 0 ? "-" : "+") + std::to_string(term.im < 0 ? -term.im : term.im) + "i)";
            }
            for (int j = 0; j < field.depth(); ++j) {
                const unsigned e = term.exponents[static_cast<std::size_t>(j)];
                if (e == 0) continue;
                out += "*" + field.variables()[static_cast<std::size_t>(j)];
                if (e > 1) out += "^" + std::to_string(e);
            }
        }
    }
    return out + ")";
}

}  // namespace wittlab
