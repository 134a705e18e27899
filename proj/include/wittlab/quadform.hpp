#pragma once

/**
 * @file quadform.hpp
 * @brief Diagonal quadratic forms over a FieldTower and their Witt theory.
 *
 * A form is a list of square classes <a1,...,an>. The anisotropic part is computed
 * by Springer's theorem: over K = k((t)), write phi = phi_0 _|_ t*phi_1 with unit
 * entries; then an(phi) = an(phi_0) _|_ t*an(phi_1), recursing down to the base.
 * Witt equivalence is hyperbolicity of phi _|_ -psi; no canonical diagonal
 * representative is ever stored.
 */

#include <cstdint>
#include <initializer_list>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wittlab/errors.hpp"
#include "wittlab/field_tower.hpp"

namespace wittlab {

class QuadForm {
public:
    explicit QuadForm(FieldTower field) : field_(std::move(field)) {}

    QuadForm(FieldTower field, std::vector<SquareClass> entries) : field_(std::move(field)), entries_(std::move(entries)) {
        for (const SquareClass& e : entries_) {
            if (!field_.contains(e)) throw MixedFields();
        }
    }

    [[nodiscard]] const FieldTower& field() const noexcept { return field_; }
    [[nodiscard]] const std::vector<SquareClass>& entries() const noexcept { return entries_; }
    [[nodiscard]] std::size_t dim() const noexcept { return entries_.size(); }

    /// Exact entry-list equality (order-sensitive); use is_isometric for the mathematical notion.
    friend bool operator==(const QuadForm& a, const QuadForm& b) {
        return a.field_ == b.field_ && a.entries_ == b.entries_;
    }

private:
    FieldTower field_;
    std::vector<SquareClass> entries_;
};

struct WittDecomposition {
    std::size_t witt_index = 0;
    QuadForm anisotropic_part;
};

namespace detail {

inline void require_same_field(const QuadForm& a, const QuadForm& b) {
    if (!(a.field() == b.field())) throw MixedFields();
}

/// Anisotropic part of the base-field form with the given entries (all bits < base generators).
inline std::vector<SquareClass> base_anisotropic(const BaseField& base, std::span<const SquareClass> entries) {
    std::vector<SquareClass> out;
    switch (base.kind()) {
        case BaseKind::QuadClosed:
            if (entries.size() % 2 == 1) out.emplace_back(0);
            return out;
        case BaseKind::RealClosed: {
            std::size_t negative = 0;
            for (SquareClass e : entries) negative += e.bits & 1U;
            const std::size_t positive = entries.size() - negative;
            if (positive >= negative) {
                out.assign(positive - negative, SquareClass(0));
            } else {
                out.assign(negative - positive, SquareClass(1));
            }
            return out;
        }
        case BaseKind::FiniteOdd: {
            // Over Fq a form is determined by dimension and determinant; an <= 2.
            const std::uint64_t minus_one = base.minus_one_is_generator() ? 1U : 0U;
            std::uint64_t det = 0;
            for (SquareClass e : entries) det ^= e.bits & 1U;
            const std::size_t planes = entries.size() / 2;
            const std::uint64_t signed_det = det ^ ((planes % 2 == 1) ? minus_one : 0U);
            if (entries.size() % 2 == 1) {
                out.emplace_back(signed_det);
            } else if (signed_det != 0) {
                out.emplace_back(0);
                out.emplace_back(minus_one ^ 1U);
            }
            return out;
        }
    }
    return out;
}

/// Anisotropic part of a form whose entries only use bits below `bit_limit`.
inline std::vector<SquareClass> anisotropic_entries(const BaseField& base, int base_generators, int bit_limit,
                                                    std::span<const SquareClass> entries) {
    if (bit_limit <= base_generators || entries.empty()) {
        return base_anisotropic(base, entries);
    }
    const int top = bit_limit - 1;
    const std::uint64_t top_mask = std::uint64_t{1} << top;
    std::vector<SquareClass> unit;
    std::vector<SquareClass> ramified;
    for (SquareClass e : entries) {
        if ((e.bits & top_mask) != 0) {
            ramified.emplace_back(e.bits & ~top_mask);
        } else {
            unit.push_back(e);
        }
    }
    std::vector<SquareClass> out = anisotropic_entries(base, base_generators, top, unit);
    for (SquareClass e : anisotropic_entries(base, base_generators, top, ramified)) {
        out.emplace_back(e.bits | top_mask);
    }
    return out;
}

inline std::size_t anisotropic_dim(const QuadForm& phi) {
    const FieldTower& f = phi.field();
    return anisotropic_entries(f.base(), f.base_generators(), f.generator_count(), phi.entries()).size();
}

}  // namespace detail

inline QuadForm diag(const FieldTower& field, std::vector<SquareClass> entries) {
    return QuadForm(field, std::move(entries));
}

/// m copies of the hyperbolic plane <1,-1>.
inline QuadForm hyperbolic(const FieldTower& field, std::size_t planes) {
    std::vector<SquareClass> entries;
    entries.reserve(2 * planes);
    for (std::size_t i = 0; i < planes; ++i) {
        entries.emplace_back(0);
        entries.push_back(field.minus_one());
    }
    return QuadForm(field, std::move(entries));
}

inline QuadForm orth_sum(const QuadForm& phi, const QuadForm& psi) {
    detail::require_same_field(phi, psi);
    std::vector<SquareClass> entries = phi.entries();
    entries.insert(entries.end(), psi.entries().begin(), psi.entries().end());
    return QuadForm(phi.field(), std::move(entries));
}

inline QuadForm scale(SquareClass a, const QuadForm& phi) {
    if (!phi.field().contains(a)) throw MixedFields();
    std::vector<SquareClass> entries;
    entries.reserve(phi.dim());
    for (SquareClass e : phi.entries()) entries.push_back(a * e);
    return QuadForm(phi.field(), std::move(entries));
}

/// -phi, i.e. phi scaled by the class of -1.
inline QuadForm negate(const QuadForm& phi) { return scale(phi.field().minus_one(), phi); }

inline QuadForm tensor(const QuadForm& phi, const QuadForm& psi) {
    detail::require_same_field(phi, psi);
    std::vector<SquareClass> entries;
    entries.reserve(phi.dim() * psi.dim());
    for (SquareClass b : psi.entries()) {
        for (SquareClass a : phi.entries()) entries.push_back(a * b);
    }
    return QuadForm(phi.field(), std::move(entries));
}

/// m x phi, the m-fold orthogonal sum. m = 0 is rejected.
inline QuadForm multiple(std::size_t m, const QuadForm& phi) {
    if (m == 0) throw InvalidArgument("multiple: m must be positive; use diag(F, {}) for the zero form");
    std::vector<SquareClass> entries;
    entries.reserve(m * phi.dim());
    for (std::size_t i = 0; i < m; ++i) entries.insert(entries.end(), phi.entries().begin(), phi.entries().end());
    return QuadForm(phi.field(), std::move(entries));
}

/// <<a1,...,an>> = <1,-a1> (x) ... (x) <1,-an>.
inline QuadForm pfister(const FieldTower& field, std::span<const SquareClass> slots) {
    const SquareClass minus_one = field.minus_one();
    std::vector<SquareClass> entries{SquareClass(0)};
    entries.reserve(std::size_t{1} << slots.size());
    for (SquareClass a : slots) {
        if (!field.contains(a)) throw MixedFields();
        const std::size_t half = entries.size();
        for (std::size_t i = 0; i < half; ++i) entries.push_back(entries[i] * a * minus_one);
    }
    return QuadForm(field, std::move(entries));
}

inline QuadForm pfister(const FieldTower& field, std::initializer_list<SquareClass> slots) {
    return pfister(field, std::span<const SquareClass>(slots.begin(), slots.size()));
}

struct ResidueForms {
    QuadForm unit;
    QuadForm ramified;
};

/// First and second residue forms with respect to the top variable, over the lower tower.
inline ResidueForms residue_split(const QuadForm& phi) {
    const FieldTower& field = phi.field();
    if (field.depth() == 0) throw BaseFieldHasNoVariables();
    const FieldTower lower = field.lower();
    const std::uint64_t top_mask = std::uint64_t{1} << field.top_bit();
    std::vector<SquareClass> unit;
    std::vector<SquareClass> ramified;
    for (SquareClass e : phi.entries()) {
        if ((e.bits & top_mask) != 0) {
            ramified.emplace_back(e.bits & ~top_mask);
        } else {
            unit.push_back(e);
        }
    }
    return {QuadForm(lower, std::move(unit)), QuadForm(lower, std::move(ramified))};
}

inline WittDecomposition witt_decompose(const QuadForm& phi) {
    const FieldTower& f = phi.field();
    auto an = detail::anisotropic_entries(f.base(), f.base_generators(), f.generator_count(), phi.entries());
    const std::size_t index = (phi.dim() - an.size()) / 2;
    return {index, QuadForm(f, std::move(an))};
}

inline std::size_t witt_index(const QuadForm& phi) { return (phi.dim() - detail::anisotropic_dim(phi)) / 2; }
inline bool is_isotropic(const QuadForm& phi) { return witt_index(phi) >= 1; }
inline bool is_anisotropic(const QuadForm& phi) { return !is_isotropic(phi); }
inline bool is_hyperbolic(const QuadForm& phi) { return detail::anisotropic_dim(phi) == 0; }

/// Whether phi represents a. Isotropic forms are universal; otherwise phi _|_ <-a> must be isotropic.
inline bool represents(const QuadForm& phi, SquareClass a) {
    if (is_isotropic(phi)) return true;
    return is_isotropic(orth_sum(phi, QuadForm(phi.field(), {a * phi.field().minus_one()})));
}

inline bool witt_equivalent(const QuadForm& phi, const QuadForm& psi) {
    detail::require_same_field(phi, psi);
    return is_hyperbolic(orth_sum(phi, negate(psi)));
}

inline bool is_isometric(const QuadForm& phi, const QuadForm& psi) {
    return phi.dim() == psi.dim() && witt_equivalent(phi, psi);
}

/// ⟨1,1,-a⟩ isotropic.
inline bool is_sum_of_two_squares(const FieldTower& field, SquareClass a) {
    if (!field.contains(a)) throw MixedFields();
    return is_isotropic(QuadForm(field, {SquareClass(0), SquareClass(0), a * field.minus_one()}));
}

inline int signature(const QuadForm& phi, const Ordering& ordering) {
    if (!phi.field().is_real()) throw NoOrderings();
    int total = 0;
    for (SquareClass e : phi.entries()) total += ordering.sign(e);
    return total;
}

inline std::map<Ordering, int> total_signature(const QuadForm& phi) {
    if (!phi.field().is_real()) throw NoOrderings();
    std::map<Ordering, int> out;
    for (const Ordering& o : orderings(phi.field())) out.emplace(o, signature(phi, o));
    return out;
}

/// Torsion in the Witt ring: all signatures vanish (vacuous for nonreal towers).
inline bool is_torsion(const QuadForm& phi) {
    if (!phi.field().is_real()) return true;
    for (const Ordering& o : orderings(phi.field())) {
        if (signature(phi, o) != 0) return false;
    }
    return true;
}

/// "<a,b,c>" with entries as signed monomials.
inline std::string render(const QuadForm& phi) {
    std::string out = "<";
    for (std::size_t i = 0; i < phi.dim(); ++i) {
        if (i != 0) out += ",";
        out += phi.field().render(phi.entries()[i]);
    }
    return out + ">";
}

/// "<<a,b>>" for Pfister slots.
inline std::string render_pfister(const FieldTower& field, std::span<const SquareClass> slots) {
    std::string out = "<<";
    for (std::size_t i = 0; i < slots.size(); ++i) {
        if (i != 0) out += ",";
        out += field.render(slots[i]);
    }
    return out + ">>";
}

}  // namespace wittlab
