#pragma once

/**
 * @file brauer.hpp
 * @brief Quaternion symbols, 2-torsion Brauer classes, trace forms and index.
 *
 * A BrauerClass is an unreduced list of symbols (a,b), read as a sum in
 * k_2(F) = K_2(F)/2 = Br_2(F). The index is computed by peeling off the top
 * variable t of the tower:
 *
 *     alpha = alpha_0 + (beta, t)   with alpha_0 unramified,
 *     ind(alpha) = ind(alpha_0)                              if beta is a square,
 *                = 2 * ind(alpha_0 restricted to k(sqrt beta))  otherwise,
 *
 * where k is the residue tower. Over C-based towers an independent route via the
 * rank of the alternating matrix of {t_i, t_j} coefficients is provided.
 */

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wittlab/errors.hpp"
#include "wittlab/field_tower.hpp"
#include "wittlab/quadform.hpp"

namespace wittlab {

struct QuaternionSymbol {
    FieldTower field;
    SquareClass a;
    SquareClass b;

    QuaternionSymbol(FieldTower f, SquareClass a_, SquareClass b_) : field(std::move(f)), a(a_), b(b_) {
        if (!field.contains(a) || !field.contains(b)) throw MixedFields();
    }
};

using SymbolSlots = std::pair<SquareClass, SquareClass>;

class BrauerClass {
public:
    explicit BrauerClass(FieldTower field) : field_(std::move(field)) {}

    BrauerClass(FieldTower field, std::vector<SymbolSlots> symbols) : field_(std::move(field)), symbols_(std::move(symbols)) {
        for (const auto& [a, b] : symbols_) {
            if (!field_.contains(a) || !field_.contains(b)) throw MixedFields();
        }
    }

    /// The class of the tensor product of the given symbols.
    static BrauerClass of(const FieldTower& field, std::span<const QuaternionSymbol> symbols) {
        std::vector<SymbolSlots> slots;
        for (const auto& q : symbols) {
            if (!(q.field == field)) throw MixedFields();
            slots.emplace_back(q.a, q.b);
        }
        return BrauerClass(field, std::move(slots));
    }

    [[nodiscard]] const FieldTower& field() const noexcept { return field_; }
    [[nodiscard]] const std::vector<SymbolSlots>& symbols() const noexcept { return symbols_; }

    /// Sum in Br_2: concatenation of symbol lists.
    [[nodiscard]] BrauerClass plus(const BrauerClass& other) const {
        if (!(field_ == other.field_)) throw MixedFields();
        std::vector<SymbolSlots> s = symbols_;
        s.insert(s.end(), other.symbols_.begin(), other.symbols_.end());
        return BrauerClass(field_, std::move(s));
    }

    [[nodiscard]] std::vector<QuaternionSymbol> as_symbols() const {
        std::vector<QuaternionSymbol> out;
        for (const auto& [a, b] : symbols_) out.emplace_back(field_, a, b);
        return out;
    }

private:
    FieldTower field_;
    std::vector<SymbolSlots> symbols_;
};

inline std::string render(const BrauerClass& alpha) {
    if (alpha.symbols().empty()) return "0";
    std::string out;
    for (const auto& [a, b] : alpha.symbols()) {
        if (!out.empty()) out += "(x)";
        out += "(" + alpha.field().render(a) + "," + alpha.field().render(b) + ")";
    }
    return out;
}

/// N_Q = <<a,b>> = <1,-a,-b,ab>.
inline QuadForm norm_form(const QuaternionSymbol& q) {
    const SquareClass slots[] = {q.a, q.b};
    return pfister(q.field, slots);
}

/// T_Q = <2, 2a, 2b, -2ab>.
inline QuadForm trace_form_quaternion(const QuaternionSymbol& q) {
    const FieldTower& f = q.field;
    const SquareClass two = class_of_constant(f, 2);
    return QuadForm(f, {two, two * q.a, two * q.b, two * f.minus_one() * q.a * q.b});
}

/// Trace form of a tensor product of quaternion algebras: the tensor of the factors' trace forms.
inline QuadForm trace_form_tensor(const FieldTower& field, std::span<const QuaternionSymbol> symbols) {
    QuadForm out(field, {SquareClass(0)});
    for (const auto& q : symbols) {
        if (!(q.field == field)) throw MixedFields();
        out = tensor(out, trace_form_quaternion(q));
    }
    return out;
}

/**
 * Trace form x -> Trd(x^2) of A = (a1,b1) (x) ... (x) (am,bm), read off the
 * multiplication table of A.
 *
 * A has basis the words w = g_1^{e_1} ... g_{2m}^{e_{2m}} in generators i_k, j_k
 * (g_{2k-1} = i_k, g_{2k} = j_k) with i_k^2 = a_k, j_k^2 = b_k; i_k and j_k
 * anticommute, generators of different factors commute. Trd(w) = 0 for every
 * non-scalar word, so Trd(xy) is diagonal on this basis and the entry of w is
 * Trd(w^2) = deg(A) * (sign of reordering w*w) * prod g^2.
 */
inline QuadForm trace_form_structural(const FieldTower& field, std::span<const QuaternionSymbol> symbols) {
    const std::size_t m = symbols.size();
    if (m > 10) throw InvalidArgument("trace_form_structural: too many factors");
    std::vector<SquareClass> gen_square;
    for (const auto& q : symbols) {
        if (!(q.field == field)) throw MixedFields();
        gen_square.push_back(q.a);
        gen_square.push_back(q.b);
    }
    auto anticommute = [](std::size_t g, std::size_t h) { return g != h && g / 2 == h / 2; };

    // deg(A) = 2^m.
    SquareClass degree_class(0);
    for (std::size_t k = 0; k < m; ++k) degree_class *= class_of_constant(field, 2);

    std::vector<SquareClass> entries;
    const std::uint64_t words = std::uint64_t{1} << (2 * m);
    entries.reserve(words);
    for (std::uint64_t w = 0; w < words; ++w) {
        std::vector<std::size_t> letters;
        for (std::size_t g = 0; g < 2 * m; ++g) {
            if (((w >> g) & 1U) != 0) letters.push_back(g);
        }
        // (x_1...x_r)(x_1...x_r) = (-1)^N x_1^2 ... x_r^2 with N = #{p<q : x_p, x_q anticommute}.
        std::size_t swaps = 0;
        SquareClass value = degree_class;
        for (std::size_t p = 0; p < letters.size(); ++p) {
            value *= gen_square[letters[p]];
            for (std::size_t q = p + 1; q < letters.size(); ++q) {
                if (anticommute(letters[p], letters[q])) ++swaps;
            }
        }
        if (swaps % 2 == 1) value *= field.minus_one();
        entries.push_back(value);
    }
    return QuadForm(field, std::move(entries));
}

/// T_{M_2(A)} = T_{M_2(F)} (x) T_A, which is Witt equivalent to 2 x T_A; returns 2 x T_A.
inline QuadForm matrix_double_trace(const QuadForm& trace_form) { return multiple(2, trace_form); }

struct RamifiedDecomposition {
    BrauerClass unramified;  ///< alpha_0 over the residue tower
    SquareClass residue;     ///< beta over the residue tower
};

/**
 * Writes alpha = alpha_0 + (beta, t) for the top variable t, using bilinearity and
 * (t, t) = (-1, t). Both parts live over the tower with t removed.
 */
inline RamifiedDecomposition ramified_decompose(const BrauerClass& alpha) {
    const FieldTower& field = alpha.field();
    if (field.depth() == 0) throw BaseFieldHasNoVariables();
    const FieldTower lower = field.lower();
    const std::uint64_t top = std::uint64_t{1} << field.top_bit();
    const SquareClass minus_one = field.minus_one();

    std::vector<SymbolSlots> unramified;
    SquareClass beta(0);
    for (const auto& [a, b] : alpha.symbols()) {
        const bool ta = (a.bits & top) != 0;
        const bool tb = (b.bits & top) != 0;
        const SquareClass a0(a.bits & ~top);
        const SquareClass b0(b.bits & ~top);
        if (!a0.is_trivial() && !b0.is_trivial()) unramified.emplace_back(a0, b0);
        // (a0 t, b) = (a0, b) + (t, b0) + [tb](t, t); (t, b0) contributes b0 to beta.
        if (ta) beta *= b0;
        if (tb) beta *= a0;
        if (ta && tb) beta *= minus_one;
    }
    return {BrauerClass(lower, std::move(unramified)), beta};
}

namespace detail {

inline std::uint64_t base_index(const BrauerClass& alpha) {
    const BaseField& base = alpha.field().base();
    if (base.kind() != BaseKind::RealClosed) return 1;
    // Br_2(R) = {0, (-1,-1)}: the class is nontrivial iff an odd number of symbols are (-1,-1).
    std::size_t quaternion_count = 0;
    for (const auto& [a, b] : alpha.symbols()) {
        if (a.test(0) && b.test(0)) ++quaternion_count;
    }
    return quaternion_count % 2 == 1 ? 2 : 1;
}

}  // namespace detail

/// Index of a 2-torsion Brauer class (a power of 2).
inline std::uint64_t index(const BrauerClass& alpha) {
    if (alpha.field().depth() == 0) return detail::base_index(alpha);
    const RamifiedDecomposition parts = ramified_decompose(alpha);
    if (parts.residue.is_trivial()) return index(parts.unramified);

    const QuadraticExtension ext = adjoin_sqrt(parts.unramified.field(), parts.residue);
    std::vector<SymbolSlots> restricted;
    for (const auto& [a, b] : parts.unramified.symbols()) {
        const SquareClass ra = ext.class_map(a);
        const SquareClass rb = ext.class_map(b);
        if (!ra.is_trivial() && !rb.is_trivial()) restricted.emplace_back(ra, rb);
    }
    return 2 * index(BrauerClass(ext.field, std::move(restricted)));
}

inline std::uint64_t index(const FieldTower& field, std::span<const QuaternionSymbol> symbols) {
    return index(BrauerClass::of(field, symbols));
}

/// Whether the tensor product of m symbols (degree 2^m) is a division algebra.
inline bool is_division_tensor(const FieldTower& field, std::span<const QuaternionSymbol> symbols) {
    if (symbols.size() >= 63) throw InvalidArgument("too many symbols");
    return index(field, symbols) == (std::uint64_t{1} << symbols.size());
}

namespace detail {

/// Rank over GF(2) of a square matrix given as row bitmasks.
inline int gf2_rank(std::vector<std::uint64_t> rows) {
    int rank = 0;
    for (int bit = 63; bit >= 0; --bit) {
        const std::uint64_t mask = std::uint64_t{1} << bit;
        auto pivot = std::find_if(rows.begin() + rank, rows.end(), [mask](std::uint64_t r) { return (r & mask) != 0; });
        if (pivot == rows.end()) continue;
        std::iter_swap(rows.begin() + rank, pivot);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i != static_cast<std::size_t>(rank) && (rows[i] & mask) != 0) rows[i] ^= rows[static_cast<std::size_t>(rank)];
        }
        ++rank;
    }
    return rank;
}

}  // namespace detail

/**
 * Index over C((t1))...((tn)) from the alternating matrix M with M_ij the
 * coefficient of {t_i, t_j} after bilinear expansion: ind = 2^(rank M / 2).
 * Diagonal terms {t_i, t_i} = {-1, t_i} vanish because -1 is a square.
 */
inline std::uint64_t index_oracle_quadclosed(const BrauerClass& alpha) {
    const FieldTower& field = alpha.field();
    if (field.base().kind() != BaseKind::QuadClosed) throw UnsupportedBase("index oracle needs a quadratically closed base");
    const int n = field.depth();
    std::vector<std::uint64_t> rows(static_cast<std::size_t>(n), 0);
    for (const auto& [a, b] : alpha.symbols()) {
        for (int i = 0; i < n; ++i) {
            if (!a.test(i)) continue;
            for (int j = 0; j < n; ++j) {
                if (i == j || !b.test(j)) continue;
                rows[static_cast<std::size_t>(i)] ^= std::uint64_t{1} << j;
                rows[static_cast<std::size_t>(j)] ^= std::uint64_t{1} << i;
            }
        }
    }
    return std::uint64_t{1} << (detail::gf2_rank(rows) / 2);
}

/// The class sum_{i<j, bit set} {t_i, t_j} for a bitmask over the pairs (i,j), i<j, in lexicographic order.
inline BrauerClass class_from_pair_mask(const FieldTower& field, std::uint64_t mask) {
    std::vector<SymbolSlots> symbols;
    int pair = 0;
    for (int i = 0; i < field.depth(); ++i) {
        for (int j = i + 1; j < field.depth(); ++j, ++pair) {
            if (((mask >> pair) & 1U) != 0) symbols.emplace_back(field.variable(i), field.variable(j));
        }
    }
    return BrauerClass(field, std::move(symbols));
}

/// Brauer 2-torsion index lambda'(F) by enumerating all of Br_2 for C-based towers of depth <= 6.
inline unsigned lambda_prime_exhaustive(const FieldTower& field) {
    if (field.base().kind() != BaseKind::QuadClosed) {
        throw UnsupportedBase("exhaustive lambda' needs a quadratically closed base");
    }
    if (field.depth() > 6) throw UnsupportedBase("exhaustive lambda' is limited to depth 6");
    const int n = field.depth();
    const int pairs = n * (n - 1) / 2;
    unsigned best = 0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << pairs); ++mask) {
        const std::uint64_t ind = index(class_from_pair_mask(field, mask));
        best = std::max(best, static_cast<unsigned>(__builtin_ctzll(ind)));
    }
    return best;
}

/**
 * Known value of lambda' for R-based towers: lambda'(R) = 1 and
 * lambda'(R((t1))...((t_{2n-1}))) = n. Not computed; other shapes return nullopt.
 */
inline std::optional<unsigned> lambda_prime_documented(const FieldTower& field) {
    if (field.base().kind() != BaseKind::RealClosed) return std::nullopt;
    if (field.depth() == 0) return 1U;
    if (field.depth() % 2 == 1) return static_cast<unsigned>((field.depth() + 1) / 2);
    return std::nullopt;
}

}  // namespace wittlab
