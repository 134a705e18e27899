#pragma once

/**
 * @file witt_ideal.hpp
 * @brief Pfister-form enumeration and searches for phi = 2^r x <<a1,...,an>>.
 *
 * Candidates are slot multisets a1 <= ... <= an (ordered by the square-class bit
 * vector), visited lexicographically. The first witness found is returned, so
 * results do not depend on scheduling.
 */

#include <cstdint>
#include <cstdlib>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wittlab/errors.hpp"
#include "wittlab/field_tower.hpp"
#include "wittlab/quadform.hpp"

namespace wittlab {

inline constexpr std::uint64_t kDefaultBudget = std::uint64_t{1} << 20;

/// Default search budget, overridden by the WITTLAB_BUDGET environment variable.
inline std::uint64_t default_budget() {
    if (const char* env = std::getenv("WITTLAB_BUDGET"); env != nullptr && *env != '\0') {
        char* end = nullptr;
        const unsigned long long value = std::strtoull(env, &end, 10);
        if (end != nullptr && *end == '\0' && value > 0) return value;
    }
    return kDefaultBudget;
}

/// Number of multisets of size k drawn from n elements, saturating at UINT64_MAX.
inline std::uint64_t multiset_count(std::uint64_t n, std::uint64_t k) {
    if (k == 0) return 1;
    if (n == 0) return 0;
    // C(n + k - 1, k) computed incrementally; each step stays exact.
    unsigned __int128 result = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        result = result * (n - 1 + i) / i;
        if (result > UINT64_MAX) return UINT64_MAX;
    }
    return static_cast<std::uint64_t>(result);
}

/**
 * Restartable stream over n-fold Pfister forms of a tower, one per slot multiset.
 */
class PfisterStream {
public:
    PfisterStream(FieldTower field, unsigned fold, std::uint64_t budget = default_budget())
        : field_(std::move(field)), slots_(fold, SquareClass(0)) {
        const std::uint64_t count = multiset_count(field_.class_count(), fold);
        if (count > budget) {
            throw BudgetExceeded(std::to_string(count) + " Pfister candidates exceed the budget of " + std::to_string(budget));
        }
    }

    /// Current slots; valid until the next call to advance().
    [[nodiscard]] std::span<const SquareClass> slots() const noexcept { return slots_; }
    [[nodiscard]] bool done() const noexcept { return done_; }
    [[nodiscard]] QuadForm form() const { return pfister(field_, slots_); }

    void advance() {
        const std::uint64_t limit = field_.class_count();
        std::size_t i = slots_.size();
        while (i > 0) {
            --i;
            if (slots_[i].bits + 1 < limit) {
                const SquareClass next(slots_[i].bits + 1);
                for (std::size_t k = i; k < slots_.size(); ++k) slots_[k] = next;
                return;
            }
        }
        done_ = true;
    }

    std::optional<QuadForm> next() {
        if (done_) return std::nullopt;
        QuadForm out = form();
        advance();
        return out;
    }

private:
    FieldTower field_;
    std::vector<SquareClass> slots_;
    bool done_ = false;
};

inline std::vector<QuadForm> enumerate_pfister(const FieldTower& field, unsigned fold, std::uint64_t budget = default_budget()) {
    std::vector<QuadForm> out;
    PfisterStream stream(field, fold, budget);
    while (auto form = stream.next()) out.push_back(std::move(*form));
    return out;
}

/// Certificate that phi = 2^scale_power x <<slots>>.
struct PfisterWitness {
    unsigned fold = 0;
    std::vector<SquareClass> slots;
    unsigned scale_power = 0;

    [[nodiscard]] QuadForm pfister_form(const FieldTower& field) const { return pfister(field, slots); }
    [[nodiscard]] QuadForm claimed_form(const FieldTower& field) const {
        return multiple(std::size_t{1} << scale_power, pfister_form(field));
    }
};

inline bool revalidate(const QuadForm& phi, const PfisterWitness& witness) {
    return witness.slots.size() == witness.fold && is_isometric(phi, witness.claimed_form(phi.field()));
}

struct DecompositionResult {
    std::optional<PfisterWitness> witness;  ///< empty means every candidate was refuted
    std::uint64_t candidates_tested = 0;

    [[nodiscard]] bool exhausted_none() const noexcept { return !witness.has_value(); }
};

/**
 * Searches for an n-fold Pfister form pi with phi = 2^r x pi, slots ranging over all
 * square classes. An empty result refutes only this single-Pfister shape.
 */
inline DecompositionResult decompose_as_power_multiple(const QuadForm& phi, unsigned r, unsigned n,
                                                      std::uint64_t budget = default_budget()) {
    if (r + n >= 40 || phi.dim() != (std::size_t{1} << (r + n))) {
        throw DimensionMismatch("form of dimension " + std::to_string(phi.dim()) + " cannot be 2^" + std::to_string(r) +
                                " x an " + std::to_string(n) + "-fold Pfister form");
    }
    DecompositionResult result;
    PfisterStream stream(phi.field(), n, budget);
    const std::size_t copies = std::size_t{1} << r;
    for (; !stream.done(); stream.advance()) {
        ++result.candidates_tested;
        if (is_isometric(phi, multiple(copies, stream.form()))) {
            const auto slots = stream.slots();
            result.witness = PfisterWitness{n, std::vector<SquareClass>(slots.begin(), slots.end()), r};
            break;
        }
    }
    return result;
}

/**
 * Given a Pfister form rho, finds pi (fold-fold) with 2^(r-1) x rho = 2^r x pi.
 * r = 2 is the shape 2 x rho = 4 x psi, r = 3 the shape 4 x psi = 8 x theta.
 * Throws WitnessNotFound if the exhaustive search comes back empty.
 */
inline PfisterWitness two_power_pfister_divisibility_check(const QuadForm& rho, unsigned r, unsigned fold,
                                                           std::uint64_t budget = default_budget()) {
    if (r == 0) throw InvalidArgument("scale power must be at least 1");
    const QuadForm phi = multiple(std::size_t{1} << (r - 1), rho);
    DecompositionResult result = decompose_as_power_multiple(phi, r, fold, budget);
    if (!result.witness) {
        throw WitnessNotFound("no " + std::to_string(fold) + "-fold Pfister form pi with " +
                              std::to_string(std::size_t{1} << (r - 1)) + " x rho = " + std::to_string(std::size_t{1} << r) +
                              " x pi for rho = " + render(rho));
    }
    return *result.witness;
}

}  // namespace wittlab
