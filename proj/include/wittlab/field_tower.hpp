#pragma once

/**
 * @file field_tower.hpp
 * @brief Iterated Laurent series fields k((t1))...((tn)) and their square classes.
 *
 * The base k is one of
 *  - a quadratically closed field (written "C"), one square class;
 *  - a real closed field ("R"), square classes {1, -1};
 *  - a finite field of odd order q ("Fq"), square classes {1, u} with u a fixed nonsquare.
 *
 * Over such a tower F, the group F* / F*^2 is an elementary abelian 2-group with
 * basis "base generator (if any), t1, ..., tn". A SquareClass is a bit vector over
 * that basis; multiplication of classes is XOR. Bit 0 holds the base generator when
 * the base has one, and variable t_j sits at bit (base_generators + j - 1).
 */

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wittlab/errors.hpp"

namespace wittlab {

enum class BaseKind { QuadClosed, RealClosed, FiniteOdd };

namespace detail {

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
    std::uint64_t result = 1 % m;
    base %= m;
    while (exp != 0) {
        if ((exp & 1U) != 0) result = mul_mod(result, base, m);
        base = mul_mod(base, base, m);
        exp >>= 1U;
    }
    return result;
}

/// Smallest prime factor of n >= 2.
inline std::uint64_t smallest_prime_factor(std::uint64_t n) {
    if (n % 2 == 0) return 2;
    for (std::uint64_t d = 3; d <= n / d; d += 2) {
        if (n % d == 0) return d;
    }
    return n;
}

inline int popcount(std::uint64_t x) { return __builtin_popcountll(x); }

}  // namespace detail

/// The ground field of a tower.
class BaseField {
public:
    static BaseField quad_closed() { return BaseField(BaseKind::QuadClosed, 0, 0, 0); }
    static BaseField real_closed() { return BaseField(BaseKind::RealClosed, 0, 0, 0); }

    /// Finite field with q elements; q must be an odd prime power.
    static BaseField finite(std::uint64_t q) {
        if (q < 3 || q % 2 == 0) {
            throw UnsupportedBase("finite base needs an odd prime power q >= 3, got " + std::to_string(q));
        }
        const std::uint64_t p = detail::smallest_prime_factor(q);
        std::uint64_t rest = q;
        unsigned exponent = 0;
        while (rest % p == 0) {
            rest /= p;
            ++exponent;
        }
        if (rest != 1) {
            throw UnsupportedBase("finite base order " + std::to_string(q) + " is not a prime power");
        }
        return BaseField(BaseKind::FiniteOdd, q, p, exponent);
    }

    [[nodiscard]] BaseKind kind() const noexcept { return kind_; }
    [[nodiscard]] std::uint64_t order() const noexcept { return q_; }
    [[nodiscard]] std::uint64_t characteristic() const noexcept { return p_; }
    [[nodiscard]] unsigned degree() const noexcept { return k_; }
    [[nodiscard]] bool is_prime_field() const noexcept { return kind_ == BaseKind::FiniteOdd && k_ == 1; }

    /// Number of square-class generators contributed by the base (0 or 1).
    [[nodiscard]] int generator_count() const noexcept { return kind_ == BaseKind::QuadClosed ? 0 : 1; }

    /// True iff -1 is a nonsquare in the base; its class is then the base generator.
    [[nodiscard]] bool minus_one_is_generator() const noexcept {
        return kind_ == BaseKind::RealClosed || (kind_ == BaseKind::FiniteOdd && q_ % 4 == 3);
    }

    [[nodiscard]] std::string name() const {
        switch (kind_) {
            case BaseKind::QuadClosed: return "C";
            case BaseKind::RealClosed: return "R";
            case BaseKind::FiniteOdd: return "F" + std::to_string(q_);
        }
        return "?";
    }

    friend bool operator==(const BaseField& a, const BaseField& b) noexcept {
        return a.kind_ == b.kind_ && a.q_ == b.q_;
    }

private:
    BaseField(BaseKind kind, std::uint64_t q, std::uint64_t p, unsigned k) : kind_(kind), q_(q), p_(p), k_(k) {}

    BaseKind kind_;
    std::uint64_t q_;
    std::uint64_t p_;
    unsigned k_;
};

/// An element of F* / F*^2 as a bit vector over the tower's generators.
struct SquareClass {
    std::uint64_t bits = 0;

    constexpr SquareClass() = default;
    constexpr explicit SquareClass(std::uint64_t b) : bits(b) {}

    [[nodiscard]] constexpr bool is_trivial() const noexcept { return bits == 0; }
    [[nodiscard]] constexpr bool test(int bit) const noexcept { return ((bits >> bit) & 1U) != 0; }

    friend constexpr SquareClass operator*(SquareClass a, SquareClass b) noexcept { return SquareClass(a.bits ^ b.bits); }
    constexpr SquareClass& operator*=(SquareClass o) noexcept {
        bits ^= o.bits;
        return *this;
    }
    friend constexpr bool operator==(SquareClass a, SquareClass b) noexcept = default;
    friend constexpr auto operator<=>(SquareClass a, SquareClass b) noexcept = default;
};

class FieldTower;

/// A field ordering of a real-based tower, stored as the set of generators that are negative.
struct Ordering {
    std::uint64_t negative = 0;

    [[nodiscard]] int sign(SquareClass a) const noexcept { return (detail::popcount(a.bits & negative) % 2 == 0) ? 1 : -1; }

    friend bool operator==(const Ordering&, const Ordering&) = default;
    friend auto operator<=>(const Ordering&, const Ordering&) = default;
};

/// Maximum number of tower variables; square classes must fit in 63 bits.
inline constexpr int kMaxVariables = 62;

/**
 * A tower k((t1))...((tn)) over one of the supported bases.
 *
 * Cheap to copy: the data is shared and immutable.
 */
class FieldTower {
public:
    FieldTower(BaseField base, std::vector<std::string> variables)
        : data_(std::make_shared<const Data>(Data{base, std::move(variables)})) {
        const auto& vars = data_->variables;
        if (static_cast<int>(vars.size()) > kMaxVariables) {
            throw InvalidArgument("too many tower variables");
        }
        for (std::size_t i = 0; i < vars.size(); ++i) {
            if (!is_identifier(vars[i])) throw InvalidArgument("bad variable name '" + vars[i] + "'");
            if (base.kind() == BaseKind::FiniteOdd && vars[i] == "u") {
                throw InvalidArgument("'u' is reserved for the nonsquare of a finite base");
            }
            for (std::size_t j = 0; j < i; ++j) {
                if (vars[i] == vars[j]) throw InvalidArgument("duplicate variable '" + vars[i] + "'");
            }
        }
    }

    explicit FieldTower(BaseField base) : FieldTower(base, {}) {}

    [[nodiscard]] const BaseField& base() const noexcept { return data_->base; }
    [[nodiscard]] const std::vector<std::string>& variables() const noexcept { return data_->variables; }
    [[nodiscard]] int depth() const noexcept { return static_cast<int>(data_->variables.size()); }
    [[nodiscard]] int base_generators() const noexcept { return data_->base.generator_count(); }
    [[nodiscard]] int generator_count() const noexcept { return base_generators() + depth(); }
    [[nodiscard]] std::uint64_t class_count() const noexcept { return std::uint64_t{1} << generator_count(); }
    [[nodiscard]] bool is_real() const noexcept { return base().kind() == BaseKind::RealClosed; }

    /// Bit position of variable index j (0-based).
    [[nodiscard]] int variable_bit(int j) const noexcept { return base_generators() + j; }
    [[nodiscard]] int top_bit() const noexcept { return generator_count() - 1; }

    [[nodiscard]] std::optional<int> variable_index(std::string_view name) const {
        const auto& vars = variables();
        for (std::size_t j = 0; j < vars.size(); ++j) {
            if (vars[j] == name) return static_cast<int>(j);
        }
        return std::nullopt;
    }

    [[nodiscard]] SquareClass variable(int j) const noexcept { return SquareClass(std::uint64_t{1} << variable_bit(j)); }

    [[nodiscard]] SquareClass minus_one() const noexcept {
        return base().minus_one_is_generator() ? SquareClass(1) : SquareClass(0);
    }

    [[nodiscard]] bool contains(SquareClass a) const noexcept { return a.bits < class_count(); }

    /// The tower with its top variable removed (the residue field of the top valuation).
    [[nodiscard]] FieldTower lower() const {
        if (depth() == 0) throw BaseFieldHasNoVariables();
        std::vector<std::string> vars(variables().begin(), variables().end() - 1);
        return FieldTower(base(), std::move(vars));
    }

    /// Canonical spec string, e.g. "R((t1))((t2))".
    [[nodiscard]] std::string spec() const {
        std::string out = base().name();
        for (const auto& v : variables()) out += "((" + v + "))";
        return out;
    }

    /// Name of generator at bit position `bit`.
    [[nodiscard]] std::string generator_name(int bit) const {
        if (bit < base_generators()) return base().kind() == BaseKind::RealClosed ? "-1" : "u";
        return variables()[static_cast<std::size_t>(bit - base_generators())];
    }

    /// Renders a class as a signed monomial, e.g. "-t1*t2", "u*t", "1".
    [[nodiscard]] std::string render(SquareClass a) const {
        std::string out;
        bool negative = false;
        for (int bit = 0; bit < generator_count(); ++bit) {
            if (!a.test(bit)) continue;
            if (bit < base_generators() && base().kind() == BaseKind::RealClosed) {
                negative = true;
                continue;
            }
            if (!out.empty()) out += "*";
            out += generator_name(bit);
        }
        if (out.empty()) out = "1";
        return negative ? "-" + out : out;
    }

    friend bool operator==(const FieldTower& a, const FieldTower& b) noexcept {
        return a.data_ == b.data_ || (a.base() == b.base() && a.variables() == b.variables());
    }

    static bool is_identifier(std::string_view s) noexcept {
        if (s.empty() || !is_alpha(s.front())) return false;
        return std::all_of(s.begin(), s.end(), [](char c) { return is_alpha(c) || (c >= '0' && c <= '9'); });
    }

private:
    static bool is_alpha(char c) noexcept { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

    struct Data {
        BaseField base;
        std::vector<std::string> variables;
    };
    std::shared_ptr<const Data> data_;
};

/**
 * Parses a field spec: base ::= "C" | "R" | "F"<digits>; tower ::= base ( "((" ident "))" )*.
 * Whitespace between tokens is ignored.
 */
inline FieldTower parse_field(std::string_view spec) {
    std::size_t pos = 0;
    auto skip_ws = [&] {
        while (pos < spec.size() && (spec[pos] == ' ' || spec[pos] == '\t')) ++pos;
    };
    skip_ws();
    if (pos >= spec.size()) throw ParseError("empty field spec", pos);

    std::optional<BaseField> base;
    const char head = spec[pos];
    if (head == 'C') {
        base = BaseField::quad_closed();
        ++pos;
    } else if (head == 'R') {
        base = BaseField::real_closed();
        ++pos;
    } else if (head == 'F') {
        ++pos;
        const std::size_t start = pos;
        while (pos < spec.size() && spec[pos] >= '0' && spec[pos] <= '9') ++pos;
        if (pos == start) throw ParseError("expected field order after 'F'", pos);
        if (pos - start > 18) throw UnsupportedBase("finite field order too large");
        base = BaseField::finite(std::stoull(std::string(spec.substr(start, pos - start))));
    } else {
        throw ParseError("expected base field C, R or F<q>", pos);
    }

    std::vector<std::string> vars;
    skip_ws();
    while (pos < spec.size()) {
        if (spec.substr(pos, 2) != "((") throw ParseError("expected '(('", pos);
        pos += 2;
        skip_ws();
        const std::size_t start = pos;
        while (pos < spec.size() && (std::isalnum(static_cast<unsigned char>(spec[pos])) != 0)) ++pos;
        const std::string name(spec.substr(start, pos - start));
        if (!FieldTower::is_identifier(name)) throw ParseError("expected variable name", start);
        if (std::find(vars.begin(), vars.end(), name) != vars.end()) {
            throw ParseError("duplicate variable '" + name + "'", start);
        }
        if (base->kind() == BaseKind::FiniteOdd && name == "u") {
            throw ParseError("'u' is reserved for the nonsquare of a finite base", start);
        }
        vars.push_back(name);
        skip_ws();
        if (spec.substr(pos, 2) != "))") throw ParseError("expected '))'", pos);
        pos += 2;
        skip_ws();
    }
    return FieldTower(*base, std::move(vars));
}

/// Square class of a nonzero integer constant, viewed in the base field.
inline SquareClass class_of_constant(const FieldTower& field, std::int64_t c) {
    if (c == 0) throw ZeroElement();
    const BaseField& base = field.base();
    switch (base.kind()) {
        case BaseKind::QuadClosed:
            return SquareClass(0);
        case BaseKind::RealClosed:
            return SquareClass(c > 0 ? 0 : 1);
        case BaseKind::FiniteOdd: {
            const std::uint64_t p = base.characteristic();
            const std::uint64_t magnitude =
                c < 0 ? static_cast<std::uint64_t>(-(c + 1)) + 1 : static_cast<std::uint64_t>(c);
            std::uint64_t residue = magnitude % p;
            if (residue == 0) throw NotAUnit(std::to_string(c) + " is zero in " + base.name());
            if (c < 0) residue = p - residue;
            // F_p* is contained in the squares of F_{p^k} for even k.
            if (base.degree() % 2 == 0) return SquareClass(0);
            const bool is_residue = detail::pow_mod(residue, (p - 1) / 2, p) == 1;
            return SquareClass(is_residue ? 0 : 1);
        }
    }
    return SquareClass(0);
}

/// All orderings of a real-based tower: every sign choice for t1..tn, with -1 negative.
inline std::vector<Ordering> orderings(const FieldTower& field) {
    std::vector<Ordering> out;
    if (!field.is_real()) return out;
    const std::uint64_t count = std::uint64_t{1} << field.depth();
    out.reserve(count);
    for (std::uint64_t choice = 0; choice < count; ++choice) {
        out.push_back(Ordering{1U | (choice << 1U)});
    }
    return out;
}

/// Renders an ordering as "t1=+1,t2=-1" (or "-" over R itself).
inline std::string render_ordering(const FieldTower& field, const Ordering& ordering) {
    std::string out;
    for (int j = 0; j < field.depth(); ++j) {
        if (!out.empty()) out += ",";
        out += field.variables()[static_cast<std::size_t>(j)];
        out += ordering.sign(field.variable(j)) > 0 ? "=+1" : "=-1";
    }
    return out.empty() ? "-" : out;
}

/**
 * The induced map on square classes, F^x/F^x^2 -> F'^x/F'^x^2, for a quadratic extension F' = F(sqrt b)
 * inside the family.
 */
class ClassMap {
public:
    enum class Kind {
        Identity,      ///< b trivial
        Ramified,      ///< t_j replaced by s with s^2 = t_j * cofactor
        DropBaseBit,   ///< R -> C: the -1 bit disappears, variables shift down
        KillBaseBit,   ///< Fq -> Fq^2: u becomes a square, bit 0 is kept for the new nonsquare
    };

    ClassMap() = default;
    ClassMap(Kind kind, int bit, SquareClass cofactor) : kind_(kind), bit_(bit), cofactor_(cofactor) {}

    [[nodiscard]] Kind kind() const noexcept { return kind_; }

    SquareClass operator()(SquareClass a) const noexcept {
        switch (kind_) {
            case Kind::Identity:
                return a;
            case Kind::Ramified:
                if (!a.test(bit_)) return a;
                return SquareClass(a.bits & ~(std::uint64_t{1} << bit_)) * cofactor_;
            case Kind::DropBaseBit:
                return SquareClass(a.bits >> 1U);
            case Kind::KillBaseBit:
                return SquareClass(a.bits & ~std::uint64_t{1});
        }
        return a;
    }

private:
    Kind kind_ = Kind::Identity;
    int bit_ = 0;
    SquareClass cofactor_;
};

struct QuadraticExtension {
    FieldTower field;
    ClassMap class_map;
};

/**
 * F(sqrt b) as a member of the family together with the map on square classes.
 *
 * If the highest generator in b is t_j with b = t_j * c, then F(sqrt b) is the tower
 * with t_j replaced by a fresh uniformizer s (s^2 = t_j c), and t_j maps to c.
 */
inline QuadraticExtension adjoin_sqrt(const FieldTower& field, SquareClass b) {
    if (!field.contains(b)) throw InvalidArgument("square class does not belong to the tower");
    if (b.is_trivial()) return {field, ClassMap()};

    const int high = 63 - __builtin_clzll(b.bits);
    if (high >= field.base_generators()) {
        const int j = high - field.base_generators();
        std::vector<std::string> vars = field.variables();
        std::string fresh;
        for (int i = 1;; ++i) {
            fresh = "s" + std::to_string(i);
            if (std::find(vars.begin(), vars.end(), fresh) == vars.end()) break;
        }
        vars[static_cast<std::size_t>(j)] = fresh;
        const SquareClass cofactor(b.bits & ~(std::uint64_t{1} << high));
        return {FieldTower(field.base(), std::move(vars)), ClassMap(ClassMap::Kind::Ramified, high, cofactor)};
    }

    if (field.base().kind() == BaseKind::RealClosed) {
        return {FieldTower(BaseField::quad_closed(), field.variables()), ClassMap(ClassMap::Kind::DropBaseBit, 0, {})};
    }
    const std::uint64_t q = field.base().order();
    if (q > (std::uint64_t{1} << 31)) throw UnsupportedBase("finite base order overflows on squaring");
    return {FieldTower(BaseField::finite(q * q), field.variables()), ClassMap(ClassMap::Kind::KillBaseBit, 0, {})};
}

}  // namespace wittlab
