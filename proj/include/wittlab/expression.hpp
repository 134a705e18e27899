#pragma once

/**
 * @file expression.hpp
 * @brief Parser for the form / algebra expression language.
 *
 *   elem ::= factor ( "*" factor )*          factor ::= ["-"] ( digits | ident )
 *   form ::= term ( "+" term )*              orthogonal sum
 *   term ::= operand ( "x" operand )*        tensor, or multiple when the left side is an integer
 *   operand ::= integer | "<" elems ">" | "<<" elems ">>" | "scale(" elem "," form ")" | "$" ident
 *   alg  ::= "(" elem "," elem ")" ( "(x)" "(" elem "," elem ")" )*
 *
 * "+" binds looser than "x", which binds looser than "*". Whitespace is ignored
 * outside identifiers. "$name" refers to a binding supplied by the caller (REPL).
 */

#include <cctype>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "wittlab/brauer.hpp"
#include "wittlab/errors.hpp"
#include "wittlab/field_tower.hpp"
#include "wittlab/quadform.hpp"

namespace wittlab {

using Expression = std::variant<QuadForm, BrauerClass>;
using Bindings = std::map<std::string, Expression, std::less<>>;

namespace detail {

class ExpressionParser {
public:
    ExpressionParser(const FieldTower& field, std::string_view src, const Bindings* bindings)
        : field_(field), src_(src), bindings_(bindings) {}

    Expression parse() {
        skip_ws();
        if (at_end()) throw ParseError("empty expression", pos_);
        Expression result = peek() == '(' ? Expression(parse_algebra()) : parse_top_form();
        skip_ws();
        if (!at_end()) throw ParseError(std::string("unexpected '") + peek() + "'", pos_);
        return result;
    }

private:
    // An operand is either a bare integer (only legal as the left side of "x") or a form.
    using Operand = std::variant<std::int64_t, QuadForm>;

    [[nodiscard]] bool at_end() const { return pos_ >= src_.size(); }
    [[nodiscard]] char peek() const { return at_end() ? '\0' : src_[pos_]; }

    void skip_ws() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(src_[pos_])) != 0) ++pos_;
    }

    bool accept(std::string_view token) {
        skip_ws();
        if (src_.substr(pos_, token.size()) == token) {
            pos_ += token.size();
            return true;
        }
        return false;
    }

    void expect(std::string_view token) {
        if (!accept(token)) throw ParseError("expected '" + std::string(token) + "'", pos_);
    }

    static bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

    std::string read_identifier() {
        const std::size_t start = pos_;
        while (!at_end() && ident_char(peek())) ++pos_;
        return std::string(src_.substr(start, pos_ - start));
    }

    std::int64_t read_integer() {
        const std::size_t start = pos_;
        std::int64_t value = 0;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek())) != 0) {
            const int digit = peek() - '0';
            if (value > (std::numeric_limits<std::int64_t>::max() - digit) / 10) throw ParseError("integer too large", start);
            value = value * 10 + digit;
            ++pos_;
        }
        if (pos_ == start) throw ParseError("expected integer", pos_);
        return value;
    }

    SquareClass parse_factor() {
        skip_ws();
        bool negative = false;
        if (peek() == '-') {
            negative = true;
            ++pos_;
            skip_ws();
        }
        SquareClass value;
        const std::size_t start = pos_;
        if (std::isdigit(static_cast<unsigned char>(peek())) != 0) {
            const std::int64_t c = read_integer();
            try {
                value = class_of_constant(field_, c);
            } catch (const NotAUnit& e) {
                throw ParseError(e.what(), start);
            }
        } else if (std::isalpha(static_cast<unsigned char>(peek())) != 0) {
            const std::string name = read_identifier();
            if (auto j = field_.variable_index(name)) {
                value = field_.variable(*j);
            } else if (name == "u" && field_.base().kind() == BaseKind::FiniteOdd) {
                value = SquareClass(1);
            } else {
                throw UnknownVariable(name);
            }
        } else {
            throw ParseError("expected element", pos_);
        }
        return negative ? value * field_.minus_one() : value;
    }

    SquareClass parse_element() {
        SquareClass value = parse_factor();
        while (accept("*")) value *= parse_factor();
        return value;
    }

    std::vector<SquareClass> parse_element_list(std::string_view close) {
        std::vector<SquareClass> out;
        if (accept(close)) return out;
        out.push_back(parse_element());
        while (accept(",")) out.push_back(parse_element());
        expect(close);
        return out;
    }

    BrauerClass parse_algebra() {
        std::vector<SymbolSlots> symbols;
        do {
            expect("(");
            const SquareClass a = parse_element();
            expect(",");
            const SquareClass b = parse_element();
            expect(")");
            symbols.emplace_back(a, b);
        } while (accept("(x)"));
        return BrauerClass(field_, std::move(symbols));
    }

    QuadForm parse_top_form() { return parse_form(); }

    QuadForm parse_form() {
        QuadForm out = require_form(parse_term());
        while (accept("+")) out = orth_sum(out, require_form(parse_term()));
        return out;
    }

    QuadForm require_form(const Operand& op) {
        if (const auto* form = std::get_if<QuadForm>(&op)) return *form;
        throw ParseError("an integer must be followed by 'x' and a form", pos_);
    }

    bool accept_times() {
        skip_ws();
        if (peek() == 'x' && (pos_ + 1 >= src_.size() || !ident_char(src_[pos_ + 1]))) {
            ++pos_;
            return true;
        }
        return false;
    }

    Operand parse_term() {
        Operand acc = parse_operand();
        while (accept_times()) {
            const std::size_t at = pos_;
            const Operand rhs = parse_operand();
            const auto* right = std::get_if<QuadForm>(&rhs);
            if (right == nullptr) throw ParseError("right operand of 'x' must be a form", at);
            if (const auto* m = std::get_if<std::int64_t>(&acc)) {
                if (*m <= 0) throw ParseError("multiplier must be positive", at);
                acc = multiple(static_cast<std::size_t>(*m), *right);
            } else {
                acc = tensor(std::get<QuadForm>(acc), *right);
            }
        }
        return acc;
    }

    Operand parse_operand() {
        skip_ws();
        const std::size_t start = pos_;
        if (accept("<<")) return pfister(field_, parse_element_list(">>"));
        if (accept("<")) return QuadForm(field_, parse_element_list(">"));
        if (std::isdigit(static_cast<unsigned char>(peek())) != 0) {
            const std::int64_t m = read_integer();
            if (m > 4096) throw ParseError("multiplier too large", start);
            return m;
        }
        if (accept("$")) {
            const std::string name = read_identifier();
            if (bindings_ != nullptr) {
                if (auto it = bindings_->find(name); it != bindings_->end()) {
                    if (const auto* form = std::get_if<QuadForm>(&it->second)) return *form;
                    throw ParseError("'$" + name + "' is an algebra, not a form", start);
                }
            }
            throw UnknownVariable("$" + name);
        }
        if (std::isalpha(static_cast<unsigned char>(peek())) != 0) {
            const std::string word = read_identifier();
            if (word == "scale") {
                expect("(");
                const SquareClass a = parse_element();
                expect(",");
                QuadForm inner = parse_form();
                expect(")");
                return scale(a, inner);
            }
            throw ParseError("unexpected identifier '" + word + "' at form level", start);
        }
        throw ParseError("expected a form", start);
    }

    const FieldTower& field_;
    std::string_view src_;
    const Bindings* bindings_;
    std::size_t pos_ = 0;
};

}  // namespace detail

inline Expression parse_expression(const FieldTower& field, std::string_view src, const Bindings* bindings = nullptr) {
    return detail::ExpressionParser(field, src, bindings).parse();
}

inline QuadForm parse_form(const FieldTower& field, std::string_view src, const Bindings* bindings = nullptr) {
    Expression e = parse_expression(field, src, bindings);
    if (auto* form = std::get_if<QuadForm>(&e)) return std::move(*form);
    throw ParseError("expected a quadratic form, got an algebra", 0);
}

inline BrauerClass parse_algebra(const FieldTower& field, std::string_view src) {
    Expression e = parse_expression(field, src);
    if (auto* alg = std::get_if<BrauerClass>(&e)) return std::move(*alg);
    throw ParseError("expected an algebra '(a,b)(x)...', got a form", 0);
}

inline std::string render(const Expression& e) {
    return std::visit([](const auto& v) { return render(v); }, e);
}

}  // namespace wittlab
