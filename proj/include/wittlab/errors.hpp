#pragma once

/**
 * @file errors.hpp
 * @brief Exception types thrown by wittlab.
 *
 * Every error derives from wittlab::Error so callers can catch the family
 * at once. The CLI maps ParseError and friends to exit code 1.
 */

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wittlab {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed field spec or expression. `position` is a byte offset into the source.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t position)
        : Error(what + " (at position " + std::to_string(position) + ")"), position_(position) {}

    [[nodiscard]] std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

class UnsupportedBase : public Error {
public:
    using Error::Error;
};

class ZeroElement : public Error {
public:
    ZeroElement() : Error("zero is not a unit") {}
};

class NotAUnit : public Error {
public:
    using Error::Error;
};

class UnknownVariable : public Error {
public:
    explicit UnknownVariable(const std::string& name) : Error("unknown variable '" + name + "'") {}
};

class MixedFields : public Error {
public:
    MixedFields() : Error("operands live over different fields") {}
};

class BaseFieldHasNoVariables : public Error {
public:
    BaseFieldHasNoVariables() : Error("the tower has no variables to split off") {}
};

class NoOrderings : public Error {
public:
    NoOrderings() : Error("the field is nonreal and has no orderings") {}
};

class BudgetExceeded : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class WitnessNotFound : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

}  // namespace wittlab
