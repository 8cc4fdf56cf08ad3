#pragma once

#include <stdexcept>
#include <string>

namespace strata {

// Base class for all errors raised by the library.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A configured resource limit was hit (Groebner steps, reduction budget, ...).
// Budget exhaustion is always an explicit outcome, never a silent fallback.
struct BudgetExceeded : Error {
    long long limit;
    explicit BudgetExceeded(const std::string& what, long long limit_)
        : Error(what), limit(limit_) {}
};

// Input text does not conform to the polynomial / scenario grammar.
struct ParseError : Error {
    std::size_t position;
    ParseError(const std::string& what, std::size_t pos)
        : Error(what + " (at position " + std::to_string(pos) + ")"), position(pos) {}
};

// A blow-up center fails the order conditions required by a transform.
struct NotPermissible : Error {
    explicit NotPermissible(const std::string& what) : Error(what) {}
};

} // namespace strata
