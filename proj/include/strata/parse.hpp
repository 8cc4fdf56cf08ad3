#pragma once

#include <string>

#include "strata/polynomial.hpp"

namespace strata {

// Parses the polynomial grammar: terms joined by '+'/'-'; a term is a
// coefficient (integer or a/b), a monomial, or coeff*monomial; monomial
// factors var(^nat)? are joined by '*'; whitespace is insignificant.
// Throws ParseError (with position) or Error (unknown variable, denominator
// not invertible mod p).
Polynomial poly_parse(const std::string& text, const RingSpec& ring);

// Canonical text: grevlex-descending terms, coefficients reduced (residues in
// F_p), "0" for the zero polynomial. The output re-parses to an equal value.
std::string poly_to_string(const Polynomial& f);

std::string coeff_to_string(const Coeff& c);
Coeff coeff_parse(const std::string& text, const RingSpec& ring);

} // namespace strata
