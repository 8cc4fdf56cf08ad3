#include "strata/parse.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace strata {

namespace {

struct Lexer {
    const std::string& s;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool done() {
        skip_ws();
        return pos >= s.size();
    }
    char peek() {
        skip_ws();
        return pos < s.size() ? s[pos] : '\0';
    }
    bool accept(char c) {
        skip_ws();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, pos); }

    mpz_class integer() {
        skip_ws();
        std::size_t start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos == start) fail("expected integer");
        return mpz_class(s.substr(start, pos - start));
    }

    std::string identifier() {
        skip_ws();
        std::size_t start = pos;
        if (pos >= s.size() ||
            !(std::isalpha(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
            fail("expected variable name");
        ++pos;
        while (pos < s.size() &&
               (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
            ++pos;
        return s.substr(start, pos - start);
    }
};

} // namespace

Polynomial poly_parse(const std::string& text, const RingSpec& ring) {
    Lexer lx{text};
    Polynomial result(ring);
    bool first = true;
    while (true) {
        if (lx.done()) {
            if (first) lx.fail("empty polynomial");
            break;
        }
        Coeff sign(1);
        if (lx.accept('+')) {
            // explicit plus
        } else if (lx.accept('-')) {
            sign = Coeff(-1);
        } else if (!first) {
            lx.fail("expected '+' or '-' between terms");
        }
        if (lx.done()) lx.fail("dangling sign");
        first = false;

        Coeff coeff = sign;
        Exps exps(ring.nvars(), 0);
        bool saw_factor = false;

        // optional numeric coefficient
        if (std::isdigit(static_cast<unsigned char>(lx.peek()))) {
            mpz_class num = lx.integer();
            mpz_class den(1);
            if (lx.accept('/')) den = lx.integer();
            if (den == 0) lx.fail("zero denominator");
            coeff = coeff * Coeff(num, den);
            saw_factor = true;
            if (!lx.accept('*')) {
                // a bare coefficient term, unless a variable follows
                char c = lx.peek();
                if (!(std::isalpha(static_cast<unsigned char>(c)) || c == '_')) {
                    result.add_term(exps, ring.reduce(coeff));
                    continue;
                }
            }
        }

        // monomial factors
        while (true) {
            char c = lx.peek();
            if (!(std::isalpha(static_cast<unsigned char>(c)) || c == '_')) {
                if (!saw_factor) lx.fail("expected term");
                break;
            }
            std::string name = lx.identifier();
            if (!ring.has_var(name)) throw Error("unknown variable: " + name);
            std::uint32_t power = 1;
            if (lx.accept('^')) {
                mpz_class n = lx.integer();
                if (n < 0 || !n.fits_uint_p()) lx.fail("bad exponent");
                power = static_cast<std::uint32_t>(n.get_ui());
            }
            exps[ring.var_index(name)] += power;
            saw_factor = true;
            if (!lx.accept('*')) {
                char nxt = lx.peek();
                if (std::isalpha(static_cast<unsigned char>(nxt)) || nxt == '_') continue;
                break;
            }
        }
        result.add_term(exps, ring.reduce(coeff));
    }
    return result;
}

std::string coeff_to_string(const Coeff& c) {
    std::ostringstream os;
    os << c;
    return os.str();
}

Coeff coeff_parse(const std::string& text, const RingSpec& ring) {
    Lexer lx{text};
    Coeff sign(1);
    while (true) {
        if (lx.accept('-'))
            sign = -sign;
        else if (!lx.accept('+'))
            break;
    }
    mpz_class num = lx.integer();
    mpz_class den(1);
    if (lx.accept('/')) den = lx.integer();
    if (den == 0) lx.fail("zero denominator");
    if (!lx.done()) lx.fail("trailing input after coefficient");
    return ring.reduce(sign * Coeff(num, den));
}

std::string poly_to_string(const Polynomial& f) {
    if (f.is_zero()) return "0";
    const RingSpec& ring = f.ring();
    OrderCmp grevlex(ring, MonomialOrder::grevlex());

    std::vector<const std::pair<const Exps, Coeff>*> ts;
    for (const auto& t : f.terms()) ts.push_back(&t);
    std::sort(ts.begin(), ts.end(),
              [&](auto* a, auto* b) { return grevlex.greater(a->first, b->first); });

    std::ostringstream os;
    bool first = true;
    for (auto* t : ts) {
        const Exps& e = t->first;
        Coeff c = t->second;
        bool negative = ring.characteristic() == 0 && c < 0;
        if (first) {
            if (negative) os << "-";
        } else {
            os << (negative ? " - " : " + ");
        }
        first = false;
        Coeff mag = negative ? Coeff(-c) : c;

        std::string mono;
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            if (!mono.empty()) mono += "*";
            mono += ring.variables()[i];
            if (e[i] > 1) mono += "^" + std::to_string(e[i]);
        }
        if (mono.empty()) {
            os << coeff_to_string(mag);
        } else if (mag == 1) {
            os << mono;
        } else {
            os << coeff_to_string(mag) << "*" << mono;
        }
    }
    return os.str();
}

} // namespace strata
