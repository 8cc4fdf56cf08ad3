#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "strata/ring.hpp"

namespace strata {

// Exponent vector; length always equals the number of ring variables.
using Exps = std::vector<std::uint32_t>;

std::uint64_t total_degree(const Exps& e);
bool divides(const Exps& a, const Exps& b);           // a | b componentwise
Exps exp_mul(const Exps& a, const Exps& b);
Exps exp_div(const Exps& a, const Exps& b);           // requires b | a
Exps exp_lcm(const Exps& a, const Exps& b);

// Strict "a > b" comparison under a monomial order.
class OrderCmp {
public:
    OrderCmp(const RingSpec& ring, const MonomialOrder& order);
    bool greater(const Exps& a, const Exps& b) const;

private:
    std::vector<char> in_block_; // per variable: 1 if in the dominant block
    bool has_block_ = false;
    MonomialOrder::Kind kind_;
};

// Exact multivariate polynomial over Q or F_p. Terms are stored in a map
// keyed by exponent vector; no zero coefficients are kept.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(RingSpec ring) : ring_(std::move(ring)) {}

    static Polynomial zero(const RingSpec& ring) { return Polynomial(ring); }
    static Polynomial constant(const RingSpec& ring, const Coeff& c);
    static Polynomial variable(const RingSpec& ring, const std::string& name,
                               std::uint32_t power = 1);
    static Polynomial monomial(const RingSpec& ring, const Exps& e, const Coeff& c);

    const RingSpec& ring() const { return ring_; }
    const std::map<Exps, Coeff>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    bool is_monomial() const { return terms_.size() == 1; }
    std::size_t nterms() const { return terms_.size(); }
    std::uint64_t degree() const; // max total degree; 0 for the zero polynomial

    // Adds c * x^e, dropping the term if the sum vanishes.
    void add_term(const Exps& e, const Coeff& c);
    Coeff coeff(const Exps& e) const;

    Polynomial operator+(const Polynomial& o) const;
    Polynomial operator-(const Polynomial& o) const;
    Polynomial operator*(const Polynomial& o) const;
    Polynomial operator-() const;
    bool operator==(const Polynomial& o) const { return ring_ == o.ring_ && terms_ == o.terms_; }
    bool operator!=(const Polynomial& o) const { return !(*this == o); }

    Polynomial scaled(const Coeff& c) const;
    Polynomial pow(std::uint32_t n) const;

    // Substitutes variables by polynomials (simultaneously); variables not in
    // the map are kept. All images must live in `target`.
    Polynomial substitute(const std::map<std::string, Polynomial>& images,
                          const RingSpec& target) const;

    // x -> x + c for every assignment; the shift that moves a coordinate
    // center to the origin.
    Polynomial translated(const std::map<std::string, Coeff>& shifts) const;

    // Exact division by x_i^n; nullopt when some term is not divisible.
    std::optional<Polynomial> divided_by_var_power(std::size_t var, std::uint32_t n) const;

    // Leading exponent w.r.t. an order comparator; requires a nonzero value.
    const Exps& leading_exps(const OrderCmp& cmp) const;

    // Maps this polynomial into a ring with a superset (or reordering) of the
    // variables; unknown target variables get exponent 0.
    Polynomial mapped_into(const RingSpec& target) const;

    // Degree-d homogeneous component.
    Polynomial homogeneous_component(std::uint64_t d) const;

private:
    RingSpec ring_;
    std::map<Exps, Coeff> terms_;
};

// Divided-power (Hasse) derivative D_alpha, with D_alpha(x^beta) =
// C(beta, alpha) x^(beta - alpha). Over a perfect field these operators
// generate the full ring of differential operators in the polynomial case.
Polynomial hasse_derivative(const Polynomial& f, const Exps& alpha);

// Order of f along a coordinate prime: after translating the center to the
// origin, the minimum over terms of the total exponent in the prime's
// variables. Throws on the zero polynomial (infinite order).
std::uint64_t order_at_coordinate_prime(const Polynomial& f, const CoordinatePrime& p);

} // namespace strata
