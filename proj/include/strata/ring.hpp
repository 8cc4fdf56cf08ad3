#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "strata/errors.hpp"

namespace strata {

// Exact field element. Over Q this is an arbitrary-precision rational; over
// F_p it is the canonical residue 0..p-1 stored in the numerator.
using Coeff = mpq_class;

// A polynomial ring k[x_1,...,x_n] with k = Q (characteristic 0) or k = F_p
// for a prime p fitting in a machine word.
class RingSpec {
public:
    RingSpec() = default;
    RingSpec(std::uint64_t characteristic, std::vector<std::string> variables);

    std::uint64_t characteristic() const { return char_; }
    const std::vector<std::string>& variables() const { return vars_; }
    std::size_t nvars() const { return vars_.size(); }

    // Index of a variable; throws Error if the name is unknown.
    std::size_t var_index(const std::string& name) const;
    bool has_var(const std::string& name) const;

    bool operator==(const RingSpec& o) const { return char_ == o.char_ && vars_ == o.vars_; }
    bool operator!=(const RingSpec& o) const { return !(*this == o); }

    // Field arithmetic in k. All results are reduced (residues in F_p).
    Coeff reduce(const Coeff& a) const;
    Coeff add(const Coeff& a, const Coeff& b) const { return reduce(a + b); }
    Coeff sub(const Coeff& a, const Coeff& b) const { return reduce(a - b); }
    Coeff mul(const Coeff& a, const Coeff& b) const { return reduce(a * b); }
    Coeff neg(const Coeff& a) const { return reduce(-a); }
    Coeff inv(const Coeff& a) const;
    Coeff div(const Coeff& a, const Coeff& b) const { return mul(a, inv(b)); }

    // Binomial coefficient C(n, k) in k; Lucas' theorem in characteristic p.
    Coeff binomial(std::uint64_t n, std::uint64_t k) const;

    // The subring on a subset of the variables (order preserved).
    RingSpec subring(const std::vector<std::string>& keep) const;

private:
    std::uint64_t char_ = 0;
    std::vector<std::string> vars_;
    std::map<std::string, std::size_t> index_;
};

bool is_prime_u64(std::uint64_t n);

// Monomial orders used by the Groebner engine. Block orders eliminate exactly
// the named variable subset (block variables dominate, grevlex inside blocks).
struct MonomialOrder {
    enum class Kind { Grevlex, Lex, Block };
    Kind kind = Kind::Grevlex;
    std::vector<std::string> block_vars; // only for Kind::Block

    static MonomialOrder grevlex() { return {Kind::Grevlex, {}}; }
    static MonomialOrder lex() { return {Kind::Lex, {}}; }
    static MonomialOrder block(std::vector<std::string> elim) {
        return {Kind::Block, std::move(elim)};
    }
};

// A prime generated by a subset of the variables after an optional
// translation x -> x + c putting the center through the origin. Points and
// centers at desk scale all have this shape.
struct CoordinatePrime {
    std::map<std::string, Coeff> translation;
    std::vector<std::string> varset;

    // The origin of a ring: all variables, no translation.
    static CoordinatePrime origin(const RingSpec& ring) {
        return CoordinatePrime{{}, ring.variables()};
    }

    bool contains_var(const std::string& v) const;
    void validate(const RingSpec& ring) const;
};

} // namespace strata
