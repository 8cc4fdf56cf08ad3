#pragma once

#include <cstdint>
#include <vector>

#include "strata/polynomial.hpp"

namespace strata {

// An ideal given by generators; zero generators are dropped on construction.
struct Ideal {
    RingSpec ring;
    std::vector<Polynomial> generators;

    Ideal() = default;
    Ideal(RingSpec r, std::vector<Polynomial> gens);

    static Ideal zero(const RingSpec& r) { return Ideal(r, {}); }
    static Ideal unit(const RingSpec& r) {
        return Ideal(r, {Polynomial::constant(r, Coeff(1))});
    }

    bool is_zero() const { return generators.empty(); }
    Ideal mapped_into(const RingSpec& target) const;
};

Ideal ideal_sum(const Ideal& a, const Ideal& b);
Ideal ideal_product(const Ideal& a, const Ideal& b);
Ideal ideal_power(const Ideal& a, std::uint32_t n);

// Resource limits. Exhaustion raises BudgetExceeded; it is never silent.
struct Limits {
    long long gb_steps = 4'000'000; // term cancellations per Buchberger run
};

class GroebnerBasis {
public:
    GroebnerBasis() = default;
    GroebnerBasis(Ideal ideal, MonomialOrder order, std::vector<Polynomial> basis)
        : ideal_(std::move(ideal)), order_(std::move(order)), basis_(std::move(basis)) {}

    const Ideal& ideal() const { return ideal_; }
    const MonomialOrder& order() const { return order_; }
    const std::vector<Polynomial>& basis() const { return basis_; }
    const RingSpec& ring() const { return ideal_.ring; }

    bool is_unit() const;

private:
    Ideal ideal_;
    MonomialOrder order_;
    std::vector<Polynomial> basis_;
};

// Buchberger with normal-strategy pair selection; the result is the reduced
// basis, monic, sorted descending by leading monomial.
GroebnerBasis groebner_basis(const Ideal& I, const MonomialOrder& order = MonomialOrder::grevlex(),
                             const Limits& limits = {});

// Full normal form of f modulo the basis.
Polynomial normal_form(const Polynomial& f, const GroebnerBasis& gb, const Limits& limits = {});

bool ideal_membership(const Polynomial& f, const Ideal& I, const Limits& limits = {});
bool ideal_membership(const Polynomial& f, const GroebnerBasis& gb, const Limits& limits = {});

// Equality as ideals (mutual membership of generators).
bool ideal_equal(const Ideal& a, const Ideal& b, const Limits& limits = {});

// I ∩ k[remaining vars], via a block order eliminating `vars`.
Ideal eliminate(const Ideal& I, const std::vector<std::string>& vars, const Limits& limits = {});

// I : f^infinity via the auxiliary-variable trick; contains I.
Ideal saturate(const Ideal& I, const Polynomial& f, const Limits& limits = {});

// Minimum over generators of the order along p; valid on any generating set.
std::uint64_t ideal_order_at_coordinate_prime(const Ideal& I, const CoordinatePrime& p);

// Groebner basis remembering how each element is written in the input
// generators; used to extract explicit membership certificates.
class TrackedBasis {
public:
    TrackedBasis(Ideal input, MonomialOrder order, const Limits& limits = {});

    // Normal form together with cofactors over the INPUT generators:
    // f = sum_i cofactor[i] * input.generators[i] + nf.
    struct Division {
        Polynomial nf;
        std::vector<Polynomial> cofactors;
    };
    Division divide(const Polynomial& f, const Limits& limits = {}) const;

    const std::vector<Polynomial>& basis() const { return basis_; }
    const Ideal& input() const { return input_; }

private:
    Ideal input_;
    MonomialOrder order_;
    std::vector<Polynomial> basis_;
    std::vector<std::vector<Polynomial>> reps_; // basis[i] = sum_j reps_[i][j] * gen_j
};

} // namespace strata
