#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "strata/groebner.hpp"

namespace strata {

// One weighted generator f * W^weight of a Rees algebra B[f_1 W^{n_1}, ...].
struct WeightedGen {
    Polynomial poly;
    std::uint32_t weight = 1;
};

// A Rees algebra inside B[W] described by finitely many weighted generators.
// The graded pieces I_n satisfy I_k * I_l ⊆ I_{k+l}.
class ReesAlgebra {
public:
    ReesAlgebra() = default;
    ReesAlgebra(RingSpec ring, std::vector<WeightedGen> gens);

    const RingSpec& ring() const { return ring_; }
    const std::vector<WeightedGen>& generators() const { return gens_; }
    bool empty() const { return gens_.empty(); }

    // Generators sorted by (weight, canonical text), duplicates dropped; the
    // canonical serialized form.
    ReesAlgebra canonicalized() const;

    // Least common multiple of the generator weights (1 when empty); the
    // default truncation degree for equality comparisons.
    std::uint32_t weight_lcm() const;

    ReesAlgebra mapped_into(const RingSpec& target) const;

private:
    RingSpec ring_;
    std::vector<WeightedGen> gens_;
};

// Ideal generated by all products Π f_i^{a_i} with Σ a_i n_i = n; the unit
// ideal in degree 0.
Ideal graded_piece(const ReesAlgebra& G, std::uint32_t n);

// Defining ideal of Sing(G): all Hasse derivatives D_alpha(f_i) with
// |alpha| <= N_i - 1. A point lies in Sing(G) iff this ideal vanishes there.
Ideal sing_locus(const ReesAlgebra& G);

// Order test Sing membership at a coordinate prime: every generator has order
// >= its weight along p.
bool sing_contains(const ReesAlgebra& G, const CoordinatePrime& p);

// Smallest differentially saturated algebra containing G: adds
// D_alpha(f_i) W^{N_i-|alpha|} for 0 < |alpha| < N_i. Single pass; the
// Leibniz rule makes the generated algebra closed under lower-order
// operators, so no fixpoint iteration is needed.
ReesAlgebra diff_saturate(const ReesAlgebra& G);

// Relative version: alpha supported only on zvars.
ReesAlgebra relative_diff_saturate(const ReesAlgebra& G, const std::vector<std::string>& zvars);

// Graded equality up to degree D, optionally modulo a quotient ideal.
bool algebra_equal_up_to(const ReesAlgebra& G, const ReesAlgebra& H, std::uint32_t D,
                         const Ideal* quotient = nullptr, const Limits& limits = {});

// Gradedwise containment of G's pieces in H's, up to degree D.
bool algebra_contained_up_to(const ReesAlgebra& G, const ReesAlgebra& H, std::uint32_t D,
                             const Ideal* quotient = nullptr, const Limits& limits = {});

// Truncated elimination algebra: degreewise G_n ∩ k[vars \ zvars] for
// n <= D, redundant generators pruned; lives over the subring. The caller is
// expected to saturate first (the construction needs a differential algebra).
ReesAlgebra eliminate_algebra(const ReesAlgebra& G, const std::vector<std::string>& zvars,
                              std::uint32_t D, const Limits& limits = {});

// tau-invariant at a rational closed point of Sing(G): the number of
// independent linear forms among degree-1 initial forms of weight-1
// generators of the saturated algebra. Saturates unsaturated input.
std::uint32_t tau_at_point(const ReesAlgebra& G, const CoordinatePrime& p);

// Restriction Diff(G)|_X before closure: generators reduced to normal form
// modulo IX, zero classes dropped.
ReesAlgebra restrict_to_subscheme(const ReesAlgebra& G, const Ideal& IX, const Limits& limits = {});

// Pull-back of G under the projection V x A^1 -> V: the same generators in
// the ring extended by one fresh variable (the smooth local transformation
// alongside blow-ups and open restrictions).
ReesAlgebra affine_line_pullback(const ReesAlgebra& G, const std::string& new_var);

std::string rees_to_string(const ReesAlgebra& G);

// Enumerates all exponent vectors alpha with 1 <= |alpha| <= max_total,
// supported on the given variable indices.
std::vector<Exps> enumerate_alphas(std::size_t nvars, std::uint32_t max_total,
                                   const std::vector<std::size_t>& support);

} // namespace strata
