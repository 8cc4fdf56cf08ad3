#pragma once

#include "strata/tower.hpp"

namespace strata {

// An affine quotient ring: polynomial ring modulo relations.
struct QuotientRing {
    RingSpec ring;
    Ideal relations;
};

struct HilbertSamuelResult {
    std::vector<mpz_class> lengths; // lambda(R_q / a^n R_q) for n = 1..n_range
    std::uint32_t dim = 0;          // Krull dimension of the local ring R_q
    mpz_class multiplicity;         // d! * (leading Hilbert-Samuel coefficient)
};

// Brute-force Hilbert-Samuel oracle: counts standard monomials of
// relations + a^n degreewise, fits the degree-d polynomial tail, and returns
// e = d! c_d. Works at coordinate primes, including non-closed ones (lengths
// are dimensions over the residue field of the free variables).
// Throws on: points off the subscheme, tails that are not yet polynomial
// ("increase n_range"), and non-primary behavior (no finite staircase).
HilbertSamuelResult hilbert_samuel_multiplicity(const QuotientRing& R, const CoordinatePrime& q,
                                                std::uint32_t n_range, const Limits& limits = {});

// Same oracle for an arbitrary ideal a that is q-primary in R_q.
HilbertSamuelResult multiplicity_of_ideal(const QuotientRing& R, const Ideal& a,
                                          const CoordinatePrime& q, std::uint32_t n_range,
                                          const Limits& limits = {});

// One fiber prime of a finite extension, with caller-supplied residue degree.
struct FiberPrime {
    CoordinatePrime prime;
    std::uint32_t residue_degree = 1;
};

struct ZariskiReport {
    mpz_class base_mult;       // e of the base local ring at p
    std::uint64_t rank = 1;    // generic rank of the extension
    mpz_class lhs;             // base_mult * rank
    struct FiberTerm {
        CoordinatePrime prime;
        mpz_class mult;            // e_{B'_P}(P B'_P)
        std::uint32_t residue_degree;
        mpz_class mult_extended;   // e_{B'_P}(p B'_P)
        bool chain_ok;             // mult <= mult_extended <= base_mult * rank
    };
    std::vector<FiberTerm> fibers;
    mpz_class rhs;             // sum of mult * residue_degree
    bool equal = false;        // lhs == rhs
};

// Zariski's multiplicity formula for the finite projection given by `ext`
// over `base`, checked at p with the supplied fiber primes.
ZariskiReport zariski_check(const QuotientRing& base, const Tower& ext, const CoordinatePrime& p,
                            const std::vector<FiberPrime>& fibers, std::uint32_t n_range,
                            const Limits& limits = {});

} // namespace strata
