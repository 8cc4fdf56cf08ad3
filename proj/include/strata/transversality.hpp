#pragma once

#include <optional>

#include "strata/lp.hpp"
#include "strata/multiplicity.hpp"
#include "strata/tower.hpp"

namespace strata {

enum class IntegralityStatus { Integral, Refuted, Inconclusive };

// A monic dependence theta^N + a_1 theta^{N-1} + ... + a_N = 0 (mod the
// quotient), with a_j in the degree j*weight piece of the reference algebra.
struct MonicEquation {
    Polynomial theta;
    std::uint32_t weight = 1;
    std::uint32_t N = 1;
    std::vector<Polynomial> coeffs; // a_1..a_N
};

struct IntegralityVerdict {
    IntegralityStatus status = IntegralityStatus::Inconclusive;
    std::optional<std::uint32_t> reduction_index;    // n with J M^n = M^{n+1}
    std::vector<MonicEquation> equations;            // per-generator witnesses
    std::vector<mpq_class> separating;               // monomial refutation functional
    std::vector<std::string> diagnostics;            // per-generator failures
    std::uint32_t budget_used = 0;                   // largest n / N explored
};

// theta in the integral closure of J, decided by the Northcott-Rees
// reduction test J (J+theta)^n = (J+theta)^{n+1}; exact refutation in the
// monomial case via the Newton polyhedron. Memberships are taken modulo the
// optional quotient ideal.
IntegralityVerdict reduction_test(const Ideal& J, const Polynomial& theta, std::uint32_t n_max,
                                  const Ideal* quotient = nullptr, const Limits& limits = {});

// Ideal-pair form: is J a reduction of M (with J subset M expected)?
IntegralityVerdict reduction_test_pair(const Ideal& J, const Ideal& M, std::uint32_t n_max,
                                       const Ideal* quotient = nullptr, const Limits& limits = {});

// Exact decision for monomial data: theta's exponent lies in the Newton
// polyhedron of J's exponents.
bool monomial_closure_membership(const Polynomial& theta, const Ideal& J);
NewtonMembership monomial_closure_membership_certified(const Polynomial& theta, const Ideal& J);

// Searches monic equations certifying every generator of Hp integral over H
// (gradedwise, modulo the quotient): theta^N + a_1 theta^{N-1} + ... = 0 with
// a_j in graded_piece(H, j * weight). Requires H contained in Hp up to D.
IntegralityVerdict rees_integrality_test(const ReesAlgebra& H, const ReesAlgebra& Hp,
                                         std::uint32_t D, std::uint32_t n_max,
                                         const Ideal* quotient = nullptr, const Limits& limits = {});

struct TransversalityReport {
    bool transversal = false;
    std::uint64_t base_rank = 1, ext_rank = 1, generic_rank = 1;
    StratumReport base, ext;
};

// max mult(X') = [L:K] max mult(X): with the tower presentations, the
// extension is transversal exactly when its top stratum is nonempty.
TransversalityReport is_transversal(const Tower& base, const Tower& ext, const Limits& limits = {});

struct ConditionStarReport {
    bool uniqueness = false;   // (i) the candidate is the only prime over p
    bool rationality = false;  // (ii) equal residue rings
    IntegralityStatus reduction = IntegralityStatus::Inconclusive; // (iii)
    std::optional<std::uint32_t> reduction_index;
    std::optional<mpz_class> mult_small, mult_big;  // Rees-theorem comparison
    bool reduction_by_multiplicity = false;
    CoordinatePrime candidate;
    bool holds = false;
    std::vector<std::string> notes;
};

// Condition (*) at the canonical candidate prime P = pB' + <extension
// Z-variables>: (i) uniqueness via normal forms of the extension relations,
// (ii) residue-ring equality via elimination, (iii) reduction via the
// Northcott-Rees test with a Rees-theorem multiplicity comparison as the
// decision fallback.
ConditionStarReport condition_star(const Tower& base, const Tower& ext, const CoordinatePrime& p,
                                   std::uint32_t n_max = 6, std::uint32_t n_range = 8,
                                   const Limits& limits = {});

struct ProbeStep {
    CoordinatePrime center; // in the extension's ambient coordinates
    std::string chart;
};

struct ProbeStage {
    Ideal base_stratum;
    Ideal ext_stratum;
    bool base_nonempty = false;
    bool ext_nonempty = false;
};

struct ProbeResult {
    CoordinatePrime base_prime;
    CoordinatePrime ext_candidate;
    bool in_base = false;
    bool in_ext = false;
    bool direction_ok = true; // in_ext implies in_base (the always-true direction)
};

struct ProbeOutcome {
    enum class Verdict { Consistent, Violated } verdict = Verdict::Consistent;
    std::vector<ProbeStage> stages; // index 0 = before any step
    std::vector<ProbeResult> probes; // evaluated after the last step
    std::optional<CoordinatePrime> witness;
    std::optional<std::size_t> witness_step;
    std::string detail;
};

// Drives a simultaneous permissible sequence on the tower pair and reports
// where the strata stop matching: "violated" when a base-stratum prime has no
// extension-stratum prime over it (the canonical candidate), or when the
// extension stratum empties while the base stratum persists.
ProbeOutcome strong_transversality_probe(const Tower& base, const Tower& ext,
                                         const std::vector<ProbeStep>& steps,
                                         const std::vector<CoordinatePrime>& probes,
                                         const Limits& limits = {});

// The same probe on a raw algebra pair (base algebra over a subring of the
// extension's ambient ring), for sequences driven on Rees algebras directly.
ProbeOutcome algebra_pair_probe(const ReesAlgebra& base_alg, const ReesAlgebra& ext_alg,
                                const std::vector<ProbeStep>& steps,
                                const std::vector<CoordinatePrime>& probes,
                                const Limits& limits = {});

struct ConstructReport {
    bool certified = false;
    Tower extension;
    ReesAlgebra elimination; // H over the base S-variables
    IntegralityVerdict verdict;
    std::string detail;
};

// Builds the extension tower from fresh monic relations and certifies strong
// transversality by checking each new Z W integral over
// H = eliminate(Diff(presentation)) in the extension quotient.
ConstructReport construct_extension(const Tower& base,
                                    const std::vector<std::pair<std::string, std::string>>& new_steps,
                                    std::uint32_t D, std::uint32_t n_max,
                                    const Limits& limits = {});

} // namespace strata
