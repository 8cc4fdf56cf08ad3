#include "strata/transversality.hpp"

#include <algorithm>
#include <set>

#include "strata/parse.hpp"

namespace strata {

namespace {

Ideal with_quotient(const Ideal& I, const Ideal* quotient) {
    return quotient ? ideal_sum(I, *quotient) : I;
}

bool all_monomial(const Ideal& J, const Polynomial& theta) {
    if (!theta.is_monomial()) return false;
    for (const auto& g : J.generators)
        if (!g.is_monomial()) return false;
    return true;
}

} // namespace

bool monomial_closure_membership(const Polynomial& theta, const Ideal& J) {
    return monomial_closure_membership_certified(theta, J).inside;
}

NewtonMembership monomial_closure_membership_certified(const Polynomial& theta, const Ideal& J) {
    if (!all_monomial(J, theta)) throw Error("monomial closure test requires monomial data");
    std::vector<Exps> gens;
    for (const auto& g : J.generators) gens.push_back(g.terms().begin()->first);
    return newton_polyhedron_membership(theta.terms().begin()->first, gens);
}

IntegralityVerdict reduction_test_pair(const Ideal& J, const Ideal& M, std::uint32_t n_max,
                                       const Ideal* quotient, const Limits& limits) {
    if (J.ring != M.ring) throw Error("ring mismatch in reduction test");
    if (n_max < 1) throw Error("n_max must be at least 1");
    IntegralityVerdict verdict;

    // membership short-circuit: M inside J already
    GroebnerBasis jq = groebner_basis(with_quotient(J, quotient), MonomialOrder::grevlex(), limits);
    bool contained = true;
    for (const auto& g : M.generators)
        if (!ideal_membership(g, jq, limits)) {
            contained = false;
            break;
        }
    if (contained) {
        verdict.status = IntegralityStatus::Integral;
        verdict.reduction_index = 0;
        return verdict;
    }

    for (std::uint32_t n = 1; n <= n_max; ++n) {
        verdict.budget_used = n;
        Ideal lhs = with_quotient(ideal_product(J, ideal_power(M, n)), quotient);
        GroebnerBasis gb = groebner_basis(lhs, MonomialOrder::grevlex(), limits);
        Ideal rhs = ideal_power(M, n + 1);
        bool ok = true;
        for (const auto& g : rhs.generators)
            if (!ideal_membership(g, gb, limits)) {
                ok = false;
                break;
            }
        if (ok) {
            verdict.status = IntegralityStatus::Integral;
            verdict.reduction_index = n;
            return verdict;
        }
    }
    verdict.status = IntegralityStatus::Inconclusive;
    verdict.diagnostics.push_back("no reduction index found up to n_max = " + std::to_string(n_max));
    return verdict;
}

IntegralityVerdict reduction_test(const Ideal& J, const Polynomial& theta, std::uint32_t n_max,
                                  const Ideal* quotient, const Limits& limits) {
    if (theta.ring() != J.ring) throw Error("ring mismatch in reduction test");
    if (J.is_zero()) throw Error("reduction test over the zero ideal");

    // exact decision first in the plain monomial case
    if ((!quotient || quotient->is_zero()) && all_monomial(J, theta)) {
        NewtonMembership nm = monomial_closure_membership_certified(theta, J);
        if (!nm.inside) {
            IntegralityVerdict verdict;
            verdict.status = IntegralityStatus::Refuted;
            verdict.separating = nm.separating;
            verdict.diagnostics.push_back(
                "exponent lies outside the Newton polyhedron of the ideal");
            return verdict;
        }
    }
    Ideal M = ideal_sum(J, Ideal(J.ring, {theta}));
    return reduction_test_pair(J, M, n_max, quotient, limits);
}

IntegralityVerdict rees_integrality_test(const ReesAlgebra& H, const ReesAlgebra& Hp,
                                         std::uint32_t D, std::uint32_t n_max,
                                         const Ideal* quotient, const Limits& limits) {
    if (H.ring() != Hp.ring()) throw Error("ring mismatch in integrality test");
    if (!algebra_contained_up_to(H, Hp, D, quotient, limits))
        throw Error("precondition failed: H is not gradedwise contained in Hp up to D");

    IntegralityVerdict verdict;
    verdict.status = IntegralityStatus::Integral;
    const RingSpec& ring = H.ring();

    for (const auto& gen : Hp.generators()) {
        const Polynomial& theta = gen.poly;
        const std::uint32_t w = gen.weight;
        bool certified = false;

        for (std::uint32_t N = 1; N <= n_max && !certified; ++N) {
            verdict.budget_used = std::max(verdict.budget_used, N);
            // candidate ideal: sum over j of graded_piece(H, j*w) * theta^{N-j}
            std::vector<Polynomial> gens;
            std::vector<std::pair<std::uint32_t, std::size_t>> which; // (j, index in piece)
            std::vector<std::vector<Polynomial>> piece_gens(N + 1);
            for (std::uint32_t j = 1; j <= N; ++j) {
                Ideal piece = graded_piece(H, j * w);
                piece_gens[j] = piece.generators;
                Polynomial power = theta.pow(N - j);
                for (std::size_t k = 0; k < piece.generators.size(); ++k) {
                    gens.push_back(piece.generators[k] * power);
                    which.emplace_back(j, k);
                }
            }
            std::size_t n_main = gens.size();
            if (quotient)
                for (const auto& q : quotient->generators) gens.push_back(q);
            Ideal target(ring, gens);
            if (target.is_zero()) continue;

            Polynomial thetaN = theta.pow(N);
            if (!ideal_membership(thetaN, target, limits)) continue;

            // recover the explicit equation via tracked division
            TrackedBasis tb(target, MonomialOrder::grevlex(), limits);
            auto div = tb.divide(thetaN, limits);
            if (!div.nf.is_zero())
                throw Error("tracked division disagrees with membership");
            MonicEquation eq;
            eq.theta = theta;
            eq.weight = w;
            eq.N = N;
            eq.coeffs.assign(N, Polynomial::zero(ring));
            for (std::size_t k = 0; k < n_main; ++k) {
                if (div.cofactors[k].is_zero()) continue;
                auto [j, idx] = which[k];
                // theta^N = sum h * (g * theta^{N-j}) + (quotient part), so
                // a_j accumulates -h * g
                eq.coeffs[j - 1] =
                    eq.coeffs[j - 1] - div.cofactors[k] * piece_gens[j][idx];
            }
            verdict.equations.push_back(std::move(eq));
            certified = true;
        }
        if (!certified) {
            verdict.status = IntegralityStatus::Inconclusive;
            verdict.diagnostics.push_back("no monic equation of degree <= " +
                                          std::to_string(n_max) + " found for (" +
                                          poly_to_string(theta) + ")*W^" + std::to_string(w));
        }
    }
    return verdict;
}

TransversalityReport is_transversal(const Tower& base, const Tower& ext, const Limits& limits) {
    if (!ext.extends(base)) throw Error("extension tower does not extend the base tower");
    TransversalityReport report;
    report.base_rank = base.rank();
    report.ext_rank = ext.rank();
    if (report.base_rank == 0 || report.ext_rank % report.base_rank != 0)
        throw Error("extension rank is not a multiple of the base rank");
    report.generic_rank = report.ext_rank / report.base_rank;
    report.base = max_mult_stratum(base, limits);
    report.ext = max_mult_stratum(ext, limits);
    report.transversal = report.ext.nonempty;
    return report;
}

namespace {

// The canonical prime over p: same translation, varset extended by the
// extension-only tower variables (Prop 8.6 shape P' = pB' + <theta_1,...>).
CoordinatePrime candidate_over(const CoordinatePrime& p, const std::vector<std::string>& ext_only) {
    CoordinatePrime c = p;
    for (const auto& v : ext_only)
        if (!c.contains_var(v)) c.varset.push_back(v);
    return c;
}

std::vector<std::string> extension_only_vars(const Tower& base, const Tower& ext) {
    std::vector<std::string> out;
    for (const auto& s : ext.steps()) {
        bool in_base = false;
        for (const auto& bs : base.steps())
            if (bs.var == s.var) in_base = true;
        if (!in_base) out.push_back(s.var);
    }
    return out;
}

} // namespace

ConditionStarReport condition_star(const Tower& base, const Tower& ext, const CoordinatePrime& p,
                                   std::uint32_t n_max, std::uint32_t n_range,
                                   const Limits& limits) {
    if (!ext.extends(base)) throw Error("extension tower does not extend the base tower");
    p.validate(base.full_ring());
    const RingSpec& big = ext.full_ring();

    std::vector<std::string> ext_only = extension_only_vars(base, ext);
    ConditionStarReport report;
    report.candidate = candidate_over(p, ext_only);

    // (i) uniqueness: each extension relation becomes a unit multiple of a
    // power of its variable after killing the candidate's other generators
    report.uniqueness = true;
    for (const auto& s : ext.steps()) {
        if (std::find(ext_only.begin(), ext_only.end(), s.var) == ext_only.end()) continue;
        Polynomial f = s.relation.translated(p.translation);
        std::map<std::string, Polynomial> kill;
        for (const auto& v : p.varset) kill.emplace(v, Polynomial::zero(big));
        for (const auto& v : ext_only)
            if (v != s.var) kill.emplace(v, Polynomial::zero(big));
        Polynomial residue = f.substitute(kill, big);
        // every surviving term must carry the full power of s.var
        std::size_t zi = big.var_index(s.var);
        std::uint32_t deg = 0;
        for (const auto& [e, c] : residue.terms()) deg = std::max(deg, e[zi]);
        bool ok = !residue.is_zero();
        for (const auto& [e, c] : residue.terms())
            if (e[zi] != deg) ok = false;
        if (!ok) {
            report.uniqueness = false;
            report.notes.push_back("relation for " + s.var +
                                   " is not a unit times a power of it modulo the candidate");
        }
    }

    // (ii) rationality: the residue rings agree on the free variables
    {
        std::vector<std::string> free_vars;
        for (const auto& v : base.full_ring().variables())
            if (!p.contains_var(v)) free_vars.push_back(v);
        auto residue_ideal = [&](const Tower& t, const CoordinatePrime& q) {
            Ideal defs = t.defining_ideal();
            std::vector<Polynomial> gens;
            for (const auto& g : defs.generators) gens.push_back(g.translated(q.translation));
            for (const auto& v : q.varset)
                gens.push_back(Polynomial::variable(t.full_ring(), v));
            Ideal I(t.full_ring(), gens);
            std::vector<std::string> elim;
            for (const auto& v : t.full_ring().variables())
                if (std::find(free_vars.begin(), free_vars.end(), v) == free_vars.end())
                    elim.push_back(v);
            RingSpec freering = t.full_ring().subring(free_vars);
            Ideal E = elim.empty() ? I : eliminate(I, elim, limits);
            return E.mapped_into(freering);
        };
        Ideal rb = residue_ideal(base, p);
        Ideal re = residue_ideal(ext, report.candidate);
        report.rationality = ideal_equal(rb, re.mapped_into(rb.ring), limits);
        if (!report.rationality)
            report.notes.push_back("residue rings of the candidate and of p differ");
    }

    // (iii) reduction: p B' is a reduction of the candidate ideal in B'
    {
        Ideal Q = ext.defining_ideal();
        std::vector<Polynomial> pgens;
        for (const auto& v : p.varset) {
            Polynomial g = Polynomial::variable(big, v);
            auto it = p.translation.find(v);
            if (it != p.translation.end()) g.add_term(Exps(big.nvars(), 0), big.neg(it->second));
            pgens.push_back(std::move(g));
        }
        Ideal small(big, pgens);
        std::vector<Polynomial> Pgens = pgens;
        for (const auto& v : ext_only) Pgens.push_back(Polynomial::variable(big, v));
        Ideal cand(big, Pgens);

        IntegralityVerdict rv = reduction_test_pair(small, cand, n_max, &Q, limits);
        report.reduction = rv.status;
        report.reduction_index = rv.reduction_index;

        if (rv.status != IntegralityStatus::Integral) {
            // Rees' theorem: for formally equidimensional local rings the
            // reduction holds iff the multiplicities agree
            try {
                QuotientRing R{big, Q};
                auto e_big = hilbert_samuel_multiplicity(R, report.candidate, n_range, limits);
                auto e_small = multiplicity_of_ideal(R, small, report.candidate, n_range, limits);
                report.mult_big = e_big.multiplicity;
                report.mult_small = e_small.multiplicity;
                if (e_small.multiplicity == e_big.multiplicity) {
                    report.reduction = IntegralityStatus::Integral;
                    report.reduction_by_multiplicity = true;
                    report.notes.push_back("reduction certified by equal multiplicities (Rees)");
                } else {
                    report.reduction = IntegralityStatus::Refuted;
                    report.reduction_by_multiplicity = true;
                    report.notes.push_back(
                        "reduction refuted by multiplicities: e(p) = " +
                        e_small.multiplicity.get_str() + " vs e(P) = " +
                        e_big.multiplicity.get_str());
                }
            } catch (const Error& e) {
                report.notes.push_back(std::string("multiplicity comparison unavailable: ") +
                                       e.what());
            }
        }
    }

    report.holds = report.uniqueness && report.rationality &&
                   report.reduction == IntegralityStatus::Integral;
    return report;
}

namespace {

struct PairState {
    RingSpec base_ring;
    RingSpec ext_ring;
    ReesAlgebra base_alg;
    ReesAlgebra ext_alg;
};

Ideal stratum_of(const ReesAlgebra& alg, const Limits& limits, bool* nonempty) {
    Ideal s = sing_locus(alg);
    if (s.is_zero()) {
        *nonempty = true;
        return s;
    }
    GroebnerBasis gb = groebner_basis(s, MonomialOrder::grevlex(), limits);
    *nonempty = !gb.is_unit();
    return Ideal(s.ring, gb.basis());
}

CoordinatePrime project_center(const CoordinatePrime& center, const RingSpec& base_ring) {
    CoordinatePrime out;
    for (const auto& [v, c] : center.translation)
        if (base_ring.has_var(v)) out.translation.emplace(v, c);
    for (const auto& v : center.varset)
        if (base_ring.has_var(v)) out.varset.push_back(v);
    return out;
}

ProbeOutcome run_pair_probe(PairState state,
                            const std::vector<std::string>& ext_only_vars,
                            const std::vector<ProbeStep>& steps,
                            const std::vector<CoordinatePrime>& probes, const Limits& limits) {
    ProbeOutcome outcome;
    auto record = [&](std::size_t step_index) {
        ProbeStage stage;
        stage.base_stratum = stratum_of(state.base_alg, limits, &stage.base_nonempty);
        stage.ext_stratum = stratum_of(state.ext_alg, limits, &stage.ext_nonempty);
        outcome.stages.push_back(stage);
        if (outcome.verdict == ProbeOutcome::Verdict::Consistent && stage.base_nonempty &&
            !stage.ext_nonempty) {
            outcome.verdict = ProbeOutcome::Verdict::Violated;
            outcome.witness_step = step_index;
            outcome.detail = "extension stratum emptied while the base stratum persists";
        }
    };
    record(0);

    for (std::size_t i = 0; i < steps.size(); ++i) {
        const auto& step = steps[i];
        step.center.validate(state.ext_ring);
        if (!sing_contains(state.ext_alg, step.center))
            throw NotPermissible("step " + std::to_string(i + 1) +
                                 ": center is not inside the extension stratum");
        CoordinatePrime base_center = project_center(step.center, state.base_ring);
        if (base_center.varset.empty())
            throw NotPermissible("step " + std::to_string(i + 1) +
                                 ": center does not meet the base ring");
        if (!base_center.contains_var(step.chart))
            throw Error("chart variable must generate the projected center");

        BlowupChart ext_chart{state.ext_ring, step.center, step.chart};
        BlowupChart base_chart{state.base_ring, base_center, step.chart};
        state.ext_alg = weak_transform(state.ext_alg, ext_chart);
        state.base_alg = weak_transform(state.base_alg, base_chart);
        record(i + 1);
    }

    for (const auto& p : probes) {
        p.validate(state.base_ring);
        ProbeResult pr;
        pr.base_prime = p;
        pr.ext_candidate = candidate_over(p, ext_only_vars);
        pr.in_base = sing_contains(state.base_alg, pr.base_prime);
        pr.in_ext = sing_contains(state.ext_alg, pr.ext_candidate);
        pr.direction_ok = !pr.in_ext || pr.in_base;
        if (pr.in_base && !pr.in_ext && outcome.verdict == ProbeOutcome::Verdict::Consistent) {
            outcome.verdict = ProbeOutcome::Verdict::Violated;
            outcome.witness = pr.ext_candidate;
            outcome.detail = "base-stratum prime has no extension-stratum prime over it";
        }
        outcome.probes.push_back(std::move(pr));
    }
    return outcome;
}

} // namespace

ProbeOutcome strong_transversality_probe(const Tower& base, const Tower& ext,
                                         const std::vector<ProbeStep>& steps,
                                         const std::vector<CoordinatePrime>& probes,
                                         const Limits& limits) {
    if (!ext.extends(base)) throw Error("extension tower does not extend the base tower");
    PairState state;
    state.base_ring = base.full_ring();
    state.ext_ring = ext.full_ring();
    state.base_alg = diff_saturate(presentation_algebra(base).second);
    state.ext_alg = diff_saturate(presentation_algebra(ext).second);
    return run_pair_probe(std::move(state), extension_only_vars(base, ext), steps, probes, limits);
}

ProbeOutcome algebra_pair_probe(const ReesAlgebra& base_alg, const ReesAlgebra& ext_alg,
                                const std::vector<ProbeStep>& steps,
                                const std::vector<CoordinatePrime>& probes, const Limits& limits) {
    PairState state;
    state.base_ring = base_alg.ring();
    state.ext_ring = ext_alg.ring();
    state.base_alg = base_alg;
    state.ext_alg = ext_alg;
    std::vector<std::string> ext_only;
    for (const auto& v : ext_alg.ring().variables())
        if (!base_alg.ring().has_var(v)) ext_only.push_back(v);
    return run_pair_probe(std::move(state), ext_only, steps, probes, limits);
}

ConstructReport construct_extension(const Tower& base,
                                    const std::vector<std::pair<std::string, std::string>>& new_steps,
                                    std::uint32_t D, std::uint32_t n_max, const Limits& limits) {
    ConstructReport report;
    StratumReport base_stratum = max_mult_stratum(base, limits);
    if (!base_stratum.nonempty) throw Error("base stratum is empty; nothing to extend");

    report.extension = base.extended_with(new_steps);
    const RingSpec& big = report.extension.full_ring();

    // H = eliminate(Diff(presentation)) over the base S-variables
    std::vector<std::string> zvars;
    for (const auto& s : base.steps()) zvars.push_back(s.var);
    ReesAlgebra sat = diff_saturate(presentation_algebra(base).second);
    report.elimination = eliminate_algebra(sat, zvars, D, limits);

    Ideal Q = report.extension.defining_ideal();
    ReesAlgebra H = report.elimination.mapped_into(big);
    std::vector<WeightedGen> hp_gens = H.generators();
    for (const auto& [var, rel] : new_steps)
        hp_gens.push_back({Polynomial::variable(big, var), 1});
    ReesAlgebra Hp(big, hp_gens);

    report.verdict = rees_integrality_test(H, Hp, D, n_max, &Q, limits);
    report.certified = report.verdict.status == IntegralityStatus::Integral;
    report.detail = report.certified
                        ? "strongly transversal (certified): every new generator is integral "
                          "over the eliminated algebra"
                        : "not certified: some new generator lacks a monic equation within the "
                          "budget";
    return report;
}

} // namespace strata
