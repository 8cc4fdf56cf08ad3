#include "strata/multiplicity.hpp"

#include <algorithm>
#include <set>

#include "strata/parse.hpp"

namespace strata {

namespace {

struct SplitVars {
    std::vector<std::size_t> v; // prime variables (translated to the origin)
    std::vector<std::size_t> u; // free variables (invertible at the prime)
};

SplitVars split_vars(const RingSpec& ring, const CoordinatePrime& q) {
    SplitVars s;
    std::vector<char> in_v(ring.nvars(), 0);
    for (const auto& name : q.varset) in_v[ring.var_index(name)] = 1;
    for (std::size_t i = 0; i < ring.nvars(); ++i)
        (in_v[i] ? s.v : s.u).push_back(i);
    return s;
}

// v-part of the block-order leading exponent of each basis element. For a
// product order these generate the leading ideal over k(u)[v].
std::vector<Exps> leading_v_parts(const GroebnerBasis& gb, const SplitVars& sv) {
    OrderCmp cmp(gb.ring(), gb.order());
    std::vector<Exps> parts;
    for (const auto& g : gb.basis()) {
        const Exps& lt = g.leading_exps(cmp);
        Exps vpart(lt.size(), 0);
        for (auto i : sv.v) vpart[i] = lt[i];
        parts.push_back(std::move(vpart));
    }
    return parts;
}

// Krull dimension of the v-staircase: the largest subset S of the prime
// variables such that no leading v-monomial is supported inside S.
std::uint32_t staircase_dimension(const std::vector<Exps>& lead, const SplitVars& sv) {
    std::uint32_t best = 0;
    const std::size_t k = sv.v.size();
    for (std::uint64_t mask = 0; mask < (1ull << k); ++mask) {
        bool independent = true;
        for (const auto& m : lead) {
            if (total_degree(m) == 0) return 0; // unit leading ideal
            bool supported = true;
            for (std::size_t j = 0; j < k && supported; ++j)
                if (!((mask >> j) & 1) && m[sv.v[j]] != 0) supported = false;
            if (supported) {
                independent = false;
                break;
            }
        }
        if (independent) best = std::max<std::uint32_t>(best, __builtin_popcountll(mask));
    }
    return best;
}

// Number of v-monomials outside the leading ideal; requires a finite
// staircase (a pure power of every prime variable among the leaders).
mpz_class count_standard_monomials(const std::vector<Exps>& lead, const SplitVars& sv) {
    if (lead.empty())
        throw Error("not q-primary at the point: infinite standard-monomial count");
    for (const auto& m : lead)
        if (total_degree(m) == 0)
            throw Error("the prime does not lie on the subscheme "
                        "(a unit appears over the residue field of the free variables)");
    const std::size_t k = sv.v.size();
    std::vector<std::uint32_t> cap(k, 0);
    for (std::size_t j = 0; j < k; ++j) {
        for (const auto& m : lead) {
            bool pure = m[sv.v[j]] > 0;
            for (std::size_t l = 0; l < k && pure; ++l)
                if (l != j && m[sv.v[l]] != 0) pure = false;
            if (pure) {
                std::uint32_t e = m[sv.v[j]];
                cap[j] = cap[j] == 0 ? e : std::min(cap[j], e);
            }
        }
        if (cap[j] == 0)
            throw Error("not q-primary at the point: infinite standard-monomial count");
    }
    mpz_class count = 0;
    Exps mono(lead.empty() ? 0 : lead[0].size(), 0);
    auto rec = [&](auto&& self, std::size_t j) -> void {
        if (j == k) {
            for (const auto& m : lead)
                if (divides(m, mono)) return;
            ++count;
            return;
        }
        for (std::uint32_t e = 0; e < cap[j]; ++e) {
            mono[sv.v[j]] = e;
            self(self, j + 1);
        }
        mono[sv.v[j]] = 0;
    };
    rec(rec, 0);
    return count;
}

Ideal translated_ideal(const Ideal& I, const std::map<std::string, Coeff>& shifts) {
    std::vector<Polynomial> gens;
    for (const auto& g : I.generators) gens.push_back(g.translated(shifts));
    return Ideal(I.ring, std::move(gens));
}

} // namespace

HilbertSamuelResult multiplicity_of_ideal(const QuotientRing& R, const Ideal& a,
                                          const CoordinatePrime& q, std::uint32_t n_range,
                                          const Limits& limits) {
    q.validate(R.ring);
    if (a.ring != R.ring || R.relations.ring != R.ring)
        throw Error("ring mismatch in multiplicity oracle");
    if (a.is_zero()) throw Error("multiplicity of the zero ideal is undefined");

    SplitVars sv = split_vars(R.ring, q);
    Ideal rel = translated_ideal(R.relations, q.translation);
    Ideal at = translated_ideal(a, q.translation);

    MonomialOrder block = sv.u.empty() ? MonomialOrder::grevlex() : MonomialOrder::block(q.varset);

    std::uint32_t dim;
    if (rel.is_zero()) {
        dim = static_cast<std::uint32_t>(sv.v.size());
    } else {
        GroebnerBasis gb = groebner_basis(rel, block, limits);
        if (gb.is_unit()) throw Error("inconsistent relations (unit ideal)");
        dim = staircase_dimension(leading_v_parts(gb, sv), sv);
    }
    if (n_range < dim + 3)
        throw Error("n_range must be at least dim + 3 = " + std::to_string(dim + 3));

    HilbertSamuelResult result;
    result.dim = dim;
    for (std::uint32_t n = 1; n <= n_range; ++n) {
        Ideal target = ideal_sum(rel, ideal_power(at, n));
        GroebnerBasis gb = groebner_basis(target, block, limits);
        if (gb.is_unit())
            throw Error("the point does not lie on the subscheme (unit ideal at n = " +
                        std::to_string(n) + ")");
        result.lengths.push_back(count_standard_monomials(leading_v_parts(gb, sv), sv));
    }

    // e = d-th finite difference of the tail; the last three windows must agree.
    std::vector<mpz_class> diff = result.lengths;
    for (std::uint32_t j = 0; j < dim; ++j) {
        std::vector<mpz_class> next;
        for (std::size_t i = 0; i + 1 < diff.size(); ++i) next.push_back(diff[i + 1] - diff[i]);
        diff = std::move(next);
    }
    if (diff.size() < 3) throw Error("not yet polynomial - increase n_range");
    mpz_class e = diff.back();
    for (std::size_t i = diff.size() - 3; i < diff.size(); ++i)
        if (diff[i] != e) throw Error("not yet polynomial - increase n_range");
    if (e <= 0) throw Error("degenerate multiplicity (non-positive leading coefficient)");
    result.multiplicity = e;
    return result;
}

HilbertSamuelResult hilbert_samuel_multiplicity(const QuotientRing& R, const CoordinatePrime& q,
                                                std::uint32_t n_range, const Limits& limits) {
    q.validate(R.ring);
    // the ideal of the prime: x_v - c_v over its variable set
    std::vector<Polynomial> gens;
    for (const auto& v : q.varset) {
        Polynomial g = Polynomial::variable(R.ring, v);
        auto it = q.translation.find(v);
        if (it != q.translation.end())
            g.add_term(Exps(R.ring.nvars(), 0), R.ring.neg(it->second));
        gens.push_back(std::move(g));
    }
    return multiplicity_of_ideal(R, Ideal(R.ring, std::move(gens)), q, n_range, limits);
}

ZariskiReport zariski_check(const QuotientRing& base, const Tower& ext, const CoordinatePrime& p,
                            const std::vector<FiberPrime>& fibers, std::uint32_t n_range,
                            const Limits& limits) {
    if (ext.base_ring() != base.ring)
        throw Error("extension tower must live over the base ring");
    if (!ideal_equal(ext.base_relations(), base.relations, limits))
        throw Error("extension tower must share the base relations");
    if (fibers.empty()) throw Error("fiber data missing");

    ZariskiReport report;
    report.base_mult = hilbert_samuel_multiplicity(base, p, n_range, limits).multiplicity;
    report.rank = ext.rank();
    report.lhs = report.base_mult * static_cast<unsigned long>(report.rank);

    QuotientRing big{ext.full_ring(), ext.defining_ideal()};

    // p extended to B': x_v - c_v mapped into the big ring
    std::vector<Polynomial> pgens;
    for (const auto& v : p.varset) {
        Polynomial g = Polynomial::variable(big.ring, v);
        auto it = p.translation.find(v);
        if (it != p.translation.end())
            g.add_term(Exps(big.ring.nvars(), 0), big.ring.neg(it->second));
        pgens.push_back(std::move(g));
    }
    Ideal p_extended(big.ring, std::move(pgens));

    report.rhs = 0;
    for (const auto& fiber : fibers) {
        ZariskiReport::FiberTerm term;
        term.prime = fiber.prime;
        term.residue_degree = fiber.residue_degree;
        term.mult = hilbert_samuel_multiplicity(big, fiber.prime, n_range, limits).multiplicity;
        term.mult_extended =
            multiplicity_of_ideal(big, p_extended, fiber.prime, n_range, limits).multiplicity;
        term.chain_ok = term.mult <= term.mult_extended && term.mult_extended <= report.lhs;
        report.rhs += term.mult * static_cast<unsigned long>(term.residue_degree);
        report.fibers.push_back(std::move(term));
    }
    report.equal = (report.lhs == report.rhs);
    return report;
}

} // namespace strata
