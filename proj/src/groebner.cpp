#include "strata/groebner.hpp"

#include <algorithm>
#include <set>

namespace strata {

Ideal::Ideal(RingSpec r, std::vector<Polynomial> gens) : ring(std::move(r)) {
    for (auto& g : gens) {
        if (g.is_zero()) continue;
        if (g.ring() != ring) throw Error("generator in wrong ring");
        generators.push_back(std::move(g));
    }
}

Ideal Ideal::mapped_into(const RingSpec& target) const {
    std::vector<Polynomial> gens;
    gens.reserve(generators.size());
    for (const auto& g : generators) gens.push_back(g.mapped_into(target));
    return Ideal(target, std::move(gens));
}

Ideal ideal_sum(const Ideal& a, const Ideal& b) {
    if (a.ring != b.ring) throw Error("ring mismatch in ideal sum");
    std::vector<Polynomial> gens = a.generators;
    gens.insert(gens.end(), b.generators.begin(), b.generators.end());
    return Ideal(a.ring, std::move(gens));
}

Ideal ideal_product(const Ideal& a, const Ideal& b) {
    if (a.ring != b.ring) throw Error("ring mismatch in ideal product");
    std::vector<Polynomial> gens;
    for (const auto& f : a.generators)
        for (const auto& g : b.generators) gens.push_back(f * g);
    return Ideal(a.ring, std::move(gens));
}

Ideal ideal_power(const Ideal& a, std::uint32_t n) {
    if (n == 0) return Ideal::unit(a.ring);
    Ideal r = a;
    for (std::uint32_t i = 1; i < n; ++i) r = ideal_product(r, a);
    return r;
}

bool GroebnerBasis::is_unit() const {
    return basis_.size() == 1 && basis_[0].is_constant() && !basis_[0].is_zero();
}

namespace {

// Working representation: terms sorted descending under the active order, so
// begin() is the leading term.
struct TermGreater {
    const OrderCmp* cmp;
    bool operator()(const Exps& a, const Exps& b) const { return cmp->greater(a, b); }
};
using WPoly = std::map<Exps, Coeff, TermGreater>;

struct Engine {
    const RingSpec& ring;
    OrderCmp cmp;
    const Limits& limits;
    long long steps = 0;

    Engine(const RingSpec& r, const MonomialOrder& order, const Limits& lim)
        : ring(r), cmp(r, order), limits(lim) {}

    void charge() {
        if (++steps > limits.gb_steps)
            throw BudgetExceeded("Groebner step budget exceeded", limits.gb_steps);
    }

    WPoly wrap(const Polynomial& p) const {
        WPoly w(TermGreater{&cmp});
        for (const auto& [e, c] : p.terms()) w.emplace(e, c);
        return w;
    }
    Polynomial unwrap(const WPoly& w) const {
        Polynomial p(ring);
        for (const auto& [e, c] : w) p.add_term(e, c);
        return p;
    }

    void add_scaled_shifted(WPoly& target, const WPoly& src, const Exps& shift, const Coeff& scale) {
        for (const auto& [e, c] : src) {
            Exps m = exp_mul(e, shift);
            Coeff v = ring.mul(c, scale);
            auto it = target.find(m);
            if (it == target.end()) {
                if (v != 0) target.emplace(std::move(m), std::move(v));
            } else {
                it->second = ring.add(it->second, v);
                if (it->second == 0) target.erase(it);
            }
        }
    }

    // Full reduction; the optional `moves` callback observes each elementary
    // step (basis index, monomial factor, coefficient factor) for tracking.
    template <typename F>
    WPoly reduce(WPoly f, const std::vector<WPoly>& basis, F&& moves) {
        WPoly out(TermGreater{&cmp});
        while (!f.empty()) {
            const Exps& lead = f.begin()->first;
            bool reduced = false;
            for (std::size_t i = 0; i < basis.size(); ++i) {
                if (basis[i].empty()) continue;
                const Exps& blt = basis[i].begin()->first;
                if (!divides(blt, lead)) continue;
                charge();
                Exps shift = exp_div(lead, blt);
                Coeff factor = ring.neg(ring.div(f.begin()->second, basis[i].begin()->second));
                add_scaled_shifted(f, basis[i], shift, factor);
                moves(i, shift, factor);
                reduced = true;
                break;
            }
            if (!reduced) {
                out.emplace(f.begin()->first, f.begin()->second);
                f.erase(f.begin());
            }
        }
        return out;
    }

    WPoly reduce_plain(WPoly f, const std::vector<WPoly>& basis) {
        return reduce(std::move(f), basis, [](std::size_t, const Exps&, const Coeff&) {});
    }

    WPoly spoly(const WPoly& a, const WPoly& b) {
        const Exps& la = a.begin()->first;
        const Exps& lb = b.begin()->first;
        Exps l = exp_lcm(la, lb);
        WPoly s(TermGreater{&cmp});
        add_scaled_shifted(s, a, exp_div(l, la), ring.inv(a.begin()->second));
        add_scaled_shifted(s, b, exp_div(l, lb), ring.neg(ring.inv(b.begin()->second)));
        return s;
    }
};

struct Pair {
    std::size_t i, j;
    Exps lcm;
    std::uint64_t deg;
};

// Normal selection strategy: smallest lcm degree first, then lcm order,
// then indices; keeps runs deterministic.
void sort_pair_queue(std::vector<Pair>& queue, const OrderCmp& cmp) {
    std::sort(queue.begin(), queue.end(), [&](const Pair& a, const Pair& b) {
        if (a.deg != b.deg) return a.deg > b.deg; // process from the back
        if (a.lcm != b.lcm) return cmp.greater(a.lcm, b.lcm);
        if (a.i != b.i) return a.i > b.i;
        return a.j > b.j;
    });
}

} // namespace

GroebnerBasis groebner_basis(const Ideal& I, const MonomialOrder& order, const Limits& limits) {
    Engine eng(I.ring, order, limits);

    std::vector<WPoly> basis;
    for (const auto& g : I.generators) {
        WPoly w = eng.reduce_plain(eng.wrap(g), basis);
        if (!w.empty()) basis.push_back(std::move(w));
    }

    std::vector<Pair> queue;
    auto push_pairs = [&](std::size_t k) {
        for (std::size_t i = 0; i < k; ++i) {
            if (basis[i].empty()) continue;
            const Exps& a = basis[i].begin()->first;
            const Exps& b = basis[k].begin()->first;
            // Buchberger's coprimality criterion
            Exps l = exp_lcm(a, b);
            if (total_degree(l) == total_degree(a) + total_degree(b)) continue;
            queue.push_back(Pair{i, k, l, total_degree(l)});
        }
        sort_pair_queue(queue, eng.cmp);
    };
    for (std::size_t k = 0; k < basis.size(); ++k) push_pairs(k);

    while (!queue.empty()) {
        Pair p = queue.back();
        queue.pop_back();
        if (basis[p.i].empty() || basis[p.j].empty()) continue;
        WPoly s = eng.spoly(basis[p.i], basis[p.j]);
        WPoly r = eng.reduce_plain(std::move(s), basis);
        if (!r.empty()) {
            basis.push_back(std::move(r));
            push_pairs(basis.size() - 1);
        }
    }

    // Minimalize: drop elements whose leading monomial is divisible by
    // another's; then reduce tails and normalize to monic.
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        if (basis[i].empty()) continue;
        bool redundant = false;
        for (std::size_t j = 0; j < basis.size(); ++j) {
            if (i == j || basis[j].empty()) continue;
            const Exps& li = basis[i].begin()->first;
            const Exps& lj = basis[j].begin()->first;
            if (divides(lj, li) && (li != lj || j < i)) {
                redundant = true;
                break;
            }
        }
        if (!redundant) keep.push_back(i);
    }

    std::vector<WPoly> minimal;
    for (auto i : keep) minimal.push_back(basis[i]);
    std::vector<WPoly> reduced;
    for (std::size_t i = 0; i < minimal.size(); ++i) {
        std::vector<WPoly> others;
        for (std::size_t j = 0; j < minimal.size(); ++j)
            if (j != i) others.push_back(minimal[j]);
        WPoly r = eng.reduce_plain(minimal[i], others);
        if (r.empty()) continue;
        Coeff lc_inv = eng.ring.inv(r.begin()->second);
        WPoly monic(TermGreater{&eng.cmp});
        for (const auto& [e, c] : r) monic.emplace(e, eng.ring.mul(c, lc_inv));
        reduced.push_back(std::move(monic));
    }
    std::sort(reduced.begin(), reduced.end(), [&](const WPoly& a, const WPoly& b) {
        return eng.cmp.greater(a.begin()->first, b.begin()->first);
    });

    std::vector<Polynomial> out;
    out.reserve(reduced.size());
    for (const auto& w : reduced) out.push_back(eng.unwrap(w));
    return GroebnerBasis(I, order, std::move(out));
}

Polynomial normal_form(const Polynomial& f, const GroebnerBasis& gb, const Limits& limits) {
    if (f.ring() != gb.ring()) throw Error("ring mismatch in normal form");
    Engine eng(gb.ring(), gb.order(), limits);
    std::vector<WPoly> basis;
    for (const auto& g : gb.basis()) basis.push_back(eng.wrap(g));
    return eng.unwrap(eng.reduce_plain(eng.wrap(f), basis));
}

bool ideal_membership(const Polynomial& f, const Ideal& I, const Limits& limits) {
    return ideal_membership(f, groebner_basis(I, MonomialOrder::grevlex(), limits), limits);
}

bool ideal_membership(const Polynomial& f, const GroebnerBasis& gb, const Limits& limits) {
    return normal_form(f, gb, limits).is_zero();
}

bool ideal_equal(const Ideal& a, const Ideal& b, const Limits& limits) {
    if (a.ring != b.ring) throw Error("ring mismatch in ideal comparison");
    GroebnerBasis ga = groebner_basis(a, MonomialOrder::grevlex(), limits);
    GroebnerBasis gb = groebner_basis(b, MonomialOrder::grevlex(), limits);
    for (const auto& f : b.generators)
        if (!ideal_membership(f, ga, limits)) return false;
    for (const auto& f : a.generators)
        if (!ideal_membership(f, gb, limits)) return false;
    return true;
}

Ideal eliminate(const Ideal& I, const std::vector<std::string>& vars, const Limits& limits) {
    for (const auto& v : vars) I.ring.var_index(v);
    if (vars.empty()) return I;
    GroebnerBasis gb = groebner_basis(I, MonomialOrder::block(vars), limits);
    std::set<std::size_t> elim_idx;
    for (const auto& v : vars) elim_idx.insert(I.ring.var_index(v));
    auto free_of = [&](const Polynomial& g) {
        for (const auto& [e, c] : g.terms())
            for (auto i : elim_idx)
                if (e[i] != 0) return false;
        return true;
    };
    std::vector<Polynomial> kept;
    for (const auto& g : gb.basis())
        if (free_of(g)) kept.push_back(g);
    return Ideal(I.ring, std::move(kept));
}

Ideal saturate(const Ideal& I, const Polynomial& f, const Limits& limits) {
    if (f.is_zero()) throw Error("saturation by the zero polynomial");
    if (f.ring() != I.ring) throw Error("ring mismatch in saturation");
    std::string aux = "_sat";
    while (I.ring.has_var(aux)) aux += "_";
    std::vector<std::string> vars = I.ring.variables();
    vars.push_back(aux);
    RingSpec big(I.ring.characteristic(), vars);

    std::vector<Polynomial> gens;
    for (const auto& g : I.generators) gens.push_back(g.mapped_into(big));
    // 1 - aux * f
    Polynomial rel = Polynomial::constant(big, Coeff(1)) -
                     Polynomial::variable(big, aux) * f.mapped_into(big);
    gens.push_back(rel);

    Ideal J(big, std::move(gens));
    Ideal elim = eliminate(J, {aux}, limits);
    std::vector<Polynomial> out;
    for (const auto& g : elim.generators) out.push_back(g.mapped_into(I.ring));
    return Ideal(I.ring, std::move(out));
}

std::uint64_t ideal_order_at_coordinate_prime(const Ideal& I, const CoordinatePrime& p) {
    if (I.is_zero()) throw Error("order of the zero ideal is undefined");
    std::uint64_t best = UINT64_MAX;
    for (const auto& g : I.generators)
        best = std::min(best, order_at_coordinate_prime(g, p));
    return best;
}

TrackedBasis::TrackedBasis(Ideal input, MonomialOrder order, const Limits& limits)
    : input_(std::move(input)), order_(std::move(order)) {
    Engine eng(input_.ring, order_, limits);
    const std::size_t n = input_.generators.size();

    std::vector<WPoly> basis;
    std::vector<std::vector<Polynomial>> reps;
    auto zero_rep = [&] {
        return std::vector<Polynomial>(n, Polynomial::zero(input_.ring));
    };

    auto tracked_reduce = [&](WPoly f, std::vector<Polynomial> rep) {
        WPoly r = eng.reduce(std::move(f), basis, [&](std::size_t i, const Exps& shift, const Coeff& factor) {
            Polynomial mult = Polynomial::monomial(input_.ring, shift, factor);
            for (std::size_t k = 0; k < n; ++k)
                rep[k] = rep[k] + mult * reps[i][k];
        });
        return std::make_pair(std::move(r), std::move(rep));
    };

    for (std::size_t g = 0; g < n; ++g) {
        auto rep = zero_rep();
        rep[g] = Polynomial::constant(input_.ring, Coeff(1));
        auto [r, rrep] = tracked_reduce(eng.wrap(input_.generators[g]), std::move(rep));
        if (!r.empty()) {
            basis.push_back(std::move(r));
            reps.push_back(std::move(rrep));
        }
    }

    std::vector<Pair> queue;
    auto push_pairs = [&](std::size_t k) {
        for (std::size_t i = 0; i < k; ++i) {
            const Exps& a = basis[i].begin()->first;
            const Exps& b = basis[k].begin()->first;
            Exps l = exp_lcm(a, b);
            if (total_degree(l) == total_degree(a) + total_degree(b)) continue;
            queue.push_back(Pair{i, k, l, total_degree(l)});
        }
        sort_pair_queue(queue, eng.cmp);
    };
    for (std::size_t k = 0; k < basis.size(); ++k) push_pairs(k);

    while (!queue.empty()) {
        Pair p = queue.back();
        queue.pop_back();
        const WPoly& a = basis[p.i];
        const WPoly& b = basis[p.j];
        const Exps& la = a.begin()->first;
        const Exps& lb = b.begin()->first;
        Exps l = exp_lcm(la, lb);
        Coeff ca = eng.ring.inv(a.begin()->second);
        Coeff cb = eng.ring.neg(eng.ring.inv(b.begin()->second));
        WPoly s(TermGreater{&eng.cmp});
        eng.add_scaled_shifted(s, a, exp_div(l, la), ca);
        eng.add_scaled_shifted(s, b, exp_div(l, lb), cb);

        auto rep = zero_rep();
        Polynomial ma = Polynomial::monomial(input_.ring, exp_div(l, la), ca);
        Polynomial mb = Polynomial::monomial(input_.ring, exp_div(l, lb), cb);
        for (std::size_t k = 0; k < n; ++k)
            rep[k] = ma * reps[p.i][k] + mb * reps[p.j][k];

        auto [r, rrep] = tracked_reduce(std::move(s), std::move(rep));
        if (!r.empty()) {
            basis.push_back(std::move(r));
            reps.push_back(std::move(rrep));
            push_pairs(basis.size() - 1);
        }
    }

    for (std::size_t i = 0; i < basis.size(); ++i) {
        basis_.push_back(eng.unwrap(basis[i]));
        reps_.push_back(std::move(reps[i]));
    }
}

TrackedBasis::Division TrackedBasis::divide(const Polynomial& f, const Limits& limits) const {
    Engine eng(input_.ring, order_, limits);
    std::vector<WPoly> basis;
    for (const auto& g : basis_) basis.push_back(eng.wrap(g));

    const std::size_t n = input_.generators.size();
    std::vector<Polynomial> cof(n, Polynomial::zero(input_.ring));
    WPoly r = eng.reduce(eng.wrap(f), basis, [&](std::size_t i, const Exps& shift, const Coeff& factor) {
        // f gets factor*x^shift*basis[i] ADDED, so the certificate subtracts it.
        Polynomial mult = Polynomial::monomial(input_.ring, shift, eng.ring.neg(factor));
        for (std::size_t k = 0; k < n; ++k)
            cof[k] = cof[k] + mult * reps_[i][k];
    });
    return Division{eng.unwrap(r), std::move(cof)};
}

} // namespace strata
