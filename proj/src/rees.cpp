#include "strata/rees.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "strata/parse.hpp"

namespace strata {

ReesAlgebra::ReesAlgebra(RingSpec ring, std::vector<WeightedGen> gens) : ring_(std::move(ring)) {
    for (auto& g : gens) {
        if (g.poly.is_zero()) continue;
        if (g.weight < 1) throw Error("Rees algebra weights must be >= 1");
        if (g.poly.ring() != ring_) throw Error("Rees generator in wrong ring");
        gens_.push_back(std::move(g));
    }
}

ReesAlgebra ReesAlgebra::canonicalized() const {
    std::vector<WeightedGen> gens = gens_;
    std::sort(gens.begin(), gens.end(), [](const WeightedGen& a, const WeightedGen& b) {
        if (a.weight != b.weight) return a.weight < b.weight;
        return poly_to_string(a.poly) < poly_to_string(b.poly);
    });
    gens.erase(std::unique(gens.begin(), gens.end(),
                           [](const WeightedGen& a, const WeightedGen& b) {
                               return a.weight == b.weight && a.poly == b.poly;
                           }),
               gens.end());
    return ReesAlgebra(ring_, std::move(gens));
}

std::uint32_t ReesAlgebra::weight_lcm() const {
    std::uint32_t l = 1;
    for (const auto& g : gens_) l = static_cast<std::uint32_t>(std::lcm<std::uint64_t>(l, g.weight));
    return l;
}

ReesAlgebra ReesAlgebra::mapped_into(const RingSpec& target) const {
    std::vector<WeightedGen> gens;
    gens.reserve(gens_.size());
    for (const auto& g : gens_) gens.push_back({g.poly.mapped_into(target), g.weight});
    return ReesAlgebra(target, std::move(gens));
}

Ideal graded_piece(const ReesAlgebra& G, std::uint32_t n) {
    if (n == 0) return Ideal::unit(G.ring());
    const auto& gens = G.generators();
    std::vector<Polynomial> products;

    // enumerate exponent tuples a with sum a_i * weight_i = n
    std::vector<std::uint32_t> a(gens.size(), 0);
    auto rec = [&](auto&& self, std::size_t i, std::uint32_t left) -> void {
        if (i == gens.size()) {
            if (left != 0) return;
            Polynomial prod = Polynomial::constant(G.ring(), Coeff(1));
            for (std::size_t k = 0; k < gens.size(); ++k)
                if (a[k] > 0) prod = prod * gens[k].poly.pow(a[k]);
            products.push_back(std::move(prod));
            return;
        }
        for (std::uint32_t cnt = 0; cnt * gens[i].weight <= left; ++cnt) {
            a[i] = cnt;
            self(self, i + 1, left - cnt * gens[i].weight);
        }
        a[i] = 0;
    };
    rec(rec, 0, n);
    return Ideal(G.ring(), std::move(products));
}

std::vector<Exps> enumerate_alphas(std::size_t nvars, std::uint32_t max_total,
                                   const std::vector<std::size_t>& support) {
    std::vector<Exps> out;
    Exps cur(nvars, 0);
    auto rec = [&](auto&& self, std::size_t si, std::uint32_t left) -> void {
        if (si == support.size()) {
            if (total_degree(cur) >= 1) out.push_back(cur);
            return;
        }
        for (std::uint32_t d = 0; d <= left; ++d) {
            cur[support[si]] = d;
            self(self, si + 1, left - d);
        }
        cur[support[si]] = 0;
    };
    if (max_total >= 1) rec(rec, 0, max_total);
    return out;
}

Ideal sing_locus(const ReesAlgebra& G) {
    std::vector<Polynomial> gens;
    std::vector<std::size_t> all(G.ring().nvars());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    for (const auto& g : G.generators()) {
        gens.push_back(g.poly);
        for (const auto& alpha : enumerate_alphas(G.ring().nvars(), g.weight - 1, all)) {
            Polynomial d = hasse_derivative(g.poly, alpha);
            if (!d.is_zero()) gens.push_back(std::move(d));
        }
    }
    return Ideal(G.ring(), std::move(gens));
}

bool sing_contains(const ReesAlgebra& G, const CoordinatePrime& p) {
    for (const auto& g : G.generators()) {
        Polynomial t = g.poly.translated(p.translation);
        if (t.is_zero()) continue; // zero has infinite order
        if (order_at_coordinate_prime(g.poly, p) < g.weight) return false;
    }
    return true;
}

namespace {

ReesAlgebra saturate_with_support(const ReesAlgebra& G, const std::vector<std::size_t>& support) {
    std::vector<WeightedGen> gens = G.generators();
    for (const auto& g : G.generators()) {
        for (const auto& alpha : enumerate_alphas(G.ring().nvars(), g.weight - 1, support)) {
            std::uint32_t drop = static_cast<std::uint32_t>(total_degree(alpha));
            Polynomial d = hasse_derivative(g.poly, alpha);
            if (!d.is_zero()) gens.push_back({std::move(d), g.weight - drop});
        }
    }
    return ReesAlgebra(G.ring(), std::move(gens)).canonicalized();
}

} // namespace

ReesAlgebra diff_saturate(const ReesAlgebra& G) {
    std::vector<std::size_t> all(G.ring().nvars());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    return saturate_with_support(G, all);
}

ReesAlgebra relative_diff_saturate(const ReesAlgebra& G, const std::vector<std::string>& zvars) {
    std::vector<std::size_t> support;
    for (const auto& v : zvars) support.push_back(G.ring().var_index(v));
    if (support.empty()) return G;
    return saturate_with_support(G, support);
}

bool algebra_contained_up_to(const ReesAlgebra& G, const ReesAlgebra& H, std::uint32_t D,
                             const Ideal* quotient, const Limits& limits) {
    if (G.ring() != H.ring()) throw Error("ring mismatch in algebra comparison");
    for (std::uint32_t n = 1; n <= D; ++n) {
        Ideal gn = graded_piece(G, n);
        Ideal hn = graded_piece(H, n);
        if (quotient) hn = ideal_sum(hn, *quotient);
        if (gn.is_zero()) continue;
        GroebnerBasis hb = groebner_basis(hn, MonomialOrder::grevlex(), limits);
        for (const auto& f : gn.generators)
            if (!ideal_membership(f, hb, limits)) return false;
    }
    return true;
}

bool algebra_equal_up_to(const ReesAlgebra& G, const ReesAlgebra& H, std::uint32_t D,
                         const Ideal* quotient, const Limits& limits) {
    return algebra_contained_up_to(G, H, D, quotient, limits) &&
           algebra_contained_up_to(H, G, D, quotient, limits);
}

ReesAlgebra eliminate_algebra(const ReesAlgebra& G, const std::vector<std::string>& zvars,
                              std::uint32_t D, const Limits& limits) {
    for (const auto& v : zvars) G.ring().var_index(v);
    std::vector<std::string> keep;
    for (const auto& v : G.ring().variables())
        if (std::find(zvars.begin(), zvars.end(), v) == zvars.end()) keep.push_back(v);
    RingSpec sub = G.ring().subring(keep);

    ReesAlgebra result(sub, {});
    for (std::uint32_t n = 1; n <= D; ++n) {
        Ideal piece = graded_piece(G, n);
        if (piece.is_zero()) continue;
        Ideal elim = eliminate(piece, zvars, limits);
        if (elim.is_zero()) continue;
        Ideal have = graded_piece(result, n);
        GroebnerBasis have_gb = groebner_basis(have, MonomialOrder::grevlex(), limits);
        std::vector<WeightedGen> gens = result.generators();
        for (const auto& f : elim.generators) {
            Polynomial fs = f.mapped_into(sub);
            if (ideal_membership(fs, have_gb, limits)) continue; // redundant
            gens.push_back({fs, n});
        }
        result = ReesAlgebra(sub, std::move(gens));
    }
    return result.canonicalized();
}

std::uint32_t tau_at_point(const ReesAlgebra& G, const CoordinatePrime& p) {
    p.validate(G.ring());
    if (p.varset.size() != G.ring().nvars())
        throw Error("tau requires a rational closed point (all variables in the prime)");
    ReesAlgebra sat = diff_saturate(G);
    if (!sing_contains(sat, p)) throw Error("point not in Sing(G)");

    // linear parts of weight-1 generators at the translated point
    const RingSpec& ring = G.ring();
    std::vector<std::vector<Coeff>> rows;
    for (const auto& g : sat.generators()) {
        if (g.weight != 1) continue;
        Polynomial lin = g.poly.translated(p.translation).homogeneous_component(1);
        if (lin.is_zero()) continue;
        std::vector<Coeff> row(ring.nvars(), Coeff(0));
        for (const auto& [e, c] : lin.terms())
            for (std::size_t i = 0; i < e.size(); ++i)
                if (e[i] == 1) row[i] = c;
        rows.push_back(std::move(row));
    }
    // rank by Gaussian elimination
    std::uint32_t rank = 0;
    std::size_t col = 0;
    while (col < ring.nvars() && rank < rows.size()) {
        std::size_t piv = rank;
        while (piv < rows.size() && rows[piv][col] == 0) ++piv;
        if (piv == rows.size()) {
            ++col;
            continue;
        }
        std::swap(rows[rank], rows[piv]);
        Coeff inv = ring.inv(rows[rank][col]);
        for (std::size_t j = col; j < ring.nvars(); ++j)
            rows[rank][j] = ring.mul(rows[rank][j], inv);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == rank || rows[i][col] == 0) continue;
            Coeff f = rows[i][col];
            for (std::size_t j = col; j < ring.nvars(); ++j)
                rows[i][j] = ring.sub(rows[i][j], ring.mul(f, rows[rank][j]));
        }
        ++rank;
        ++col;
    }
    return rank;
}

ReesAlgebra restrict_to_subscheme(const ReesAlgebra& G, const Ideal& IX, const Limits& limits) {
    if (IX.ring != G.ring()) throw Error("ring mismatch in restriction");
    if (IX.is_zero()) return G;
    GroebnerBasis gb = groebner_basis(IX, MonomialOrder::grevlex(), limits);
    std::vector<WeightedGen> gens;
    for (const auto& g : G.generators()) {
        Polynomial r = normal_form(g.poly, gb, limits);
        if (!r.is_zero()) gens.push_back({std::move(r), g.weight});
    }
    return ReesAlgebra(G.ring(), std::move(gens));
}

ReesAlgebra affine_line_pullback(const ReesAlgebra& G, const std::string& new_var) {
    if (G.ring().has_var(new_var)) throw Error("pullback variable already in the ring: " + new_var);
    std::vector<std::string> vars = G.ring().variables();
    vars.push_back(new_var);
    return G.mapped_into(RingSpec(G.ring().characteristic(), vars));
}

std::string rees_to_string(const ReesAlgebra& G) {
    ReesAlgebra c = G.canonicalized();
    std::string s = "[";
    bool first = true;
    for (const auto& g : c.generators()) {
        if (!first) s += ", ";
        first = false;
        s += "(" + poly_to_string(g.poly) + ")*W^" + std::to_string(g.weight);
    }
    s += "]";
    return s;
}

} // namespace strata
