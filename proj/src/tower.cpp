#include "strata/tower.hpp"

#include <algorithm>

#include "strata/parse.hpp"

namespace strata {

Tower::Tower(RingSpec base_ring, Ideal base_relations,
             std::vector<std::pair<std::string, std::string>> steps_text)
    : base_ring_(std::move(base_ring)), base_relations_(std::move(base_relations)) {
    std::vector<std::string> vars = base_ring_.variables();
    for (const auto& [v, rel] : steps_text) vars.push_back(v);
    full_ring_ = RingSpec(base_ring_.characteristic(), vars);
    for (const auto& [v, rel] : steps_text)
        steps_.push_back(TowerStep{v, poly_parse(rel, full_ring_)});
    validate();
}

Tower::Tower(RingSpec base_ring, Ideal base_relations, std::vector<TowerStep> steps,
             RingSpec full_ring)
    : base_ring_(std::move(base_ring)),
      base_relations_(std::move(base_relations)),
      steps_(std::move(steps)),
      full_ring_(std::move(full_ring)) {
    validate();
}

void Tower::validate() const {
    if (base_relations_.ring != base_ring_) throw Error("base relations must live in the base ring");
    // full ring = base vars then step vars, in order
    std::vector<std::string> expect = base_ring_.variables();
    for (const auto& s : steps_) expect.push_back(s.var);
    if (full_ring_.variables() != expect || full_ring_.characteristic() != base_ring_.characteristic())
        throw Error("tower ring must list base variables then step variables");

    for (std::size_t i = 0; i < steps_.size(); ++i) {
        const auto& s = steps_[i];
        std::size_t zi = full_ring_.var_index(s.var);
        if (s.relation.ring() != full_ring_) throw Error("tower relation in wrong ring");
        if (s.relation.is_zero()) throw Error("tower relation is zero");
        std::uint32_t deg = 0;
        for (const auto& [e, c] : s.relation.terms()) deg = std::max(deg, e[zi]);
        if (deg < 1) throw Error("relation for " + s.var + " does not involve it");
        // monic: the Z^deg part is exactly 1 * Z^deg, coefficients of the
        // relation only involve earlier variables
        Exps lead(full_ring_.nvars(), 0);
        lead[zi] = deg;
        if (s.relation.coeff(lead) != Coeff(1))
            throw Error("relation for " + s.var + " is not monic of degree " + std::to_string(deg));
        for (const auto& [e, c] : s.relation.terms()) {
            if (e[zi] == deg && e != lead)
                throw Error("relation for " + s.var + " is not monic (mixed top-degree term)");
            for (std::size_t j = base_ring_.nvars() + i + 1; j < full_ring_.nvars(); ++j)
                if (e[j] != 0)
                    throw Error("relation for " + s.var + " uses a later tower variable");
        }
    }
}

std::uint32_t Tower::degree_in_z(std::size_t i) const {
    std::size_t zi = full_ring_.var_index(steps_[i].var);
    std::uint32_t deg = 0;
    for (const auto& [e, c] : steps_[i].relation.terms()) deg = std::max(deg, e[zi]);
    return deg;
}

std::uint64_t Tower::rank() const {
    std::uint64_t r = 1;
    for (std::size_t i = 0; i < steps_.size(); ++i) r *= degree_in_z(i);
    return r;
}

Ideal Tower::defining_ideal() const {
    std::vector<Polynomial> gens;
    for (const auto& g : base_relations_.generators) gens.push_back(g.mapped_into(full_ring_));
    for (const auto& s : steps_) gens.push_back(s.relation);
    return Ideal(full_ring_, std::move(gens));
}

Tower Tower::extended_with(const std::vector<std::pair<std::string, std::string>>& new_steps) const {
    std::vector<std::string> vars = full_ring_.variables();
    for (const auto& [v, rel] : new_steps) vars.push_back(v);
    RingSpec big(full_ring_.characteristic(), vars);
    std::vector<TowerStep> steps;
    for (const auto& s : steps_) steps.push_back({s.var, s.relation.mapped_into(big)});
    for (const auto& [v, rel] : new_steps) steps.push_back({v, poly_parse(rel, big)});
    return Tower(base_ring_, base_relations_, std::move(steps), big);
}

bool Tower::extends(const Tower& base) const {
    if (base.base_ring_ != base_ring_) return false;
    if (!((base.base_relations_.is_zero() && base_relations_.is_zero()) ||
          (base.base_relations_.generators.size() == base_relations_.generators.size())))
        return false;
    // every base step appears here with the same relation
    for (const auto& bs : base.steps_) {
        bool found = false;
        for (const auto& s : steps_)
            if (s.var == bs.var && s.relation == bs.relation.mapped_into(full_ring_)) {
                found = true;
                break;
            }
        if (!found) return false;
    }
    return true;
}

std::pair<RingSpec, ReesAlgebra> presentation_algebra(const Tower& t) {
    std::vector<WeightedGen> gens;
    for (std::size_t i = 0; i < t.steps().size(); ++i)
        gens.push_back({t.steps()[i].relation, t.degree_in_z(i)});
    return {t.full_ring(), ReesAlgebra(t.full_ring(), std::move(gens))};
}

StratumReport max_mult_stratum(const Tower& t, const Limits& limits) {
    if (!t.base_relations().is_zero())
        throw Error("max_mult_stratum requires a regular base (no base relations)");
    auto [ring, pres] = presentation_algebra(t);
    ReesAlgebra sat = diff_saturate(pres);
    Ideal stratum = sing_locus(sat);
    StratumReport report;
    report.presentation = sat;
    report.expected_mult = t.rank();
    if (stratum.is_zero()) {
        // no conditions: the whole space (the empty algebra / rank-1 tower)
        report.stratum_ideal = Ideal::zero(ring);
        report.nonempty = true;
    } else {
        GroebnerBasis gb = groebner_basis(stratum, MonomialOrder::grevlex(), limits);
        report.stratum_ideal = Ideal(ring, gb.basis());
        report.nonempty = !gb.is_unit();
    }
    return report;
}

bool stratum_contains(const Tower& t, const CoordinatePrime& p) {
    auto [ring, pres] = presentation_algebra(t);
    p.validate(ring);
    return sing_contains(diff_saturate(pres), p);
}

Tower tower_transform(const Tower& t, const CoordinatePrime& center,
                      const std::string& chart_var, const Limits& limits) {
    const RingSpec& ring = t.full_ring();
    center.validate(ring);
    if (!center.contains_var(chart_var)) throw Error("chart variable must belong to the center");

    BlowupChart chart{ring, center, chart_var};
    std::vector<TowerStep> steps;
    for (std::size_t i = 0; i < t.steps().size(); ++i) {
        const auto& s = t.steps()[i];
        if (s.var == chart_var)
            throw NotPermissible("chart variable " + chart_var +
                                 " breaks the tower presentation (relation for it loses monicity)");
        steps.push_back({s.var, weak_transform_generator(s.relation, t.degree_in_z(i), chart)});
    }

    Ideal base = t.base_relations();
    if (!base.is_zero()) {
        // base centers only touch base variables; transform inside the base ring
        CoordinatePrime base_center;
        base_center.translation = {};
        for (const auto& [v, c] : center.translation)
            if (t.base_ring().has_var(v)) base_center.translation.emplace(v, c);
        for (const auto& v : center.varset)
            if (t.base_ring().has_var(v)) base_center.varset.push_back(v);
        if (base_center.varset.empty()) throw Error("center misses the base ring entirely");
        if (!t.base_ring().has_var(chart_var))
            throw Error("chart variable must be a base variable when base relations are present");
        BlowupChart base_chart{t.base_ring(), base_center, chart_var};
        base = strict_transform(base, base_chart, limits);
    }
    return Tower(t.base_ring(), base, std::move(steps), ring);
}

std::string tower_to_string(const Tower& t) {
    std::string s = "Tower(";
    s += "base=[";
    for (std::size_t i = 0; i < t.base_ring().variables().size(); ++i) {
        if (i) s += ",";
        s += t.base_ring().variables()[i];
    }
    s += "]";
    if (!t.base_relations().is_zero()) {
        s += ", base_relations=[";
        for (std::size_t i = 0; i < t.base_relations().generators.size(); ++i) {
            if (i) s += "; ";
            s += poly_to_string(t.base_relations().generators[i]);
        }
        s += "]";
    }
    for (const auto& st : t.steps())
        s += ", " + st.var + ": " + poly_to_string(st.relation);
    s += ", rank=" + std::to_string(t.rank()) + ")";
    return s;
}

} // namespace strata
