#include "strata/blowup.hpp"

#include "strata/parse.hpp"

namespace strata {

std::map<std::string, Polynomial> BlowupChart::substitution() const {
    std::map<std::string, Polynomial> sub;
    Polynomial xi = Polynomial::variable(ring, chart_var);
    for (const auto& v : center.varset) {
        if (v == chart_var) continue;
        sub.emplace(v, xi * Polynomial::variable(ring, v));
    }
    return sub;
}

Polynomial BlowupChart::total_transform(const Polynomial& f) const {
    return f.translated(center.translation).substitute(substitution(), ring);
}

std::vector<BlowupChart> blowup_charts(const RingSpec& ring, const CoordinatePrime& center) {
    center.validate(ring);
    std::vector<BlowupChart> charts;
    for (const auto& v : center.varset) charts.push_back(BlowupChart{ring, center, v});
    return charts;
}

Ideal strict_transform(const Ideal& I, const BlowupChart& chart, const Limits& limits) {
    if (I.ring != chart.ring) throw Error("ring mismatch in strict transform");
    std::vector<Polynomial> total;
    for (const auto& g : I.generators) total.push_back(chart.total_transform(g));
    Ideal T(I.ring, std::move(total));
    if (T.is_zero()) return T;
    return saturate(T, chart.exceptional(), limits);
}

Polynomial weak_transform_generator(const Polynomial& f, std::uint32_t weight,
                                    const BlowupChart& chart) {
    std::uint64_t ord = order_at_coordinate_prime(f, chart.center);
    if (ord < weight)
        throw NotPermissible("center not permissible: generator " + poly_to_string(f) +
                             " has order " + std::to_string(ord) + " < weight " +
                             std::to_string(weight) + " along the center");
    Polynomial total = chart.total_transform(f);
    auto divided = total.divided_by_var_power(chart.ring.var_index(chart.chart_var), weight);
    if (!divided)
        throw NotPermissible("center not permissible: total transform of " + poly_to_string(f) +
                             " is not divisible by the exceptional divisor to the power " +
                             std::to_string(weight));
    return *divided;
}

ReesAlgebra weak_transform(const ReesAlgebra& G, const BlowupChart& chart) {
    if (G.ring() != chart.ring) throw Error("ring mismatch in weak transform");
    std::vector<WeightedGen> gens;
    for (const auto& g : G.generators())
        gens.push_back({weak_transform_generator(g.poly, g.weight, chart), g.weight});
    return ReesAlgebra(G.ring(), std::move(gens));
}

} // namespace strata
