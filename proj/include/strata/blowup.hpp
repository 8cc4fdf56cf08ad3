#pragma once

#include "strata/rees.hpp"

namespace strata {

// One affine chart of the blow-up of affine space at a coordinate center.
// Chart coordinates reuse the ambient names: in the x_i-chart the variable
// x_j stands for x_j/x_i when x_j is a center variable.
struct BlowupChart {
    RingSpec ring;
    CoordinatePrime center;
    std::string chart_var;

    // x_j -> x_i * x_j for center variables j != i.
    std::map<std::string, Polynomial> substitution() const;

    // Generator of the exceptional divisor ideal in chart coordinates.
    Polynomial exceptional() const { return Polynomial::variable(ring, chart_var); }

    // Total transform: translate the center to the origin, then substitute.
    Polynomial total_transform(const Polynomial& f) const;
};

// One chart per center variable.
std::vector<BlowupChart> blowup_charts(const RingSpec& ring, const CoordinatePrime& center);

// Total transform saturated by the exceptional divisor.
Ideal strict_transform(const Ideal& I, const BlowupChart& chart, const Limits& limits = {});

// Each generator maps to (total transform)/exceptional^weight, weight kept.
// Throws NotPermissible when some generator's order along the center is below
// its weight (the division would not be exact).
ReesAlgebra weak_transform(const ReesAlgebra& G, const BlowupChart& chart);

Polynomial weak_transform_generator(const Polynomial& f, std::uint32_t weight,
                                    const BlowupChart& chart);

} // namespace strata
