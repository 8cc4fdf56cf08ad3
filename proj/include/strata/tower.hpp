#pragma once

#include "strata/blowup.hpp"
#include "strata/rees.hpp"

namespace strata {

// One step of a presented finite extension: a fresh variable with a monic
// relation of degree >= 1 in it, coefficients in the earlier variables.
struct TowerStep {
    std::string var;
    Polynomial relation; // lives in the tower's full ring
};

// A presented ring S[Z_1,...,Z_m]/(f_1(Z_1),...,f_m(Z_m)), the local shape
// of varieties and finite extensions: base variables first, then the Z
// variables in step order. Generic rank = product of the relation degrees.
class Tower {
public:
    Tower() = default;
    Tower(RingSpec base_ring, Ideal base_relations,
          std::vector<std::pair<std::string, std::string>> steps_text);
    Tower(RingSpec base_ring, Ideal base_relations, std::vector<TowerStep> steps,
          RingSpec full_ring);

    const RingSpec& base_ring() const { return base_ring_; }
    const RingSpec& full_ring() const { return full_ring_; }
    const Ideal& base_relations() const { return base_relations_; }
    const std::vector<TowerStep>& steps() const { return steps_; }

    std::uint64_t rank() const;
    std::uint32_t degree_in_z(std::size_t i) const;

    // base relations plus all step relations, in the full ring.
    Ideal defining_ideal() const;

    // Appends fresh steps (used to build extensions).
    Tower extended_with(const std::vector<std::pair<std::string, std::string>>& new_steps) const;

    // True when `other` has the same base data and a prefix-compatible
    // superset of the relations.
    bool extends(const Tower& base) const;

private:
    void validate() const;

    RingSpec base_ring_;
    Ideal base_relations_;
    std::vector<TowerStep> steps_;
    RingSpec full_ring_;
};

// Ambient polynomial ring and the Rees algebra O_V[f_1 W^{d_1}, ..., f_m W^{d_m}].
std::pair<RingSpec, ReesAlgebra> presentation_algebra(const Tower& t);

struct StratumReport {
    ReesAlgebra presentation; // diff-saturated
    Ideal stratum_ideal;
    std::uint64_t expected_mult = 1;
    bool nonempty = false;
};

// Stratum of maximum multiplicity of the presented variety: Sing of the
// saturated presentation; equals F_rank when nonempty (regular base only).
StratumReport max_mult_stratum(const Tower& t, const Limits& limits = {});

// Order test: every generator of the saturated presentation has order >= its
// weight at p.
bool stratum_contains(const Tower& t, const CoordinatePrime& p);

// Blow-up of the presented variety along a coordinate center, chartwise: the
// relations transform by weak transform, the base relations by strict
// transform. The chart variable must keep every relation monic in its Z
// variable.
Tower tower_transform(const Tower& t, const CoordinatePrime& center,
                      const std::string& chart_var, const Limits& limits = {});

std::string tower_to_string(const Tower& t);

} // namespace strata
