#pragma once

#include <vector>

#include <gmpxx.h>

#include "strata/polynomial.hpp"

namespace strata {

// Exact rational linear programming, two-phase simplex with Bland's rule.
// Solves min c.x subject to A x = b, x >= 0.
struct LPOutcome {
    enum class Status { Optimal, Infeasible, Unbounded } status;
    std::vector<mpq_class> x;
    mpq_class objective;
};

LPOutcome solve_lp(const std::vector<std::vector<mpq_class>>& A, const std::vector<mpq_class>& b,
                   const std::vector<mpq_class>& c);

// Membership of an exponent vector in the Newton polyhedron
// conv(generators) + R_{>=0}^n, decided exactly. Inside comes with convex
// weights; outside with a separating functional w >= 0 such that
// w.point < min_i w.generator_i.
struct NewtonMembership {
    bool inside = false;
    std::vector<mpq_class> weights;     // inside: one weight per generator
    std::vector<mpq_class> separating;  // outside: one entry per variable
};

NewtonMembership newton_polyhedron_membership(const Exps& point, const std::vector<Exps>& generators);

} // namespace strata
