#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "strata/parse.hpp"
#include "strata/transversality.hpp"
#include "test_helpers.hpp"

using namespace strata;
using strata::testing::P;

namespace {

const RingSpec QQ_xy(0, {"x", "y"});
const RingSpec S_tx(2, {"t", "x"});

Tower x_tower() { return Tower(S_tx, Ideal::zero(S_tx), {{"y", "y^4 - x^13"}}); }
Tower xp_tower() {
    return Tower(S_tx, Ideal::zero(S_tx), {{"z", "z^2 - x^5"}, {"y", "y^4 - x^13"}});
}

Tower curve_85() {
    RingSpec S(0, {"x"});
    return Tower(S, Ideal::zero(S), {{"y", "y^3 + x^3*y + x^7"}});
}

// Re-expands a certified monic equation modulo the quotient and checks both
// the vanishing and that each a_j lies in the right graded piece.
void check_equation_sound(const MonicEquation& eq, const ReesAlgebra& H, const Ideal* quotient,
                          const RingSpec& ring) {
    Polynomial sum = eq.theta.pow(eq.N);
    for (std::uint32_t j = 1; j <= eq.N; ++j)
        sum = sum + eq.coeffs[j - 1] * eq.theta.pow(eq.N - j);
    if (quotient && !quotient->is_zero()) {
        auto gb = groebner_basis(*quotient);
        CHECK(normal_form(sum, gb).is_zero());
    } else {
        CHECK(sum.is_zero());
    }
    for (std::uint32_t j = 1; j <= eq.N; ++j) {
        if (eq.coeffs[j - 1].is_zero()) continue;
        Ideal piece = graded_piece(H, j * eq.weight);
        REQUIRE_FALSE(piece.is_zero());
        CHECK(ideal_membership(eq.coeffs[j - 1], piece));
    }
}

} // namespace

TEST_CASE("monomial closure membership: LP oracle") {
    Ideal J(QQ_xy, {P("x^2", QQ_xy), P("y^2", QQ_xy)});
    CHECK(monomial_closure_membership(P("x*y", QQ_xy), J)); // midpoint of (2,0),(0,2)
    CHECK_FALSE(monomial_closure_membership(P("x", QQ_xy), Ideal(QQ_xy, {P("x^2", QQ_xy)})));
    Ideal J3(QQ_xy, {P("x^3", QQ_xy), P("y^3", QQ_xy)});
    CHECK(monomial_closure_membership(P("x^2*y^2", QQ_xy), J3));
    CHECK_FALSE(monomial_closure_membership(P("x*y", QQ_xy), J3));

    // certificates are checkable
    auto inside = monomial_closure_membership_certified(P("x*y", QQ_xy), J);
    REQUIRE(inside.inside);
    mpq_class wsum = 0;
    for (const auto& w : inside.weights) {
        CHECK(w >= 0);
        wsum += w;
    }
    CHECK(wsum == 1);

    auto outside = monomial_closure_membership_certified(P("x", QQ_xy), Ideal(QQ_xy, {P("x^2", QQ_xy)}));
    REQUIRE_FALSE(outside.inside);
    // w.point < min_i w.e_i for the separating functional
    CHECK(outside.separating.size() == 2);
    mpq_class at_point = outside.separating[0] * 1;
    mpq_class at_gen = outside.separating[0] * 2;
    CHECK(at_point < at_gen);

    CHECK_THROWS_AS(monomial_closure_membership(P("x + y", QQ_xy), J), Error);
}

TEST_CASE("reduction test: short-circuit, integral, refuted") {
    {
        Ideal J(QQ_xy, {P("x^2", QQ_xy)});
        auto v = reduction_test(J, P("x^2", QQ_xy), 3);
        CHECK(v.status == IntegralityStatus::Integral);
        CHECK(v.reduction_index == 0);
    }
    {
        Ideal J(QQ_xy, {P("x^2", QQ_xy), P("y^2", QQ_xy)});
        auto v = reduction_test(J, P("x*y", QQ_xy), 3);
        CHECK(v.status == IntegralityStatus::Integral);
        REQUIRE(v.reduction_index.has_value());
        CHECK(*v.reduction_index >= 1);
    }
    {
        Ideal J(QQ_xy, {P("x^2", QQ_xy)});
        auto v = reduction_test(J, P("x", QQ_xy), 3);
        CHECK(v.status == IntegralityStatus::Refuted);
        CHECK_FALSE(v.separating.empty());
    }
    {
        // non-monomial inconclusive case: x over <x^2 - y^3> has no small
        // reduction and no monomial refutation
        Ideal J(QQ_xy, {P("x^2 - y^3", QQ_xy)});
        auto v = reduction_test(J, P("x", QQ_xy), 2);
        CHECK(v.status == IntegralityStatus::Inconclusive);
    }
}

TEST_CASE("agreement: reduction test vs Newton polyhedron on random monomial pairs") {
    std::mt19937 rng(31415);
    std::uniform_int_distribution<std::uint32_t> expd(0, 4);
    int budget_failures = 0;
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<Polynomial> gens;
        for (int g = 0; g < 2; ++g) {
            Exps e{expd(rng), expd(rng)};
            if (total_degree(e) == 0) e[0] = 1;
            gens.push_back(Polynomial::monomial(QQ_xy, e, Coeff(1)));
        }
        Exps te{expd(rng), expd(rng)};
        Polynomial theta = Polynomial::monomial(QQ_xy, te, Coeff(1));
        Ideal J(QQ_xy, gens);

        bool oracle = monomial_closure_membership(theta, J);
        auto v = reduction_test(J, theta, 6);
        if (oracle) {
            // soundness direction: never refuted when inside; completeness is
            // budgeted, and the bundled suite must have no budget failures
            CHECK(v.status != IntegralityStatus::Refuted);
            if (v.status != IntegralityStatus::Integral) ++budget_failures;
        } else {
            CHECK(v.status == IntegralityStatus::Refuted);
        }
    }
    CHECK(budget_failures == 0);
}

TEST_CASE("rees integrality: example_7_4 restricted algebras") {
    RingSpec Vp(2, {"t", "x", "y", "z"});
    Ideal IXp(Vp, {P("z^2 - x^5", Vp), P("y^4 - x^13", Vp)});
    ReesAlgebra H(Vp, {{P("x^12", Vp), 3}});
    ReesAlgebra Hp(Vp, {{P("x^4", Vp), 1}});
    auto v = rees_integrality_test(H, Hp, 4, 6, &IXp);
    CHECK(v.status == IntegralityStatus::Integral);
    REQUIRE(v.equations.size() == 1);
    CHECK(v.equations[0].N == 3);
    check_equation_sound(v.equations[0], H, &IXp, Vp);
}

TEST_CASE("rees integrality: example_8_5 and the trivial case") {
    RingSpec R(0, {"x", "z"});
    Ideal Q(R, {P("z^2 - x^3", R)});
    ReesAlgebra H(R, {{P("x^2", R), 1}, {P("x^3", R), 2}});
    std::vector<WeightedGen> hp = H.generators();
    hp.push_back({P("z", R), 1});
    ReesAlgebra Hp(R, hp);
    auto v = rees_integrality_test(H, Hp, 3, 6, &Q);
    CHECK(v.status == IntegralityStatus::Integral);
    // the fresh generator z W is certified with N = 2: z^2 - x^3 = 0
    bool found = false;
    for (const auto& eq : v.equations) {
        check_equation_sound(eq, H, &Q, R);
        if (eq.theta == P("z", R)) {
            CHECK(eq.N == 2);
            found = true;
        }
    }
    CHECK(found);

    auto trivial = rees_integrality_test(H, H, 3, 6, &Q);
    CHECK(trivial.status == IntegralityStatus::Integral);
    for (const auto& eq : trivial.equations) CHECK(eq.N == 1);
}

TEST_CASE("rees integrality: inconclusive diagnostics and precondition") {
    RingSpec R(0, {"x"});
    ReesAlgebra H(R, {{P("x^2", R), 1}});
    ReesAlgebra Hp(R, {{P("x^2", R), 1}, {P("x", R), 1}});
    auto v = rees_integrality_test(H, Hp, 2, 4);
    CHECK(v.status == IntegralityStatus::Inconclusive);
    CHECK_FALSE(v.diagnostics.empty());

    // H not contained in Hp: precondition violation
    ReesAlgebra small(R, {{P("x^5", R), 1}});
    CHECK_THROWS_AS(rees_integrality_test(H, small, 2, 4), Error);
}

TEST_CASE("is_transversal: example_7_4 pair, identity, and a smooth extension") {
    {
        auto rep = is_transversal(x_tower(), xp_tower());
        CHECK(rep.transversal);
        CHECK(rep.base_rank == 4);
        CHECK(rep.ext_rank == 8);
        CHECK(rep.generic_rank == 2);
        CHECK(rep.base.nonempty);
        CHECK(rep.ext.nonempty);
    }
    {
        auto rep = is_transversal(x_tower(), x_tower());
        CHECK(rep.transversal);
        CHECK(rep.generic_rank == 1);
    }
    {
        // z^2 - z - x is smooth everywhere in char 2 (D_z = 1): stratum empties
        Tower ext = x_tower().extended_with({{"z", "z^2 + z + x"}});
        auto rep = is_transversal(x_tower(), ext);
        CHECK_FALSE(rep.transversal);
        CHECK_FALSE(rep.ext.nonempty);
    }
}

TEST_CASE("condition (*): example_7_4 at the origin") {
    CoordinatePrime p = CoordinatePrime::origin(x_tower().full_ring());
    auto rep = condition_star(x_tower(), xp_tower(), p);
    CHECK(rep.uniqueness);
    CHECK(rep.rationality);
    CHECK(rep.reduction == IntegralityStatus::Integral);
    CHECK(rep.holds);
}

TEST_CASE("condition (*): rank-1 identity extension") {
    CoordinatePrime p = CoordinatePrime::origin(x_tower().full_ring());
    auto rep = condition_star(x_tower(), x_tower(), p);
    CHECK(rep.uniqueness);
    CHECK(rep.rationality);
    CHECK(rep.reduction == IntegralityStatus::Integral);
    CHECK(rep.holds);
}

TEST_CASE("condition (*): fails at the second blow-up of example_7_4") {
    Tower X2(S_tx, Ideal::zero(S_tx), {{"y", "y^4 - t^5*x^13"}});
    Tower X2p(S_tx, Ideal::zero(S_tx), {{"z", "z^2 - t*x^5"}, {"y", "y^4 - t^5*x^13"}});
    CoordinatePrime p{{}, {"t", "y"}};
    auto rep = condition_star(X2, X2p, p);
    CHECK(rep.uniqueness);
    CHECK(rep.rationality);
    CHECK(rep.reduction == IntegralityStatus::Refuted);
    CHECK(rep.reduction_by_multiplicity);
    REQUIRE(rep.mult_small.has_value());
    REQUIRE(rep.mult_big.has_value());
    CHECK(*rep.mult_small != *rep.mult_big);
    CHECK_FALSE(rep.holds);
}

TEST_CASE("strong transversality probe: example_7_4 sequence is violated") {
    std::vector<ProbeStep> steps{
        {CoordinatePrime{{}, {"t", "x", "z", "y"}}, "t"},
        {CoordinatePrime{{}, {"t", "z", "y"}}, "t"},
    };
    std::vector<CoordinatePrime> probes{CoordinatePrime{{}, {"t", "y"}}};
    auto out = strong_transversality_probe(x_tower(), xp_tower(), steps, probes);
    CHECK(out.verdict == ProbeOutcome::Verdict::Violated);
    REQUIRE(out.witness.has_value());
    // witness prime is <t, y, z>
    std::set<std::string> w(out.witness->varset.begin(), out.witness->varset.end());
    CHECK(w == std::set<std::string>{"t", "y", "z"});
    REQUIRE(out.probes.size() == 1);
    CHECK(out.probes[0].in_base);
    CHECK_FALSE(out.probes[0].in_ext);
    CHECK(out.probes[0].direction_ok);
    // the always-true direction held at every recorded stage
    for (const auto& st : out.stages) CHECK((st.ext_nonempty ? st.base_nonempty : true));
}

TEST_CASE("strong transversality probe: empty step list is consistent") {
    auto out = strong_transversality_probe(x_tower(), xp_tower(), {},
                                           {CoordinatePrime::origin(x_tower().full_ring())});
    CHECK(out.verdict == ProbeOutcome::Verdict::Consistent);
    REQUIRE(out.probes.size() == 1);
    CHECK(out.probes[0].in_base);
    CHECK(out.probes[0].in_ext);
}

TEST_CASE("strong transversality probe: example_5_22 algebra pair") {
    RingSpec F2xy(2, {"x", "y"});
    RingSpec F2x(2, {"x"});
    ReesAlgebra ext(F2xy, {{P("x^2", F2xy), 1}, {P("y^2 - x^3", F2xy), 2}});
    ReesAlgebra base(F2x, {{P("x^2", F2x), 1}});
    std::vector<ProbeStep> steps{{CoordinatePrime{{}, {"x", "y"}}, "x"}};
    auto out = algebra_pair_probe(base, ext, steps, {});
    CHECK(out.verdict == ProbeOutcome::Verdict::Violated);
    REQUIRE(out.stages.size() == 2);
    CHECK(out.stages[1].base_nonempty);
    CHECK_FALSE(out.stages[1].ext_nonempty);
}

TEST_CASE("construct extension: example_8_5 certification") {
    auto rep = construct_extension(curve_85(), {{"z", "z^2 - x^3"}}, 3, 6);
    CHECK(rep.certified);
    CHECK(algebra_equal_up_to(rep.elimination,
                              ReesAlgebra(RingSpec(0, {"x"}),
                                          {{P("x^2", RingSpec(0, {"x"})), 1},
                                           {P("x^3", RingSpec(0, {"x"})), 2}}),
                              3));
    // soundness of the certifying equations in the extension quotient
    Ideal Q = rep.extension.defining_ideal();
    ReesAlgebra H = rep.elimination.mapped_into(rep.extension.full_ring());
    for (const auto& eq : rep.verdict.equations)
        check_equation_sound(eq, H, &Q, rep.extension.full_ring());
}

TEST_CASE("construct extension: refused and trivially certified relations") {
    {
        // z - x: the candidate z W would need x integral over <x^2>; the
        // Newton-polyhedron oracle refutes that, so certification must fail
        RingSpec R(0, {"x"});
        CHECK_FALSE(monomial_closure_membership(P("x", R), Ideal(R, {P("x^2", R)})));
        auto rep = construct_extension(curve_85(), {{"z", "z - x"}}, 3, 5);
        CHECK_FALSE(rep.certified);
        CHECK(rep.verdict.status == IntegralityStatus::Inconclusive);
    }
    {
        auto rep = construct_extension(curve_85(), {{"z", "z^2 - x^4"}}, 3, 6);
        CHECK(rep.certified);
        bool found = false;
        for (const auto& eq : rep.verdict.equations)
            if (eq.N == 2 && eq.theta == Polynomial::variable(rep.extension.full_ring(), "z"))
                found = true;
        CHECK(found);
    }
    {
        RingSpec S(0, {"x"});
        Tower smooth(S, Ideal::zero(S), {{"y", "y^2 - x"}});
        CHECK_THROWS_AS(construct_extension(smooth, {{"z", "z^2 - x^3"}}, 3, 5), Error);
    }
}

TEST_CASE("condition (*) direction: stratum membership implies all three flags") {
    // at every bundled probe point inside the extension stratum, (*) holds
    struct Case {
        Tower base, ext;
        CoordinatePrime p;
    };
    std::vector<Case> cases;
    cases.push_back({x_tower(), xp_tower(), CoordinatePrime::origin(x_tower().full_ring())});
    Tower X2(S_tx, Ideal::zero(S_tx), {{"y", "y^4 - t^5*x^13"}});
    Tower X2p(S_tx, Ideal::zero(S_tx), {{"z", "z^2 - t*x^5"}, {"y", "y^4 - t^5*x^13"}});
    cases.push_back({X2, X2p, CoordinatePrime{{}, {"t", "y"}}});
    for (const auto& c : cases) {
        std::vector<std::string> ext_only;
        for (const auto& s : c.ext.steps()) {
            bool in_base = false;
            for (const auto& bs : c.base.steps())
                if (bs.var == s.var) in_base = true;
            if (!in_base) ext_only.push_back(s.var);
        }
        CoordinatePrime cand = c.p;
        for (const auto& v : ext_only) cand.varset.push_back(v);
        if (stratum_contains(c.ext, cand)) {
            auto rep = condition_star(c.base, c.ext, c.p);
            CHECK(rep.holds);
        }
    }
}
