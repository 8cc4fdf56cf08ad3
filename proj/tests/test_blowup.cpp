#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "strata/blowup.hpp"
#include "strata/parse.hpp"
#include "strata/tower.hpp"
#include "test_helpers.hpp"

using namespace strata;
using strata::testing::P;
using strata::testing::random_poly;

namespace {

const RingSpec F2_txyz(2, {"t", "x", "y", "z"});
const RingSpec F2_txy(2, {"t", "x", "y"});
const RingSpec F2_xy(2, {"x", "y"});
const RingSpec F2_x(2, {"x"});

BlowupChart chart_of(const RingSpec& ring, const CoordinatePrime& center, const std::string& v) {
    for (auto& c : blowup_charts(ring, center))
        if (c.chart_var == v) return c;
    throw Error("no such chart");
}

} // namespace

TEST_CASE("blow-up charts: shape and substitutions") {
    CoordinatePrime center{{}, {"t", "x", "y"}};
    auto charts = blowup_charts(F2_txyz, center);
    REQUIRE(charts.size() == 3);
    auto t_chart = charts[0];
    CHECK(t_chart.chart_var == "t");
    auto sub = t_chart.substitution();
    CHECK(sub.at("x") == P("t*x", F2_txyz));
    CHECK(sub.at("y") == P("t*y", F2_txyz));
    CHECK(sub.count("z") == 0);
    CHECK(t_chart.exceptional() == P("t", F2_txyz));

    // divisorial center: one chart, identity substitution
    auto single = blowup_charts(F2_x, CoordinatePrime{{}, {"x"}});
    REQUIRE(single.size() == 1);
    CHECK(single[0].substitution().empty());
    CHECK(single[0].exceptional() == P("x", F2_x));

    // second blow-up of example_7_4: center <t,y,z>, t-chart
    auto c2 = chart_of(F2_txyz, CoordinatePrime{{}, {"t", "y", "z"}}, "t");
    auto sub2 = c2.substitution();
    CHECK(sub2.at("y") == P("t*y", F2_txyz));
    CHECK(sub2.at("z") == P("t*z", F2_txyz));
    CHECK(sub2.count("x") == 0);
}

TEST_CASE("strict transform: example_7_4 equations") {
    {
        Ideal I(F2_txy, {P("y^4 - x^13", F2_txy)});
        auto chart = chart_of(F2_txy, CoordinatePrime{{}, {"t", "x", "y"}}, "t");
        Ideal S = strict_transform(I, chart);
        CHECK(ideal_equal(S, Ideal(F2_txy, {P("y^4 - t^9*x^13", F2_txy)})));
    }
    {
        Ideal I(F2_txyz, {P("z^2 - x^5", F2_txyz), P("y^4 - x^13", F2_txyz)});
        auto chart = chart_of(F2_txyz, CoordinatePrime{{}, {"t", "x", "y", "z"}}, "t");
        Ideal S = strict_transform(I, chart);
        CHECK(ideal_equal(
            S, Ideal(F2_txyz, {P("z^2 - t^3*x^5", F2_txyz), P("y^4 - t^9*x^13", F2_txyz)})));
    }
    {
        // second blow-up from the transformed equations
        Ideal I(F2_txyz, {P("z^2 - t^3*x^5", F2_txyz), P("y^4 - t^9*x^13", F2_txyz)});
        auto chart = chart_of(F2_txyz, CoordinatePrime{{}, {"t", "y", "z"}}, "t");
        Ideal S = strict_transform(I, chart);
        CHECK(ideal_equal(
            S, Ideal(F2_txyz, {P("z^2 - t*x^5", F2_txyz), P("y^4 - t^5*x^13", F2_txyz)})));
    }
}

TEST_CASE("weak transform: example_5_22") {
    ReesAlgebra G(F2_xy, {{P("x^2", F2_xy), 1}, {P("y^2 - x^3", F2_xy), 2}});
    // x-chart (the k[x, y/x] chart): y -> x*y
    auto chart = chart_of(F2_xy, CoordinatePrime{{}, {"x", "y"}}, "x");
    ReesAlgebra W = weak_transform(G, chart);
    ReesAlgebra expected(F2_xy, {{P("x", F2_xy), 1}, {P("y^2 - x", F2_xy), 2}});
    REQUIRE(W.generators().size() == 2);
    CHECK(algebra_equal_up_to(W, expected, 2));
    CHECK(W.canonicalized().generators()[0].poly == P("x", F2_xy));
    CHECK(W.canonicalized().generators()[1].poly == P("y^2 - x", F2_xy));

    // transform of the eliminated line algebra: [x^2 W] -> [x W]
    ReesAlgebra L(F2_x, {{P("x^2", F2_x), 1}});
    auto lchart = chart_of(F2_x, CoordinatePrime{{}, {"x"}}, "x");
    ReesAlgebra LW = weak_transform(L, lchart);
    REQUIRE(LW.generators().size() == 1);
    CHECK(LW.generators()[0].poly == P("x", F2_x));
}

TEST_CASE("weak transform: exact-division case and permissibility error") {
    RingSpec r(0, {"x", "y"});
    ReesAlgebra G(r, {{P("x*y + x^2", r), 1}}); // order 1 along <x>
    auto chart = chart_of(r, CoordinatePrime{{}, {"x"}}, "x");
    ReesAlgebra W = weak_transform(G, chart);
    REQUIRE(W.generators().size() == 1);
    CHECK(W.generators()[0].poly == P("y + x", r));

    ReesAlgebra bad(r, {{P("x", r), 2}}); // order 1 < weight 2
    CHECK_THROWS_AS(weak_transform(bad, chart), NotPermissible);
}

TEST_CASE("weak transform exactness on random permissible generators") {
    std::mt19937 rng(808);
    RingSpec r(0, {"x", "y"});
    auto chart = chart_of(r, CoordinatePrime{{}, {"x", "y"}}, "x");
    std::size_t xi = r.var_index("x");
    for (int rep = 0; rep < 30; ++rep) {
        // force order >= 2 at the origin by multiplying quadratics
        Polynomial f = random_poly(rng, r, 3, 2, true) * random_poly(rng, r, 3, 2, true);
        if (f.is_zero()) continue;
        std::uint32_t w = 2;
        if (order_at_coordinate_prime(f, chart.center) < w) continue;
        Polynomial g = weak_transform_generator(f, w, chart);
        Polynomial back = g * Polynomial::variable(r, "x", w);
        CHECK(back == chart.total_transform(f));
        (void)xi;
    }
}

TEST_CASE("strict transform is saturation-idempotent") {
    Ideal I(F2_txy, {P("y^4 - x^13", F2_txy)});
    auto chart = chart_of(F2_txy, CoordinatePrime{{}, {"t", "x", "y"}}, "t");
    Ideal S = strict_transform(I, chart);
    Ideal S2 = saturate(S, chart.exceptional());
    CHECK(ideal_equal(S, S2));
}

TEST_CASE("permissibility is monotone under differential saturation") {
    std::mt19937 rng(909);
    RingSpec r(2, {"x", "y"});
    CoordinatePrime origin = CoordinatePrime::origin(r);
    auto chart = chart_of(r, origin, "x");
    for (int rep = 0; rep < 20; ++rep) {
        Polynomial f = random_poly(rng, r, 4, 4, true);
        if (f.is_zero()) continue;
        std::uint64_t ord = order_at_coordinate_prime(f, origin);
        if (ord < 2) continue;
        ReesAlgebra G(r, {{f, static_cast<std::uint32_t>(ord)}});
        // the center is permissible for G; it must stay permissible after Diff
        ReesAlgebra sat = diff_saturate(G);
        for (const auto& g : sat.generators())
            CHECK(order_at_coordinate_prime(g.poly, origin) >= g.weight);
        CHECK_NOTHROW(weak_transform(sat, chart));
    }
}

TEST_CASE("chart gluing: the two transforms agree on the overlap (example_7_4)") {
    // First blow-up of X' at the origin of F2[t,x,y,z]; compare the t-chart
    // and x-chart strict transforms on their overlap by mapping the x-chart
    // ideal into t-chart coordinates (t->1/x composed with the chart maps)
    Ideal I(F2_txyz, {P("z^2 - x^5", F2_txyz), P("y^4 - x^13", F2_txyz)});
    CoordinatePrime origin{{}, {"t", "x", "y", "z"}};
    auto tchart = chart_of(F2_txyz, origin, "t");
    auto xchart = chart_of(F2_txyz, origin, "x");
    Ideal Jt = strict_transform(I, tchart);
    Ideal Jx = strict_transform(I, xchart);

    // Ambient coordinates: t-chart point (t,x,y,z) -> (t, tx, ty, tz);
    // x-chart point (T,X,Y,Z) -> (XT, X, XY, XZ). Equating gives
    // T = 1/x, X = tx, Y = y/x, Z = z/x. An x-chart polynomial g maps to
    // x^deg * g(1/x, tx, y/x, z/x), a t-chart polynomial.
    auto to_t_chart = [&](const Polynomial& g) {
        std::size_t it = F2_txyz.var_index("t"), ix = F2_txyz.var_index("x");
        std::size_t iy = F2_txyz.var_index("y"), iz = F2_txyz.var_index("z");
        std::int64_t worst = 0;
        for (const auto& [e, c] : g.terms()) {
            std::int64_t xpow = -static_cast<std::int64_t>(e[it]) + e[ix] -
                                static_cast<std::int64_t>(e[iy]) - static_cast<std::int64_t>(e[iz]);
            worst = std::min(worst, xpow);
        }
        Polynomial out(F2_txyz);
        for (const auto& [e, c] : g.terms()) {
            std::int64_t xpow = -static_cast<std::int64_t>(e[it]) + e[ix] -
                                static_cast<std::int64_t>(e[iy]) - static_cast<std::int64_t>(e[iz]);
            Exps m(4, 0);
            m[it] = e[ix]; // X = t*x contributes t^e_X
            m[ix] = static_cast<std::uint32_t>(xpow - worst);
            m[iy] = e[iy];
            m[iz] = e[iz];
            out.add_term(m, c);
        }
        return out;
    };

    // overlap = localization at x (t-chart side); membership after saturating by x
    Ideal Jt_sat = saturate(Jt, P("x", F2_txyz));
    auto gb_t = groebner_basis(Jt_sat);
    for (const auto& g : Jx.generators) CHECK(ideal_membership(to_t_chart(g), gb_t));

    // and the symmetric direction
    auto to_x_chart = [&](const Polynomial& g) {
        std::size_t it = F2_txyz.var_index("t"), ix = F2_txyz.var_index("x");
        std::size_t iy = F2_txyz.var_index("y"), iz = F2_txyz.var_index("z");
        std::int64_t worst = 0;
        for (const auto& [e, c] : g.terms()) {
            std::int64_t tpow = -static_cast<std::int64_t>(e[ix]) + e[it] -
                                static_cast<std::int64_t>(e[iy]) - static_cast<std::int64_t>(e[iz]);
            worst = std::min(worst, tpow);
        }
        Polynomial out(F2_txyz);
        for (const auto& [e, c] : g.terms()) {
            std::int64_t tpow = -static_cast<std::int64_t>(e[ix]) + e[it] -
                                static_cast<std::int64_t>(e[iy]) - static_cast<std::int64_t>(e[iz]);
            Exps m(4, 0);
            m[ix] = e[it];
            m[it] = static_cast<std::uint32_t>(tpow - worst);
            m[iy] = e[iy];
            m[iz] = e[iz];
            out.add_term(m, c);
        }
        return out;
    };
    Ideal Jx_sat = saturate(Jx, P("t", F2_txyz));
    auto gb_x = groebner_basis(Jx_sat);
    for (const auto& g : Jt.generators) CHECK(ideal_membership(to_x_chart(g), gb_x));
}

TEST_CASE("tower transform: example_7_4 blow-up sequence") {
    RingSpec S(2, {"t", "x"});
    Tower Xp(S, Ideal::zero(S), {{"z", "z^2 - x^5"}, {"y", "y^4 - x^13"}});
    CHECK(Xp.rank() == 8);

    CoordinatePrime origin{{}, {"t", "x", "z", "y"}};
    Tower X1 = tower_transform(Xp, origin, "t");
    CHECK(X1.steps()[0].relation == P("z^2 - t^3*x^5", X1.full_ring()));
    CHECK(X1.steps()[1].relation == P("y^4 - t^9*x^13", X1.full_ring()));
    CHECK(X1.rank() == 8);

    CoordinatePrime second{{}, {"t", "y", "z"}};
    Tower X2 = tower_transform(X1, second, "t");
    CHECK(X2.steps()[0].relation == P("z^2 - t*x^5", X2.full_ring()));
    CHECK(X2.steps()[1].relation == P("y^4 - t^5*x^13", X2.full_ring()));
}

TEST_CASE("tower transform: trivial tower and base relations") {
    RingSpec S(0, {"u", "v"});
    Tower trivial(S, Ideal(S, {P("v^2 - u^3", S)}), {});
    CHECK(trivial.rank() == 1);
    Tower moved = tower_transform(trivial, CoordinatePrime{{}, {"u", "v"}}, "u");
    CHECK(ideal_equal(moved.base_relations(), Ideal(S, {P("v^2 - u", S)})));
}

TEST_CASE("tower transform: chart on a tower variable is rejected") {
    RingSpec S(2, {"t", "x"});
    Tower X(S, Ideal::zero(S), {{"y", "y^4 - x^13"}});
    CoordinatePrime origin{{}, {"t", "x", "y"}};
    CHECK_THROWS_AS(tower_transform(X, origin, "y"), NotPermissible);
}
