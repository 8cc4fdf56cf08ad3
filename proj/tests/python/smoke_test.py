"""Smoke tests for the pystrata module: parse, Groebner, saturation,
blow-ups, the multiplicity oracle, and the bundled scenarios."""

import os
import sys

sys.path.insert(0, os.environ.get("PYSTRATA_DIR", "build"))

import pystrata as st  # noqa: E402

SCENARIOS = os.environ.get("STRATA_SCENARIO_DIR", "scenarios")


def test_parse_and_arithmetic():
    ring = st.RingSpec(0, ["t", "x", "y"])
    f = st.parse("y^4 - x^13", ring)
    assert str(f) == "-x^13 + y^4"
    assert (f - f).is_zero
    f2 = st.parse("y^2 - x^3", st.RingSpec(2, ["x", "y"]))
    assert f2 == st.parse("y^2 + x^3", st.RingSpec(2, ["x", "y"]))


def test_groebner_and_membership():
    ring = st.RingSpec(0, ["x", "y"])
    I = st.ideal(ring, ["y^2 - x^3", "x"])
    gb = st.groebner_basis(I)
    assert len(gb.generators) == 2
    assert st.ideal_membership(st.parse("y^2", ring), I)
    assert not st.ideal_membership(st.parse("y", ring), I)
    E = st.eliminate(st.ideal(ring, ["x^4", "y^2 - x^3"]), ["y"])
    assert [str(g) for g in E.generators] == ["x^4"]


def test_diff_saturation_example_8_5():
    ring = st.RingSpec(0, ["x", "T"])
    G = st.algebra(ring, [("T^3 + x^3*T + x^7", 3)])
    sat = st.diff_saturate(G)
    expected = st.algebra(ring, [("T", 1), ("x^2", 1), ("x^3", 2)])
    assert st.algebra_equal_up_to(sat, expected, 3)
    H = st.eliminate_algebra(sat, ["T"], 3)
    expected_H = st.algebra(st.RingSpec(0, ["x"]), [("x^2", 1), ("x^3", 2)])
    assert st.algebra_equal_up_to(H, expected_H, 3)
    assert st.tau_at_point(sat, st.prime(ring, ["x", "T"])) == 1


def test_example_5_22_blowup_split():
    ring = st.RingSpec(2, ["x", "y"])
    G2 = st.algebra(ring, [("x^2", 1), ("y^2 - x^3", 2)])
    chart = st.blowup_chart(ring, st.prime(ring, ["x", "y"]), "x")
    transformed = st.weak_transform(G2, chart)
    sing = st.sing_locus(transformed)
    assert [str(g) for g in st.groebner_basis(sing).generators] == ["1"]

    line = st.RingSpec(2, ["x"])
    G1 = st.algebra(line, [("x^2", 1)])
    lchart = st.blowup_chart(line, st.prime(line, ["x"]), "x")
    moved = st.weak_transform(G1, lchart)
    assert not st.groebner_basis(st.sing_locus(moved)).is_zero
    assert st.sing_contains(moved, st.prime(line, ["x"]))


def test_towers_and_multiplicity_example_7_4():
    X = st.tower(2, ["t", "x"], [("y", "y^4 - x^13")])
    Xp = st.tower(2, ["t", "x"], [("z", "z^2 - x^5"), ("y", "y^4 - x^13")])
    assert X.rank == 4 and Xp.rank == 8

    sx = st.max_mult_stratum(X)
    assert sx["nonempty"] and sx["expected_mult"] == 4
    origin = st.prime(X.full_ring, ["t", "x", "y"])
    assert st.stratum_contains(X, origin)

    r = st.hilbert_samuel_multiplicity(
        st.RingSpec(0, ["x", "y"]), ["y^2 - x^3"], st.prime(st.RingSpec(0, ["x", "y"]), ["x", "y"]), 6
    )
    assert r["multiplicity"] == 2 and r["lengths"] == [1, 3, 5, 7, 9, 11]

    z = st.zariski_check(
        st.RingSpec(0, ["x"]), [], st.tower(0, ["x"], [("y", "y^2 - x^3")]),
        st.prime(st.RingSpec(0, ["x"]), ["x"]),
        [(st.prime(st.tower(0, ["x"], [("y", "y^2 - x^3")]).full_ring, ["x", "y"]), 1)], 6,
    )
    assert z["equal"] and z["lhs"] == 2

    probe = st.strong_transversality_probe(
        X, Xp,
        [(st.prime(Xp.full_ring, ["t", "x", "z", "y"]), "t"),
         (st.prime(Xp.full_ring, ["t", "z", "y"]), "t")],
        [st.prime(X.full_ring, ["t", "y"])],
    )
    assert probe["verdict"] == "violated"
    assert probe["witness"] == "<t2,y2,z2>"


def test_integrality_and_construction():
    ring = st.RingSpec(0, ["x", "z"])
    H = st.algebra(ring, [("x^2", 1), ("x^3", 2)])
    Hp = st.algebra(ring, [("x^2", 1), ("x^3", 2), ("z", 1)])
    v = st.rees_integrality_test(H, Hp, 3, 6, ["z^2 - x^3"])
    assert v["status"] == "integral"
    assert any(eq["theta"] == "z" and eq["N"] == 2 for eq in v["equations"])

    base = st.tower(0, ["x"], [("y", "y^3 + x^3*y + x^7")])
    rep = st.construct_extension(base, [("z", "z^2 - x^3")], 3, 6)
    assert rep["certified"]
    bad = st.construct_extension(base, [("z", "z - x")], 3, 5)
    assert not bad["certified"]

    assert not st.monomial_closure_membership(
        st.parse("x", st.RingSpec(0, ["x"])), st.ideal(st.RingSpec(0, ["x"]), ["x^2"])
    )


def test_error_taxonomy():
    ring = st.RingSpec(0, ["x"])
    try:
        st.parse("x +", ring)
        raise AssertionError("expected a parse error")
    except st.PolyParseError:
        pass
    try:
        st.weak_transform(
            st.algebra(ring, [("x", 2)]), st.blowup_chart(ring, st.prime(ring, ["x"]), "x")
        )
        raise AssertionError("expected a permissibility error")
    except st.NotPermissibleError:
        pass


def test_bundled_scenarios():
    for name in ["example_7_4.json", "example_5_22.json", "example_8_5.json", "zariski_cusp.json"]:
        rc, output = st.run_scenario(os.path.join(SCENARIOS, name))
        assert rc == 0, f"{name} exited {rc}:\n{output}"
    rc, output = st.run_scenario(os.path.join(SCENARIOS, "example_7_4.json"))
    assert output.strip().endswith("strong transversality violated at <t2,y2,z2>")


if __name__ == "__main__":
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_")]
    for t in tests:
        t()
        print(f"ok {t.__name__}")
    print(f"smoke: {len(tests)} tests passed")
