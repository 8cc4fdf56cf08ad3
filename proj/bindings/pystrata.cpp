#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "strata/parse.hpp"
#include "strata/scenario.hpp"

namespace py = pybind11;
using namespace strata;

namespace {

CoordinatePrime make_prime(const RingSpec& ring, const std::vector<std::string>& vars,
                           const std::map<std::string, std::string>& translate) {
    CoordinatePrime p;
    p.varset = vars;
    for (const auto& [k, v] : translate) p.translation.emplace(k, coeff_parse(v, ring));
    p.validate(ring);
    return p;
}

ReesAlgebra make_algebra(const RingSpec& ring,
                         const std::vector<std::pair<std::string, std::uint32_t>>& gens) {
    std::vector<WeightedGen> ws;
    for (const auto& [text, w] : gens) ws.push_back({poly_parse(text, ring), w});
    return ReesAlgebra(ring, std::move(ws));
}

Ideal make_ideal(const RingSpec& ring, const std::vector<std::string>& gens) {
    std::vector<Polynomial> ps;
    for (const auto& g : gens) ps.push_back(poly_parse(g, ring));
    return Ideal(ring, std::move(ps));
}

std::string dump(const Json& j) { return j.dump(); }

} // namespace

PYBIND11_MODULE(pystrata, m) {
    m.doc() = "exact symbolic toolkit for maximum-multiplicity strata, Rees algebras, "
              "blow-ups, and transversality of finite morphisms";

    // translators run most-recently-registered first, so the base goes first
    py::register_exception<Error>(m, "StrataError");
    py::register_exception<BudgetExceeded>(m, "BudgetExceededError");
    py::register_exception<NotPermissible>(m, "NotPermissibleError");
    py::register_exception<ParseError>(m, "PolyParseError");

    py::class_<RingSpec>(m, "RingSpec")
        .def(py::init<std::uint64_t, std::vector<std::string>>(), py::arg("characteristic"),
             py::arg("variables"))
        .def_property_readonly("characteristic", &RingSpec::characteristic)
        .def_property_readonly("variables", &RingSpec::variables)
        .def("__eq__", [](const RingSpec& a, const RingSpec& b) { return a == b; })
        .def("__repr__", [](const RingSpec& r) { return dump(ring_to_json(r)); });

    py::class_<Polynomial>(m, "Polynomial")
        .def("__str__", &poly_to_string)
        .def("__repr__", &poly_to_string)
        .def("__eq__", [](const Polynomial& a, const Polynomial& b) { return a == b; })
        .def("__add__", [](const Polynomial& a, const Polynomial& b) { return a + b; })
        .def("__sub__", [](const Polynomial& a, const Polynomial& b) { return a - b; })
        .def("__mul__", [](const Polynomial& a, const Polynomial& b) { return a * b; })
        .def("__neg__", [](const Polynomial& a) { return -a; })
        .def("pow", &Polynomial::pow)
        .def_property_readonly("ring", &Polynomial::ring)
        .def_property_readonly("is_zero", &Polynomial::is_zero)
        .def_property_readonly("degree", &Polynomial::degree);

    m.def("parse", &poly_parse, py::arg("text"), py::arg("ring"),
          "parse a polynomial in the toolkit grammar");
    m.def(
        "hasse_derivative",
        [](const Polynomial& f, const std::vector<std::uint32_t>& alpha) {
            return hasse_derivative(f, alpha);
        },
        py::arg("f"), py::arg("alpha"), "divided-power derivative D_alpha");

    py::class_<CoordinatePrime>(m, "CoordinatePrime")
        .def_property_readonly("varset", [](const CoordinatePrime& p) { return p.varset; })
        .def("__repr__", [](const CoordinatePrime& p) { return dump(prime_to_json(p)); });
    m.def("prime", &make_prime, py::arg("ring"), py::arg("vars"),
          py::arg("translate") = std::map<std::string, std::string>{},
          "coordinate prime: variable subset plus optional translation");

    m.def(
        "order_at",
        [](const Polynomial& f, const CoordinatePrime& p) {
            return order_at_coordinate_prime(f, p);
        },
        py::arg("f"), py::arg("prime"));

    py::class_<Ideal>(m, "Ideal")
        .def_property_readonly("generators", [](const Ideal& I) { return I.generators; })
        .def_property_readonly("is_zero", &Ideal::is_zero)
        .def("__repr__", [](const Ideal& I) { return dump(ideal_to_json(I)); });
    m.def("ideal", &make_ideal, py::arg("ring"), py::arg("generators"));
    m.def(
        "groebner_basis",
        [](const Ideal& I) {
            auto gb = groebner_basis(I);
            return Ideal(I.ring, gb.basis());
        },
        py::arg("ideal"), "reduced Groebner basis (grevlex)");
    m.def(
        "ideal_membership", [](const Polynomial& f, const Ideal& I) { return ideal_membership(f, I); },
        py::arg("f"), py::arg("ideal"));
    m.def(
        "eliminate",
        [](const Ideal& I, const std::vector<std::string>& vars) { return eliminate(I, vars); },
        py::arg("ideal"), py::arg("vars"));
    m.def(
        "saturate", [](const Ideal& I, const Polynomial& f) { return saturate(I, f); },
        py::arg("ideal"), py::arg("f"));
    m.def(
        "ideal_order_at",
        [](const Ideal& I, const CoordinatePrime& p) {
            return ideal_order_at_coordinate_prime(I, p);
        },
        py::arg("ideal"), py::arg("prime"));

    py::class_<ReesAlgebra>(m, "ReesAlgebra")
        .def_property_readonly("ring", &ReesAlgebra::ring)
        .def("__repr__", &rees_to_string)
        .def("__str__", &rees_to_string);
    m.def("algebra", &make_algebra, py::arg("ring"), py::arg("generators"),
          "Rees algebra from (polynomial text, weight) pairs");
    m.def("graded_piece", &graded_piece, py::arg("algebra"), py::arg("degree"));
    m.def(
        "sing_locus", [](const ReesAlgebra& G) { return sing_locus(G); }, py::arg("algebra"));
    m.def(
        "sing_contains",
        [](const ReesAlgebra& G, const CoordinatePrime& p) { return sing_contains(G, p); },
        py::arg("algebra"), py::arg("prime"));
    m.def("diff_saturate", &diff_saturate, py::arg("algebra"));
    m.def("relative_diff_saturate", &relative_diff_saturate, py::arg("algebra"), py::arg("zvars"));
    m.def(
        "algebra_equal_up_to",
        [](const ReesAlgebra& a, const ReesAlgebra& b, std::uint32_t D) {
            return algebra_equal_up_to(a, b.mapped_into(a.ring()), D);
        },
        py::arg("left"), py::arg("right"), py::arg("D"));
    m.def(
        "eliminate_algebra",
        [](const ReesAlgebra& G, const std::vector<std::string>& zvars, std::uint32_t D) {
            return eliminate_algebra(G, zvars, D);
        },
        py::arg("algebra"), py::arg("zvars"), py::arg("D"));
    m.def(
        "tau_at_point",
        [](const ReesAlgebra& G, const CoordinatePrime& p) { return tau_at_point(G, p); },
        py::arg("algebra"), py::arg("prime"));
    m.def(
        "restrict_to_subscheme",
        [](const ReesAlgebra& G, const Ideal& IX) { return restrict_to_subscheme(G, IX); },
        py::arg("algebra"), py::arg("subscheme_ideal"));

    py::class_<BlowupChart>(m, "BlowupChart")
        .def_property_readonly("chart_var", [](const BlowupChart& c) { return c.chart_var; });
    m.def(
        "blowup_chart",
        [](const RingSpec& ring, const CoordinatePrime& center, const std::string& chart) {
            return BlowupChart{ring, center, chart};
        },
        py::arg("ring"), py::arg("center"), py::arg("chart"));
    m.def(
        "strict_transform",
        [](const Ideal& I, const BlowupChart& c) { return strict_transform(I, c); },
        py::arg("ideal"), py::arg("chart"));
    m.def(
        "weak_transform",
        [](const ReesAlgebra& G, const BlowupChart& c) { return weak_transform(G, c); },
        py::arg("algebra"), py::arg("chart"));

    py::class_<Tower>(m, "Tower")
        .def_property_readonly("rank", &Tower::rank)
        .def_property_readonly("full_ring", &Tower::full_ring)
        .def("__repr__", &tower_to_string);
    m.def(
        "tower",
        [](std::uint64_t characteristic, const std::vector<std::string>& base_vars,
           const std::vector<std::pair<std::string, std::string>>& steps,
           const std::vector<std::string>& base_relations) {
            RingSpec base(characteristic, base_vars);
            return Tower(base, make_ideal(base, base_relations), steps);
        },
        py::arg("characteristic"), py::arg("base_vars"), py::arg("steps"),
        py::arg("base_relations") = std::vector<std::string>{});
    m.def(
        "presentation_algebra",
        [](const Tower& t) { return presentation_algebra(t).second; }, py::arg("tower"));
    m.def(
        "max_mult_stratum",
        [](const Tower& t) {
            StratumReport r = max_mult_stratum(t);
            py::dict d;
            d["nonempty"] = r.nonempty;
            d["expected_mult"] = r.expected_mult;
            d["stratum_ideal"] = r.stratum_ideal;
            d["presentation"] = r.presentation;
            return d;
        },
        py::arg("tower"));
    m.def(
        "stratum_contains",
        [](const Tower& t, const CoordinatePrime& p) { return stratum_contains(t, p); },
        py::arg("tower"), py::arg("prime"));
    m.def(
        "tower_transform",
        [](const Tower& t, const CoordinatePrime& center, const std::string& chart) {
            return tower_transform(t, center, chart);
        },
        py::arg("tower"), py::arg("center"), py::arg("chart"));

    m.def(
        "hilbert_samuel_multiplicity",
        [](const RingSpec& ring, const std::vector<std::string>& relations,
           const CoordinatePrime& q, std::uint32_t n_range) {
            auto r = hilbert_samuel_multiplicity({ring, make_ideal(ring, relations)}, q, n_range);
            py::dict d;
            d["multiplicity"] = py::int_(py::str(r.multiplicity.get_str()));
            d["dim"] = r.dim;
            py::list lengths;
            for (const auto& l : r.lengths) lengths.append(py::int_(py::str(l.get_str())));
            d["lengths"] = lengths;
            return d;
        },
        py::arg("ring"), py::arg("relations"), py::arg("prime"), py::arg("n_range"));

    m.def(
        "zariski_check",
        [](const RingSpec& base_ring, const std::vector<std::string>& base_relations,
           const Tower& ext, const CoordinatePrime& p,
           const std::vector<std::pair<CoordinatePrime, std::uint32_t>>& fibers,
           std::uint32_t n_range) {
            std::vector<FiberPrime> fp;
            for (const auto& [prime, rd] : fibers) fp.push_back({prime, rd});
            QuotientRing base{base_ring, make_ideal(base_ring, base_relations)};
            auto rep = zariski_check(base, ext, p, fp, n_range);
            py::dict d;
            d["lhs"] = py::int_(py::str(rep.lhs.get_str()));
            d["rhs"] = py::int_(py::str(rep.rhs.get_str()));
            d["equal"] = rep.equal;
            d["rank"] = rep.rank;
            return d;
        },
        py::arg("base_ring"), py::arg("base_relations"), py::arg("ext"), py::arg("prime"),
        py::arg("fibers"), py::arg("n_range") = 8);

    m.def(
        "reduction_test",
        [](const Ideal& J, const Polynomial& theta, std::uint32_t n_max) {
            auto v = reduction_test(J, theta, n_max);
            py::dict d;
            d["status"] = v.status == IntegralityStatus::Integral     ? "integral"
                          : v.status == IntegralityStatus::Refuted    ? "refuted"
                                                                      : "inconclusive";
            if (v.reduction_index) d["reduction_index"] = *v.reduction_index;
            return d;
        },
        py::arg("ideal"), py::arg("theta"), py::arg("n_max") = 6);
    m.def(
        "monomial_closure_membership",
        [](const Polynomial& theta, const Ideal& J) { return monomial_closure_membership(theta, J); },
        py::arg("theta"), py::arg("ideal"));
    m.def(
        "rees_integrality_test",
        [](const ReesAlgebra& H, const ReesAlgebra& Hp, std::uint32_t D, std::uint32_t n_max,
           const std::vector<std::string>& quotient) {
            std::optional<Ideal> Q;
            if (!quotient.empty()) Q = make_ideal(H.ring(), quotient);
            auto v = rees_integrality_test(H, Hp.mapped_into(H.ring()), D, n_max,
                                           Q ? &*Q : nullptr);
            py::dict d;
            d["status"] = v.status == IntegralityStatus::Integral     ? "integral"
                          : v.status == IntegralityStatus::Refuted    ? "refuted"
                                                                      : "inconclusive";
            py::list eqs;
            for (const auto& eq : v.equations) {
                py::dict e;
                e["theta"] = poly_to_string(eq.theta);
                e["N"] = eq.N;
                py::list coeffs;
                for (const auto& a : eq.coeffs) coeffs.append(poly_to_string(a));
                e["coeffs"] = coeffs;
                eqs.append(e);
            }
            d["equations"] = eqs;
            return d;
        },
        py::arg("H"), py::arg("Hp"), py::arg("D"), py::arg("n_max") = 6,
        py::arg("quotient") = std::vector<std::string>{});

    m.def(
        "is_transversal",
        [](const Tower& base, const Tower& ext) {
            auto rep = is_transversal(base, ext);
            py::dict d;
            d["transversal"] = rep.transversal;
            d["base_rank"] = rep.base_rank;
            d["ext_rank"] = rep.ext_rank;
            d["generic_rank"] = rep.generic_rank;
            return d;
        },
        py::arg("base"), py::arg("ext"));

    m.def(
        "strong_transversality_probe",
        [](const Tower& base, const Tower& ext,
           const std::vector<std::pair<CoordinatePrime, std::string>>& steps,
           const std::vector<CoordinatePrime>& probes) {
            std::vector<ProbeStep> ps;
            for (const auto& [c, chart] : steps) ps.push_back({c, chart});
            auto out = strong_transversality_probe(base, ext, ps, probes);
            py::dict d;
            d["verdict"] =
                out.verdict == ProbeOutcome::Verdict::Violated ? "violated" : "consistent";
            if (out.witness) d["witness"] = prime_display(*out.witness, ps.size());
            return d;
        },
        py::arg("base"), py::arg("ext"), py::arg("steps"), py::arg("probes"));

    m.def(
        "construct_extension",
        [](const Tower& base, const std::vector<std::pair<std::string, std::string>>& new_steps,
           std::uint32_t D, std::uint32_t n_max) {
            auto rep = construct_extension(base, new_steps, D, n_max);
            py::dict d;
            d["certified"] = rep.certified;
            d["detail"] = rep.detail;
            d["elimination"] = rees_to_string(rep.elimination);
            return d;
        },
        py::arg("base"), py::arg("new_steps"), py::arg("D") = 3, py::arg("n_max") = 6);

    m.def(
        "run_scenario",
        [](const std::string& path) {
            std::ostringstream out;
            int rc = run_scenario_file(path, out, false);
            return py::make_tuple(rc, out.str());
        },
        py::arg("path"), "run a scenario file; returns (exit_code, output)");
}
