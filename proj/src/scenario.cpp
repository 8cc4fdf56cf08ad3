#include "strata/scenario.hpp"

#include <fstream>
#include <numeric>
#include <sstream>

#include "strata/parse.hpp"

namespace strata {

namespace {

[[noreturn]] void schema_error(const std::string& what) { throw ParseError(what, 0); }

std::string csv(const std::vector<std::string>& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) s += ",";
        s += xs[i];
    }
    return s;
}

} // namespace

RingSpec ring_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("vars")) schema_error("ring needs {char, vars}");
    std::uint64_t ch = j.value("char", 0);
    std::vector<std::string> vars = j.at("vars").get<std::vector<std::string>>();
    return RingSpec(ch, vars);
}

Json ring_to_json(const RingSpec& r) {
    return Json{{"char", r.characteristic()}, {"vars", r.variables()}};
}

CoordinatePrime prime_from_json(const Json& j, const RingSpec& ring) {
    CoordinatePrime p;
    if (j.is_array()) {
        p.varset = j.get<std::vector<std::string>>();
    } else if (j.is_object()) {
        p.varset = j.at("vars").get<std::vector<std::string>>();
        if (j.contains("translate"))
            for (auto& [k, v] : j.at("translate").items())
                p.translation.emplace(k, coeff_parse(v.get<std::string>(), ring));
    } else {
        schema_error("prime must be an array of vars or {vars, translate}");
    }
    p.validate(ring);
    return p;
}

Json prime_to_json(const CoordinatePrime& p) {
    Json j{{"vars", p.varset}};
    if (!p.translation.empty()) {
        Json t = Json::object();
        for (const auto& [k, v] : p.translation) t[k] = coeff_to_string(v);
        j["translate"] = t;
    }
    return j;
}

Ideal ideal_from_json(const Json& j, const RingSpec& ring) {
    const Json& gens = j.is_object() && j.contains("gens") ? j.at("gens") : j;
    if (!gens.is_array()) schema_error("ideal must be an array of polynomial strings");
    std::vector<Polynomial> ps;
    for (const auto& s : gens) ps.push_back(poly_parse(s.get<std::string>(), ring));
    return Ideal(ring, std::move(ps));
}

Json ideal_to_json(const Ideal& I) {
    Json gens = Json::array();
    for (const auto& g : I.generators) gens.push_back(poly_to_string(g));
    return Json{{"ring", ring_to_json(I.ring)}, {"gens", gens}};
}

ReesAlgebra algebra_from_json(const Json& j) {
    RingSpec ring = ring_from_json(j.at("ring"));
    std::vector<WeightedGen> gens;
    for (const auto& g : j.at("gens"))
        gens.push_back({poly_parse(g.at("poly").get<std::string>(), ring),
                        g.at("weight").get<std::uint32_t>()});
    return ReesAlgebra(ring, std::move(gens));
}

Json algebra_to_json(const ReesAlgebra& G) {
    ReesAlgebra c = G.canonicalized();
    Json gens = Json::array();
    for (const auto& g : c.generators())
        gens.push_back(Json{{"poly", poly_to_string(g.poly)}, {"weight", g.weight}});
    return Json{{"ring", ring_to_json(G.ring())}, {"gens", gens}};
}

Tower tower_from_json(const Json& j) {
    std::uint64_t ch = j.value("char", 0);
    std::vector<std::string> base_vars = j.at("base_vars").get<std::vector<std::string>>();
    RingSpec base(ch, base_vars);
    Ideal base_rel = Ideal::zero(base);
    if (j.contains("base_relations")) base_rel = ideal_from_json(j.at("base_relations"), base);
    std::vector<std::pair<std::string, std::string>> steps;
    for (const auto& s : j.at("steps"))
        steps.emplace_back(s.at("var").get<std::string>(), s.at("relation").get<std::string>());
    return Tower(base, base_rel, steps);
}

Json tower_to_json(const Tower& t) {
    Json steps = Json::array();
    for (std::size_t i = 0; i < t.steps().size(); ++i)
        steps.push_back(Json{{"var", t.steps()[i].var},
                             {"relation", poly_to_string(t.steps()[i].relation)}});
    Json j{{"char", t.full_ring().characteristic()},
           {"base_vars", t.base_ring().variables()},
           {"steps", steps},
           {"rank", t.rank()}};
    if (!t.base_relations().is_zero()) {
        Json rel = Json::array();
        for (const auto& g : t.base_relations().generators) rel.push_back(poly_to_string(g));
        j["base_relations"] = rel;
    }
    return j;
}

std::vector<ProbeStep> steps_from_json(const Json& j, const RingSpec& ring) {
    std::vector<ProbeStep> steps;
    for (const auto& s : j)
        steps.push_back(ProbeStep{prime_from_json(s.at("center"), ring),
                                  s.at("chart").get<std::string>()});
    return steps;
}

std::string prime_display(const CoordinatePrime& p, std::size_t generation) {
    std::vector<std::string> names;
    for (const auto& v : p.varset)
        names.push_back(generation == 0 ? v : v + std::to_string(generation));
    std::string s = "<" + csv(names) + ">";
    if (!p.translation.empty()) {
        s += " shifted by {";
        bool first = true;
        for (const auto& [k, v] : p.translation) {
            if (!first) s += ", ";
            first = false;
            s += k + "=" + coeff_to_string(v);
        }
        s += "}";
    }
    return s;
}

namespace {

const char* status_name(IntegralityStatus s) {
    switch (s) {
    case IntegralityStatus::Integral: return "integral";
    case IntegralityStatus::Refuted: return "refuted";
    case IntegralityStatus::Inconclusive: return "inconclusive";
    }
    return "?";
}

Json verdict_to_json(const IntegralityVerdict& v) {
    Json j{{"status", status_name(v.status)}};
    if (v.reduction_index) j["reduction_index"] = *v.reduction_index;
    if (!v.equations.empty()) {
        Json eqs = Json::array();
        for (const auto& eq : v.equations) {
            Json coeffs = Json::array();
            for (const auto& a : eq.coeffs) coeffs.push_back(poly_to_string(a));
            eqs.push_back(Json{{"theta", poly_to_string(eq.theta)},
                               {"weight", eq.weight},
                               {"N", eq.N},
                               {"coeffs", coeffs}});
        }
        j["equations"] = eqs;
    }
    if (!v.separating.empty()) {
        Json w = Json::array();
        for (const auto& q : v.separating) {
            std::ostringstream os;
            os << q;
            w.push_back(os.str());
        }
        j["separating"] = w;
    }
    if (!v.diagnostics.empty()) j["diagnostics"] = v.diagnostics;
    return j;
}

Json stratum_to_json(const StratumReport& r) {
    return Json{{"nonempty", r.nonempty},
                {"expected_mult", r.expected_mult},
                {"note", r.nonempty ? "stratum is F_" + std::to_string(r.expected_mult)
                                    : "max mult < " + std::to_string(r.expected_mult) +
                                          " (stratum empty; maximum not computed)"},
                {"stratum_ideal", ideal_to_json(r.stratum_ideal)},
                {"presentation", algebra_to_json(r.presentation)}};
}

Json probe_to_json(const ProbeOutcome& o, std::size_t generation) {
    Json stages = Json::array();
    for (const auto& st : o.stages)
        stages.push_back(Json{{"base_nonempty", st.base_nonempty},
                              {"ext_nonempty", st.ext_nonempty},
                              {"base_stratum", ideal_to_json(st.base_stratum)},
                              {"ext_stratum", ideal_to_json(st.ext_stratum)}});
    Json probes = Json::array();
    for (const auto& pr : o.probes)
        probes.push_back(Json{{"base_prime", prime_to_json(pr.base_prime)},
                              {"ext_candidate", prime_to_json(pr.ext_candidate)},
                              {"in_base", pr.in_base},
                              {"in_ext", pr.in_ext},
                              {"direction_ok", pr.direction_ok}});
    Json j{{"verdict", o.verdict == ProbeOutcome::Verdict::Violated ? "violated" : "consistent"},
           {"stages", stages},
           {"probes", probes}};
    if (!o.detail.empty()) j["detail"] = o.detail;
    if (o.witness) j["witness"] = prime_display(*o.witness, generation);
    if (o.witness_step) j["witness_step"] = *o.witness_step;
    return j;
}

Json star_to_json(const ConditionStarReport& r) {
    Json j{{"uniqueness", r.uniqueness},
           {"rationality", r.rationality},
           {"reduction", status_name(r.reduction)},
           {"holds", r.holds},
           {"candidate", prime_to_json(r.candidate)}};
    if (r.reduction_index) j["reduction_index"] = *r.reduction_index;
    if (r.mult_small) j["mult_p"] = r.mult_small->get_str();
    if (r.mult_big) j["mult_P"] = r.mult_big->get_str();
    if (r.reduction_by_multiplicity) j["reduction_by_multiplicity"] = true;
    if (!r.notes.empty()) j["notes"] = r.notes;
    return j;
}

Json zariski_to_json(const ZariskiReport& r) {
    Json fibers = Json::array();
    for (const auto& f : r.fibers)
        fibers.push_back(Json{{"prime", prime_to_json(f.prime)},
                              {"mult", f.mult.get_str()},
                              {"residue_degree", f.residue_degree},
                              {"mult_extended_ideal", f.mult_extended.get_str()},
                              {"chain_ok", f.chain_ok}});
    return Json{{"base_mult", r.base_mult.get_str()},
                {"rank", r.rank},
                {"lhs", r.lhs.get_str()},
                {"rhs", r.rhs.get_str()},
                {"equal", r.equal},
                {"fibers", fibers}};
}

// ---- engine -----------------------------------------------------------------

struct Value {
    enum class Kind { Poly, Ideal, Algebra, Tower, Prime, Bool, Int, Text, Report };
    Kind kind = Kind::Text;
    Polynomial poly;
    Ideal ideal;
    ReesAlgebra algebra;
    Tower tower;
    CoordinatePrime prime;
    bool boolean = false;
    mpz_class integer = 0;
    std::string text;
    Json rendered;

    static Value of_poly(Polynomial p) {
        Value v;
        v.kind = Kind::Poly;
        v.rendered = poly_to_string(p);
        v.poly = std::move(p);
        return v;
    }
    static Value of_ideal(Ideal i) {
        Value v;
        v.kind = Kind::Ideal;
        v.rendered = ideal_to_json(i);
        v.ideal = std::move(i);
        return v;
    }
    static Value of_algebra(ReesAlgebra a) {
        Value v;
        v.kind = Kind::Algebra;
        v.rendered = algebra_to_json(a);
        v.algebra = std::move(a);
        return v;
    }
    static Value of_tower(Tower t) {
        Value v;
        v.kind = Kind::Tower;
        v.rendered = tower_to_json(t);
        v.tower = std::move(t);
        return v;
    }
    static Value of_prime(CoordinatePrime p) {
        Value v;
        v.kind = Kind::Prime;
        v.rendered = prime_to_json(p);
        v.prime = std::move(p);
        return v;
    }
    static Value of_bool(bool b) {
        Value v;
        v.kind = Kind::Bool;
        v.boolean = b;
        v.rendered = b;
        return v;
    }
    static Value of_int(mpz_class n) {
        Value v;
        v.kind = Kind::Int;
        v.rendered = n.get_str();
        v.integer = std::move(n);
        return v;
    }
    static Value of_report(Json j) {
        Value v;
        v.kind = Kind::Report;
        v.rendered = std::move(j);
        return v;
    }
};

class Engine {
public:
    Engine(const Json& doc, std::ostream& out, bool jsonlines)
        : doc_(doc), out_(out), jsonlines_(jsonlines) {
        if (doc_.contains("ring")) default_ring_ = ring_from_json(doc_.at("ring"));
        if (doc_.contains("defaults")) {
            const Json& d = doc_.at("defaults");
            degree_bound_ = d.value("degree_bound", degree_bound_);
            nmax_ = d.value("nmax", nmax_);
            nrange_ = d.value("nrange", nrange_);
            limits_.gb_steps = d.value("budget_gb", limits_.gb_steps);
        }
        if (doc_.contains("objects"))
            for (auto& [name, spec] : doc_.at("objects").items())
                bindings_.emplace(name, object_from_json(spec));
    }

    int run() {
        const Json script = doc_.value("script", Json::array());
        std::size_t index = 0;
        for (const auto& step : script) {
            ++index;
            std::string op = step.at("op").get<std::string>();
            Value v = execute(op, step);
            std::string bind = step.value("bind", "_" + std::to_string(index));
            emit(index, op, bind, v);
            bindings_[bind] = std::move(v);
        }
        int failures = check_expectations();
        emit_summary(failures);
        return failures == 0 ? 0 : 1;
    }

private:
    const Json& doc_;
    std::ostream& out_;
    bool jsonlines_;
    std::optional<RingSpec> default_ring_;
    std::map<std::string, Value> bindings_;
    Limits limits_;
    std::uint32_t degree_bound_ = 0;
    std::uint32_t nmax_ = 6;
    std::uint32_t nrange_ = 8;
    std::string headline_;

    RingSpec need_ring(const Json& step) {
        if (step.contains("ring")) return ring_from_json(step.at("ring"));
        if (default_ring_) return *default_ring_;
        schema_error("no ring given and no scenario default ring");
    }

    Value object_from_json(const Json& spec) {
        std::string type = spec.at("type").get<std::string>();
        if (type == "poly") return Value::of_poly(poly_parse(spec.at("text").get<std::string>(), need_ring(spec)));
        if (type == "ideal") return Value::of_ideal(ideal_from_json(spec, need_ring(spec)));
        if (type == "algebra") return Value::of_algebra(algebra_from_json(spec));
        if (type == "tower") return Value::of_tower(tower_from_json(spec));
        if (type == "prime") return Value::of_prime(prime_from_json(spec, need_ring(spec)));
        schema_error("unknown object type: " + type);
    }

    const Value& lookup(const std::string& name) {
        auto it = bindings_.find(name);
        if (it == bindings_.end()) schema_error("unknown binding: " + name);
        return it->second;
    }

    Polynomial arg_poly(const Json& step, const std::string& key, const RingSpec& ring) {
        const Json& a = step.at(key);
        if (a.is_string()) {
            auto it = bindings_.find(a.get<std::string>());
            if (it != bindings_.end() && it->second.kind == Value::Kind::Poly)
                return it->second.poly.mapped_into(ring);
            return poly_parse(a.get<std::string>(), ring);
        }
        schema_error("argument " + key + " must be a polynomial string or binding");
    }

    Ideal arg_ideal(const Json& step, const std::string& key, const RingSpec& ring) {
        const Json& a = step.at(key);
        if (a.is_string()) {
            const Value& v = lookup(a.get<std::string>());
            if (v.kind == Value::Kind::Ideal) return v.ideal.mapped_into(ring);
            if (v.kind == Value::Kind::Report && v.ideal.ring.nvars() > 0)
                return v.ideal.mapped_into(ring);
            schema_error(key + " is not an ideal");
        }
        return ideal_from_json(a, ring);
    }

    ReesAlgebra arg_algebra(const Json& step, const std::string& key) {
        const Json& a = step.at(key);
        if (a.is_string()) {
            const Value& v = lookup(a.get<std::string>());
            if (v.kind != Value::Kind::Algebra) schema_error(key + " is not an algebra");
            return v.algebra;
        }
        return algebra_from_json(a);
    }

    Tower arg_tower(const Json& step, const std::string& key) {
        const Json& a = step.at(key);
        if (a.is_string()) {
            const Value& v = lookup(a.get<std::string>());
            if (v.kind != Value::Kind::Tower) schema_error(key + " is not a tower");
            return v.tower;
        }
        return tower_from_json(a);
    }

    CoordinatePrime arg_prime(const Json& step, const std::string& key, const RingSpec& ring) {
        const Json& a = step.at(key);
        if (a.is_string()) {
            const Value& v = lookup(a.get<std::string>());
            if (v.kind != Value::Kind::Prime) schema_error(key + " is not a prime");
            return v.prime;
        }
        return prime_from_json(a, ring);
    }

    std::uint32_t arg_u32(const Json& step, const std::string& key, std::uint32_t dflt) {
        return step.value(key, dflt);
    }

    std::uint32_t effective_D(const Json& step, const ReesAlgebra& a, const ReesAlgebra& b) {
        std::uint32_t d = arg_u32(step, "D", degree_bound_);
        if (d == 0) d = std::lcm(a.weight_lcm(), b.weight_lcm());
        return d;
    }

    Value execute(const std::string& op, const Json& step) {
        if (op == "parse") {
            RingSpec ring = need_ring(step);
            return Value::of_poly(poly_parse(step.at("text").get<std::string>(), ring));
        }
        if (op == "groebner") {
            RingSpec ring = need_ring(step);
            Ideal I = arg_ideal(step, "ideal", ring);
            MonomialOrder order = MonomialOrder::grevlex();
            if (step.contains("order")) {
                std::string k = step.at("order").get<std::string>();
                if (k == "lex") order = MonomialOrder::lex();
                else if (k != "grevlex") schema_error("unknown order " + k);
            }
            return Value::of_ideal(Ideal(I.ring, groebner_basis(I, order, limits_).basis()));
        }
        if (op == "member") {
            RingSpec ring = need_ring(step);
            Ideal I = arg_ideal(step, "ideal", ring);
            return Value::of_bool(ideal_membership(arg_poly(step, "poly", I.ring), I, limits_));
        }
        if (op == "eliminate") {
            RingSpec ring = need_ring(step);
            Ideal I = arg_ideal(step, "ideal", ring);
            return Value::of_ideal(
                eliminate(I, step.at("vars").get<std::vector<std::string>>(), limits_));
        }
        if (op == "saturate") {
            RingSpec ring = need_ring(step);
            Ideal I = arg_ideal(step, "ideal", ring);
            return Value::of_ideal(saturate(I, arg_poly(step, "poly", I.ring), limits_));
        }
        if (op == "order") {
            RingSpec ring = need_ring(step);
            if (step.contains("ideal")) {
                Ideal I = arg_ideal(step, "ideal", ring);
                return Value::of_int(
                    ideal_order_at_coordinate_prime(I, arg_prime(step, "prime", I.ring)));
            }
            Polynomial f = arg_poly(step, "poly", ring);
            return Value::of_int(order_at_coordinate_prime(f, arg_prime(step, "prime", ring)));
        }
        if (op == "hasse") {
            RingSpec ring = need_ring(step);
            Polynomial f = arg_poly(step, "poly", ring);
            Exps alpha = step.at("alpha").get<std::vector<std::uint32_t>>();
            return Value::of_poly(hasse_derivative(f, alpha));
        }
        if (op == "graded_piece") {
            ReesAlgebra G = arg_algebra(step, "algebra");
            return Value::of_ideal(graded_piece(G, step.at("degree").get<std::uint32_t>()));
        }
        if (op == "sing") {
            ReesAlgebra G = arg_algebra(step, "algebra");
            Ideal s = sing_locus(G);
            bool nonempty = true;
            if (!s.is_zero()) {
                GroebnerBasis gb = groebner_basis(s, MonomialOrder::grevlex(), limits_);
                nonempty = !gb.is_unit();
                s = Ideal(s.ring, gb.basis());
            }
            Value v = Value::of_report(Json{{"ideal", ideal_to_json(s)}, {"nonempty", nonempty}});
            v.ideal = s;
            return v;
        }
        if (op == "diff_sat") {
            return Value::of_algebra(diff_saturate(arg_algebra(step, "algebra")));
        }
        if (op == "rel_diff_sat") {
            return Value::of_algebra(relative_diff_saturate(
                arg_algebra(step, "algebra"), step.at("zvars").get<std::vector<std::string>>()));
        }
        if (op == "algebra_equal") {
            ReesAlgebra a = arg_algebra(step, "left");
            ReesAlgebra b = arg_algebra(step, "right").mapped_into(a.ring());
            std::optional<Ideal> quotient;
            if (step.contains("quotient")) quotient = arg_ideal(step, "quotient", a.ring());
            return Value::of_bool(algebra_equal_up_to(a, b, effective_D(step, a, b),
                                                      quotient ? &*quotient : nullptr, limits_));
        }
        if (op == "elim_algebra") {
            ReesAlgebra G = arg_algebra(step, "algebra");
            std::uint32_t D = arg_u32(step, "D", degree_bound_);
            if (D == 0) D = G.weight_lcm();
            return Value::of_algebra(
                eliminate_algebra(G, step.at("zvars").get<std::vector<std::string>>(), D, limits_));
        }
        if (op == "tau") {
            ReesAlgebra G = arg_algebra(step, "algebra");
            return Value::of_int(tau_at_point(G, arg_prime(step, "prime", G.ring())));
        }
        if (op == "restrict") {
            ReesAlgebra G = arg_algebra(step, "algebra");
            return Value::of_algebra(
                restrict_to_subscheme(G, arg_ideal(step, "ideal", G.ring()), limits_));
        }
        if (op == "charts") {
            RingSpec ring = need_ring(step);
            CoordinatePrime center = arg_prime(step, "center", ring);
            Json arr = Json::array();
            for (const auto& c : blowup_charts(ring, center)) {
                Json sub = Json::object();
                for (const auto& [v, img] : c.substitution()) sub[v] = poly_to_string(img);
                arr.push_back(Json{{"chart", c.chart_var},
                                   {"substitution", sub},
                                   {"exceptional", c.chart_var}});
            }
            return Value::of_report(Json{{"charts", arr}});
        }
        if (op == "strict_transform") {
            RingSpec ring = need_ring(step);
            Ideal I = arg_ideal(step, "ideal", ring);
            BlowupChart chart{I.ring, arg_prime(step, "center", I.ring),
                              step.at("chart").get<std::string>()};
            return Value::of_ideal(strict_transform(I, chart, limits_));
        }
        if (op == "weak_transform") {
            ReesAlgebra G = arg_algebra(step, "algebra");
            BlowupChart chart{G.ring(), arg_prime(step, "center", G.ring()),
                              step.at("chart").get<std::string>()};
            return Value::of_algebra(weak_transform(G, chart));
        }
        if (op == "tower_transform") {
            Tower t = arg_tower(step, "tower");
            return Value::of_tower(tower_transform(t, arg_prime(step, "center", t.full_ring()),
                                                   step.at("chart").get<std::string>(), limits_));
        }
        if (op == "presentation") {
            Tower t = arg_tower(step, "tower");
            return Value::of_algebra(presentation_algebra(t).second);
        }
        if (op == "stratum") {
            Tower t = arg_tower(step, "tower");
            return Value::of_report(stratum_to_json(max_mult_stratum(t, limits_)));
        }
        if (op == "stratum_contains") {
            Tower t = arg_tower(step, "tower");
            return Value::of_bool(stratum_contains(t, arg_prime(step, "prime", t.full_ring())));
        }
        if (op == "mult_oracle") {
            RingSpec ring = need_ring(step);
            Ideal rel = step.contains("relations") ? arg_ideal(step, "relations", ring)
                                                   : Ideal::zero(ring);
            QuotientRing R{ring, rel};
            auto res = hilbert_samuel_multiplicity(R, arg_prime(step, "prime", ring),
                                                   arg_u32(step, "nrange", nrange_), limits_);
            Json lengths = Json::array();
            for (const auto& l : res.lengths) lengths.push_back(l.get_str());
            Value v = Value::of_report(Json{{"multiplicity", res.multiplicity.get_str()},
                                            {"dim", res.dim},
                                            {"lengths", lengths}});
            v.integer = res.multiplicity;
            return v;
        }
        if (op == "zariski") {
            RingSpec base_ring = ring_from_json(step.at("base_ring"));
            Ideal base_rel = step.contains("base_relations")
                                 ? ideal_from_json(step.at("base_relations"), base_ring)
                                 : Ideal::zero(base_ring);
            Tower ext = arg_tower(step, "ext");
            CoordinatePrime p = prime_from_json(step.at("prime"), base_ring);
            std::vector<FiberPrime> fibers;
            for (const auto& f : step.at("fibers"))
                fibers.push_back(FiberPrime{prime_from_json(f.at("prime"), ext.full_ring()),
                                            f.value("residue_degree", 1u)});
            auto rep = zariski_check({base_ring, base_rel}, ext, p, fibers,
                                     arg_u32(step, "nrange", nrange_), limits_);
            return Value::of_report(zariski_to_json(rep));
        }
        if (op == "reduction") {
            RingSpec ring = need_ring(step);
            Ideal J = arg_ideal(step, "ideal", ring);
            std::optional<Ideal> quotient;
            if (step.contains("quotient")) quotient = arg_ideal(step, "quotient", J.ring);
            auto v = reduction_test(J, arg_poly(step, "theta", J.ring),
                                    arg_u32(step, "nmax", nmax_),
                                    quotient ? &*quotient : nullptr, limits_);
            return Value::of_report(verdict_to_json(v));
        }
        if (op == "monomial_member") {
            RingSpec ring = need_ring(step);
            Ideal J = arg_ideal(step, "ideal", ring);
            return Value::of_bool(monomial_closure_membership(arg_poly(step, "theta", J.ring), J));
        }
        if (op == "integrality") {
            ReesAlgebra H = arg_algebra(step, "H");
            ReesAlgebra Hp = arg_algebra(step, "Hp").mapped_into(H.ring());
            std::optional<Ideal> quotient;
            if (step.contains("quotient")) quotient = arg_ideal(step, "quotient", H.ring());
            auto v = rees_integrality_test(H, Hp, effective_D(step, H, Hp),
                                           arg_u32(step, "nmax", nmax_),
                                           quotient ? &*quotient : nullptr, limits_);
            return Value::of_report(verdict_to_json(v));
        }
        if (op == "transversal") {
            auto rep = is_transversal(arg_tower(step, "base"), arg_tower(step, "ext"), limits_);
            return Value::of_report(Json{{"transversal", rep.transversal},
                                         {"base_rank", rep.base_rank},
                                         {"ext_rank", rep.ext_rank},
                                         {"generic_rank", rep.generic_rank},
                                         {"base", stratum_to_json(rep.base)},
                                         {"ext", stratum_to_json(rep.ext)}});
        }
        if (op == "condition_star") {
            Tower base = arg_tower(step, "base");
            auto rep = condition_star(base, arg_tower(step, "ext"),
                                      arg_prime(step, "prime", base.full_ring()),
                                      arg_u32(step, "nmax", nmax_),
                                      arg_u32(step, "nrange", nrange_), limits_);
            return Value::of_report(star_to_json(rep));
        }
        if (op == "probe") {
            Tower base = arg_tower(step, "base");
            Tower ext = arg_tower(step, "ext");
            auto steps = steps_from_json(step.value("steps", Json::array()), ext.full_ring());
            std::vector<CoordinatePrime> probes;
            for (const auto& p : step.value("probes", Json::array()))
                probes.push_back(prime_from_json(p, base.full_ring()));
            auto out = strong_transversality_probe(base, ext, steps, probes, limits_);
            set_probe_headline(out, steps.size());
            return Value::of_report(probe_to_json(out, steps.size()));
        }
        if (op == "probe_algebras") {
            ReesAlgebra base = arg_algebra(step, "base");
            ReesAlgebra ext = arg_algebra(step, "ext");
            auto steps = steps_from_json(step.value("steps", Json::array()), ext.ring());
            std::vector<CoordinatePrime> probes;
            for (const auto& p : step.value("probes", Json::array()))
                probes.push_back(prime_from_json(p, base.ring()));
            auto out = algebra_pair_probe(base, ext, steps, probes, limits_);
            set_probe_headline(out, steps.size());
            return Value::of_report(probe_to_json(out, steps.size()));
        }
        if (op == "construct") {
            Tower base = arg_tower(step, "base");
            std::vector<std::pair<std::string, std::string>> new_steps;
            for (const auto& s : step.at("relations"))
                new_steps.emplace_back(s.at("var").get<std::string>(),
                                       s.at("relation").get<std::string>());
            std::uint32_t D = arg_u32(step, "D", degree_bound_);
            if (D == 0) D = 3;
            auto rep =
                construct_extension(base, new_steps, D, arg_u32(step, "nmax", nmax_), limits_);
            headline_ = rep.certified ? "strongly transversal (certified)" : "not certified";
            return Value::of_report(Json{{"certified", rep.certified},
                                         {"detail", rep.detail},
                                         {"extension", tower_to_json(rep.extension)},
                                         {"elimination", algebra_to_json(rep.elimination)},
                                         {"verdict", verdict_to_json(rep.verdict)}});
        }
        schema_error("unknown op: " + op);
    }

    void set_probe_headline(const ProbeOutcome& out, std::size_t generation) {
        if (out.verdict == ProbeOutcome::Verdict::Violated) {
            if (out.witness)
                headline_ = "strong transversality violated at " +
                            prime_display(*out.witness, generation);
            else
                headline_ = "strong transversality violated: extension stratum empty while the "
                            "base stratum persists (step " +
                            std::to_string(out.witness_step ? *out.witness_step : 0) + ")";
        } else {
            headline_ = "strong transversality probe consistent";
        }
    }

    void emit(std::size_t index, const std::string& op, const std::string& bind, const Value& v) {
        if (jsonlines_) {
            out_ << Json{{"step", index}, {"op", op}, {"bind", bind}, {"value", v.rendered}}.dump()
                 << "\n";
        } else {
            out_ << "[" << index << "] " << bind << " = " << v.rendered.dump() << "\n";
        }
    }

    int check_expectations() {
        int failures = 0;
        for (const auto& exp : doc_.value("expectations", Json::array())) {
            std::string binding = exp.at("binding").get<std::string>();
            bool ok = false;
            std::string detail;
            try {
                ok = check_one(exp, lookup(binding), detail);
            } catch (const std::exception& e) {
                detail = e.what();
            }
            if (!ok) ++failures;
            if (jsonlines_) {
                out_ << Json{{"expectation", binding}, {"ok", ok}, {"detail", detail}}.dump()
                     << "\n";
            } else {
                out_ << (ok ? "ok      " : "FAILED  ") << binding;
                if (!detail.empty()) out_ << "  (" << detail << ")";
                out_ << "\n";
            }
        }
        return failures;
    }

    bool check_one(const Json& exp, const Value& v, std::string& detail) {
        if (exp.contains("equals_poly")) {
            if (v.kind != Value::Kind::Poly) {
                detail = "binding is not a polynomial";
                return false;
            }
            Polynomial expect = poly_parse(exp.at("equals_poly").get<std::string>(), v.poly.ring());
            if (v.poly == expect) return true;
            detail = "got " + poly_to_string(v.poly);
            return false;
        }
        if (exp.contains("equals_ideal")) {
            if (v.ideal.ring.nvars() == 0 && v.kind != Value::Kind::Ideal) {
                detail = "binding is not an ideal";
                return false;
            }
            Ideal expect = ideal_from_json(exp.at("equals_ideal"), v.ideal.ring);
            if (ideal_equal(v.ideal, expect, limits_)) return true;
            detail = "ideals differ";
            return false;
        }
        if (exp.contains("equals_algebra")) {
            if (v.kind != Value::Kind::Algebra) {
                detail = "binding is not an algebra";
                return false;
            }
            ReesAlgebra expect = algebra_from_json(exp.at("equals_algebra"));
            std::uint32_t D = exp.value("D", 0u);
            if (D == 0) D = std::lcm(v.algebra.weight_lcm(), expect.weight_lcm());
            std::optional<Ideal> quotient;
            if (exp.contains("quotient"))
                quotient = ideal_from_json(exp.at("quotient"), v.algebra.ring());
            if (algebra_equal_up_to(v.algebra, expect.mapped_into(v.algebra.ring()), D,
                                    quotient ? &*quotient : nullptr, limits_))
                return true;
            detail = "algebras differ gradedwise; got " + rees_to_string(v.algebra);
            return false;
        }
        if (exp.contains("field")) {
            Json cur = v.rendered;
            std::istringstream path(exp.at("field").get<std::string>());
            std::string part;
            while (std::getline(path, part, '.')) {
                if (cur.is_array())
                    cur = cur.at(static_cast<std::size_t>(std::stoul(part)));
                else
                    cur = cur.at(part);
            }
            if (cur == exp.at("equals")) return true;
            detail = "field value " + cur.dump() + " != " + exp.at("equals").dump();
            return false;
        }
        if (exp.contains("equals")) {
            const Json& want = exp.at("equals");
            if (v.kind == Value::Kind::Int) {
                if (want.is_number_integer()) return v.integer == static_cast<long>(want.get<long long>());
                return v.integer.get_str() == want.get<std::string>();
            }
            if (v.rendered == want) return true;
            detail = "got " + v.rendered.dump();
            return false;
        }
        if (exp.contains("contains")) {
            std::string text =
                v.rendered.is_string() ? v.rendered.get<std::string>() : v.rendered.dump();
            if (text.find(exp.at("contains").get<std::string>()) != std::string::npos) return true;
            detail = "text does not contain the expected fragment";
            return false;
        }
        schema_error("expectation needs one of equals/equals_poly/equals_ideal/equals_algebra/"
                     "field/contains");
    }

    void emit_summary(int failures) {
        int total = static_cast<int>(doc_.value("expectations", Json::array()).size());
        if (total == 0 && headline_.empty() && doc_.value("script", Json::array()).empty())
            return; // nothing ran, nothing to report
        Json summary{{"name", doc_.value("name", "")},
                     {"expectations_passed", total - failures},
                     {"expectations_failed", failures}};
        if (!headline_.empty()) summary["headline"] = headline_;
        out_ << "== summary ==\n" << summary.dump() << "\n";
        if (!headline_.empty()) out_ << headline_ << "\n";
    }
};

} // namespace

int run_scenario(const Json& doc, std::ostream& out, bool jsonlines) {
    try {
        Engine engine(doc, out, jsonlines);
        return engine.run();
    } catch (const ParseError& e) {
        out << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const BudgetExceeded& e) {
        out << "budget exceeded: " << e.what() << " (limit " << e.limit << ")\n";
        return 4;
    } catch (const Error& e) {
        out << "operation error: " << e.what() << "\n";
        return 3;
    } catch (const Json::exception& e) {
        out << "parse error: " << e.what() << "\n";
        return 2;
    }
}

int run_scenario_file(const std::string& path, std::ostream& out, bool jsonlines) {
    std::ifstream in(path);
    if (!in) {
        out << "parse error: cannot open " << path << "\n";
        return 2;
    }
    Json doc;
    try {
        in >> doc;
    } catch (const Json::exception& e) {
        out << "parse error: " << e.what() << "\n";
        return 2;
    }
    return run_scenario(doc, out, jsonlines);
}

// ---- interactive session ----------------------------------------------------

namespace {

struct SessionState {
    Tower base;
    Tower ext;
};

CoordinatePrime parse_prime_spec(const std::string& spec, const RingSpec& ring) {
    CoordinatePrime p;
    std::istringstream ps(spec);
    std::string var;
    while (std::getline(ps, var, ',')) {
        auto eq = var.find('=');
        if (eq == std::string::npos) {
            p.varset.push_back(var);
        } else {
            p.varset.push_back(var.substr(0, eq));
            p.translation.emplace(var.substr(0, eq), coeff_parse(var.substr(eq + 1), ring));
        }
    }
    p.validate(ring);
    return p;
}

} // namespace

int run_session(const Json& doc, std::istream& in, std::ostream& out) {
    Limits limits;
    SessionState current;
    try {
        current.base = tower_from_json(doc.at("base"));
        current.ext = tower_from_json(doc.at("ext"));
        if (doc.contains("defaults"))
            limits.gb_steps = doc.at("defaults").value("budget_gb", limits.gb_steps);
    } catch (const std::exception& e) {
        out << "parse error: " << e.what() << "\n";
        return 2;
    }

    std::vector<SessionState> stack{current};
    std::string line;
    out << "session ready; commands: blowup <center> <chart> | stratum | probe <prime> | "
           "show <name> | undo | quit\n";
    while (std::getline(in, line)) {
        std::istringstream cmd(line);
        std::string word;
        if (!(cmd >> word)) continue;
        try {
            if (word == "quit") break;
            if (word == "undo") {
                if (stack.size() > 1) {
                    stack.pop_back();
                    out << "undone; depth " << stack.size() - 1 << "\n";
                } else {
                    out << "nothing to undo\n";
                }
                continue;
            }
            SessionState& state = stack.back();
            std::size_t generation = stack.size() - 1;
            if (word == "stratum") {
                StratumReport b = max_mult_stratum(state.base, limits);
                StratumReport e = max_mult_stratum(state.ext, limits);
                out << "base stratum (F_" << b.expected_mult
                    << "): " << (b.nonempty ? "nonempty" : "empty") << "\n";
                for (const auto& g : b.stratum_ideal.generators)
                    out << "  " << poly_to_string(g) << "\n";
                out << "ext stratum (F_" << e.expected_mult
                    << "): " << (e.nonempty ? "nonempty" : "empty") << "\n";
                for (const auto& g : e.stratum_ideal.generators)
                    out << "  " << poly_to_string(g) << "\n";
            } else if (word == "show") {
                std::string name;
                cmd >> name;
                if (name == "base")
                    out << tower_to_string(state.base) << "\n";
                else if (name == "ext")
                    out << tower_to_string(state.ext) << "\n";
                else
                    out << "unknown name: " << name << " (use base|ext)\n";
            } else if (word == "blowup") {
                std::string centerspec, chart;
                if (!(cmd >> centerspec >> chart)) {
                    out << "usage: blowup <v1,v2,...> <chart>\n";
                    continue;
                }
                CoordinatePrime center = parse_prime_spec(centerspec, state.ext.full_ring());
                CoordinatePrime base_center;
                for (const auto& [v, c] : center.translation)
                    if (state.base.full_ring().has_var(v)) base_center.translation.emplace(v, c);
                for (const auto& v : center.varset)
                    if (state.base.full_ring().has_var(v)) base_center.varset.push_back(v);
                SessionState next;
                next.ext = tower_transform(state.ext, center, chart, limits);
                next.base = tower_transform(state.base, base_center, chart, limits);
                stack.push_back(std::move(next));
                out << "blown up at " << prime_display(center, stack.size() - 2) << ", chart "
                    << chart << "; depth " << stack.size() - 1 << "\n";
            } else if (word == "probe") {
                std::string primespec;
                if (!(cmd >> primespec)) {
                    out << "usage: probe <v1,v2,...>\n";
                    continue;
                }
                CoordinatePrime p = parse_prime_spec(primespec, state.base.full_ring());
                CoordinatePrime cand = p;
                for (const auto& s : state.ext.steps()) {
                    bool in_base_tower = false;
                    for (const auto& bs : state.base.steps())
                        if (bs.var == s.var) in_base_tower = true;
                    if (!in_base_tower && !cand.contains_var(s.var)) cand.varset.push_back(s.var);
                }
                bool in_base = stratum_contains(state.base, p);
                bool in_ext = stratum_contains(state.ext, cand);
                if (in_base && in_ext)
                    out << prime_display(p, generation) << ": in both strata\n";
                else if (in_base)
                    out << prime_display(p, generation)
                        << ": base stratum only -- strong transversality violated at "
                        << prime_display(cand, generation) << "\n";
                else if (in_ext)
                    out << prime_display(p, generation) << ": extension stratum only (unexpected)\n";
                else
                    out << prime_display(p, generation) << ": outside both\n";
            } else {
                out << "unknown command: " << word << "\n";
            }
        } catch (const BudgetExceeded& e) {
            out << "budget exceeded: " << e.what() << "\n";
        } catch (const Error& e) {
            out << "error: " << e.what() << "\n";
        }
    }
    return 0;
}

} // namespace strata
