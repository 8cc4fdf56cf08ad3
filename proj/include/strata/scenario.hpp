#pragma once

#include <iostream>
#include <string>

#include <json.hpp>

#include "strata/transversality.hpp"

namespace strata {

using Json = nlohmann::json;

// ---- JSON <-> domain object codecs (the scenario/file schemas) -------------
RingSpec ring_from_json(const Json& j);
Json ring_to_json(const RingSpec& r);
CoordinatePrime prime_from_json(const Json& j, const RingSpec& ring);
Json prime_to_json(const CoordinatePrime& p);
Ideal ideal_from_json(const Json& j, const RingSpec& ring);
Json ideal_to_json(const Ideal& I);
ReesAlgebra algebra_from_json(const Json& j);
Json algebra_to_json(const ReesAlgebra& G);
Tower tower_from_json(const Json& j);
Json tower_to_json(const Tower& t);
std::vector<ProbeStep> steps_from_json(const Json& j, const RingSpec& ring);

// Prime rendered with generation subscripts: after n blow-ups the chart
// coordinates display as t2, y2, ... (display labels only).
std::string prime_display(const CoordinatePrime& p, std::size_t generation);

// ---- scenario runner --------------------------------------------------------
// Exit codes: 0 all expectations hold; 1 expectation failure; 2 parse error;
// 3 operation error; 4 budget exhausted / inconclusive outcome.
int run_scenario(const Json& doc, std::ostream& out, bool jsonlines);
int run_scenario_file(const std::string& path, std::ostream& out, bool jsonlines);

// Interactive tower-pair session over a probe-shaped document
// {base: Tower, ext: Tower, ...}; reads commands from `in`.
int run_session(const Json& doc, std::istream& in, std::ostream& out);

} // namespace strata
