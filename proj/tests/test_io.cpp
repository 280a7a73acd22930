#include "thermoflow/io.hpp"

#include "doctest.h"
#include "support.hpp"

using namespace tmf;
using namespace tmf::testing;

TEST_SUITE_BEGIN("io");

TEST_CASE("sft parsing: golden mean") {
  std::string text = R"({"states": ["0", "1"], "edges": [["0","0"], ["0","1"], ["1","0"]]})";
  Sft g = parse_sft_text(text);
  CHECK(g.state_count() == 2);
  CHECK(g.edges.size() == 3);
  CHECK(is_irreducible(g));
}

TEST_CASE("unknown fields are rejected with the field name") {
  std::string text = R"({"states": ["a"], "edges": [["a","a"]], "extra": 1})";
  CHECK_THROWS_WITH_AS(parse_sft_text(text), doctest::Contains("extra"), Error);
}

TEST_CASE("nonpositive roof entries are a validation error") {
  std::string text = R"({
    "states": ["0", "1"],
    "edges": [["0","0"], ["0","1"], ["1","0"]],
    "roof": {"window": 1, "table": {"0": 1.0, "1": 0.0}}
  })";
  CHECK_THROWS_WITH_AS(parse_flow_text(text), doctest::Contains("NonpositiveRoof"), Error);
}

TEST_CASE("flow model round trip") {
  Sft g = golden_mean();
  SuspensionFlow flow{g, table1(g, {1.0, 2.0})};
  std::string text = serialize_flow(flow);
  SuspensionFlow back = parse_flow_text(text);
  CHECK(back.base.states == g.states);
  CHECK(back.base.edges == g.edges);
  for (int s = 0; s < 2; ++s) CHECK(back.roof.value({s}) == flow.roof.value({s}));
  // A model without a roof parses as a bare shift.
  Model m = parse_model_text(serialize_sft(g));
  CHECK(std::holds_alternative<Sft>(m));
  Model mf = parse_model_text(text);
  CHECK(std::holds_alternative<SuspensionFlow>(mf));
}

TEST_CASE("potential and fiber potential parsing") {
  Sft g = golden_mean();
  Potential f = parse_potential_text(R"({"window": 2, "table":
    {"0 0": 0.25, "0 1": -1.5, "1 0": 3}})", g);
  CHECK(f.window == 2);
  CHECK(f.value({0, 1}) == doctest::Approx(-1.5));

  FiberPotential fp = parse_fiber_potential_text(R"([
    {"degree": 0, "potential": {"window": 1, "table": {"0": 0.0, "1": -1.0}}},
    {"degree": 1, "potential": {"window": 1, "table": {"0": 0.5, "1": 0.5}}}
  ])", g);
  CHECK(fp.terms.size() == 2);
  CHECK(fp.base_window() == 1);

  // Window mismatch inside the table is a parse error.
  CHECK_THROWS_AS(parse_potential_text(R"({"window": 1, "table": {"0 0": 1.0}})", g), Error);
  // Missing a word is a validation error.
  CHECK_THROWS_AS(parse_potential_text(R"({"window": 1, "table": {"0": 1.0}})", g), Error);
}

TEST_CASE("code parsing infers the image graph") {
  Sft full = full_shift(2);
  BlockCode code = parse_code_text(R"({"window": 2, "map":
    {"0 0": "0", "0 1": "1", "1 0": "1", "1 1": "0"}})", full);
  CHECK(code.target.state_count() == 2);
  CHECK(code.target.edges.size() == 4);
}

TEST_CASE("point and pseudo-orbit parsing") {
  std::string flow_text = R"({
    "states": ["0", "1"],
    "edges": [["0","0"], ["0","1"], ["1","0"]],
    "roof": {"window": 1, "table": {"0": 1.0, "1": 2.0}}
  })";
  SuspensionFlow flow = parse_flow_text(flow_text);
  FlowPoint p = parse_point_text(R"({
    "past_cycle": ["0"], "core": ["0", "1"], "future_cycle": ["0", "1"],
    "origin": 0, "fiber": 0.5})", flow);
  CHECK(p.fiber == 0.5);
  CHECK(p.base_point.coord(1) == 1);

  // Fiber outside [0, R) is a validation error.
  CHECK_THROWS_AS(parse_point_text(R"({
    "past_cycle": ["0"], "core": [], "future_cycle": ["0"],
    "origin": 0, "fiber": 1.5})", flow), Error);

  PseudoOrbit po = parse_pseudo_orbit_text(R"({
    "delta": 1e-9, "t_min": 2.0, "periodic": true,
    "entries": [{"point": {"past_cycle": ["0","1"], "core": [],
                 "future_cycle": ["0","1"], "origin": 0, "fiber": 0.0},
                 "duration": 3.0}]})", flow);
  CHECK(po.periodic);
  CHECK(po.entries.size() == 1);

  // The bare list form infers delta and t_min.
  PseudoOrbit bare = parse_pseudo_orbit_text(R"([
    {"point": {"past_cycle": ["0","1"], "core": [],
               "future_cycle": ["0","1"], "origin": 0, "fiber": 0.0},
     "duration": 3.0},
    {"point": {"past_cycle": ["0","1"], "core": [],
               "future_cycle": ["0","1"], "origin": 0, "fiber": 0.0},
     "duration": 6.0}])", flow);
  CHECK_FALSE(bare.periodic);
  CHECK(bare.t_min == 3.0);
  CHECK(bare.entries.size() == 2);
}

TEST_CASE("fmt12 and csv emission are deterministic") {
  CHECK(fmt12(std::log(2.0)) == "0.693147180560");
  CHECK(fmt12(0.0) == "0.00000000000");
  CHECK(fmt12(1.0) == "1.00000000000");
  std::vector<std::pair<double, double>> curve{{0.0, std::log(2.0)}, {1.0, 0.0}};
  CHECK(curve_csv(curve) ==
        "q,pressure\n0.00000000000,0.693147180560\n1.00000000000,0.00000000000\n");
}

TEST_SUITE_END();
