#include "thermoflow/factors.hpp"

#include <cmath>
#include <random>

#include "doctest.h"
#include "support.hpp"

using namespace tmf;
using namespace tmf::testing;

namespace {

BlockCode xor_code() {
  Sft full = full_shift(2);
  std::map<Word, std::string> table;
  table[{0, 0}] = "0";
  table[{0, 1}] = "1";
  table[{1, 0}] = "1";
  table[{1, 1}] = "0";
  return make_block_code(full, 2, table);
}

BlockCode identity_code(const Sft& g) {
  std::map<Word, std::string> table;
  for (int s = 0; s < g.state_count(); ++s) table[{s}] = g.states[s];
  return make_block_code(g, 1, table);
}

// Independent diamond search: breadth-first over pair states (a, b, split),
// looking for an equal-endpoint pair path of length <= max_len that splits.
bool brute_force_has_diamond(const BlockCode& code, int max_len) {
  HigherBlock hb = higher_block(code.source, code.window);
  int nb = hb.block_sft.state_count();
  std::vector<int> pi(nb);
  for (int b = 0; b < nb; ++b) pi[b] = code.map.at(hb.block_words[b]);
  std::set<std::tuple<int, int, bool>> frontier, seen;
  for (int s = 0; s < nb; ++s) frontier.insert({s, s, false});
  seen = frontier;
  for (int len = 1; len <= max_len; ++len) {
    std::set<std::tuple<int, int, bool>> next;
    for (auto [a, b, split] : frontier)
      for (int a2 : hb.block_sft.out[a])
        for (int b2 : hb.block_sft.out[b]) {
          if (pi[a2] != pi[b2]) continue;
          bool split2 = split || a2 != b2;
          if (split2 && a2 == b2) return true;
          if (seen.insert({a2, b2, split2}).second) next.insert({a2, b2, split2});
        }
    frontier.swap(next);
  }
  return false;
}

}  // namespace

TEST_SUITE_BEGIN("factors");

TEST_CASE("identity code is a degree-1 conjugacy") {
  Sft g = golden_mean();
  BlockCode id = identity_code(g);
  FiniteToOneReport rep = check_finite_to_one(id);
  CHECK(rep.finite_to_one);
  CHECK(rep.right_resolving);
  REQUIRE(rep.degree.has_value());
  CHECK(*rep.degree == 1);

  SuspensionFlow flow{g, table1(g, {1.0, 2.0})};
  FactorFlow ff = apply_code(id, flow);
  CHECK(ff.flow.base.edges == g.edges);
  for (int s = 0; s < 2; ++s) CHECK(ff.flow.roof.value({s}) == flow.roof.value({s}));
}

TEST_CASE("xor code maps the full 2-shift onto itself with degree 2") {
  BlockCode code = xor_code();
  CHECK(code.target.state_count() == 2);
  CHECK(code.target.edges.size() == 4);
  FiniteToOneReport rep = check_finite_to_one(code);
  CHECK(rep.finite_to_one);
  CHECK(rep.right_resolving);
  REQUIRE(rep.degree.has_value());
  CHECK(*rep.degree == 2);
  // Every image sequence has exactly two preimages (global flip).
  for (int len = 1; len <= 10; ++len)
    for (const Word& w : enumerate_words(code.target, len))
      CHECK(count_preimage_paths(code, w) == 2);
}

TEST_CASE("collapse-everything code is rejected as not finite-to-one") {
  Sft full = full_shift(2);
  std::map<Word, std::string> table;
  table[{0}] = "z";
  table[{1}] = "z";
  BlockCode collapse = make_block_code(full, 1, table);
  FiniteToOneReport rep = check_finite_to_one(collapse);
  CHECK_FALSE(rep.finite_to_one);
  SuspensionFlow flow{full, Potential::constant(full, 1.0)};
  CHECK_THROWS_WITH_AS(pressure_preservation(collapse, flow, FiberPotential::zero()),
                       doctest::Contains("NotFiniteToOne"), Error);
}

TEST_CASE("diamond certificate agrees with brute force on random codes") {
  std::mt19937_64 rng(313371);
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    int n = uniform_int(rng, 2, 3);
    Sft src = random_strongly_connected(rng, n, 0.5);
    int nletters = uniform_int(rng, 1, 3);
    std::map<Word, std::string> table;
    for (int s = 0; s < n; ++s)
      table[{s}] = std::string(1, static_cast<char>('A' + uniform_int(rng, 0, nletters - 1)));
    BlockCode code;
    try {
      code = make_block_code(src, 1, table);
    } catch (const Error&) {
      continue;  // factor not onto its image graph: out of scope here
    }
    ++checked;
    bool brute = brute_force_has_diamond(code, 10);
    CHECK(check_finite_to_one(code).finite_to_one == !brute);
  }
  CHECK(checked >= 20);
}

TEST_CASE("apply_code commutes with the flows") {
  BlockCode code = xor_code();
  Sft full = full_shift(2);
  SuspensionFlow flow{full, Potential::constant(full, 1.0)};
  FactorFlow ff = apply_code(code, flow);
  std::mt19937_64 rng(555);
  SymbolicPoint x;
  x.past_cycle = {0, 1, 1};
  x.core = {0, 0, 1, 0, 1, 1};
  x.future_cycle = {1, 0, 0};
  x.origin_index = 2;
  for (int trial = 0; trial < 20; ++trial) {
    double t = uniform(rng, -5.0, 5.0);
    double fiber = uniform(rng, 0.0, 0.99);
    FlowPoint p{x, fiber};
    FlowPoint moved = flow_evaluate(flow, p, t);
    FlowPoint mapped_then_moved =
        flow_evaluate(ff.flow, FlowPoint{apply_code_point(code, x), fiber}, t);
    FlowPoint moved_then_mapped{apply_code_point(code, moved.base_point), moved.fiber};
    CHECK(points_equal(mapped_then_moved.base_point, moved_then_mapped.base_point));
    CHECK(mapped_then_moved.fiber == doctest::Approx(moved_then_mapped.fiber).epsilon(1e-12));
  }
}

TEST_CASE("apply_code rejects roofs that vary across fibers") {
  BlockCode code = xor_code();
  Sft full = full_shift(2);
  // Roof depends on the first source symbol, which the xor image forgets.
  SuspensionFlow flow{full, table1(full, {1.0, 2.0})};
  CHECK_THROWS_WITH_AS(apply_code(code, flow), doctest::Contains("RoofNotFiberConstant"), Error);
}

TEST_CASE("pressure preservation through the xor code") {
  BlockCode code = xor_code();
  Sft full = full_shift(2);
  SuspensionFlow flow{full, Potential::constant(full, 1.0)};

  PressurePreservationReport rep = pressure_preservation(code, flow, FiberPotential::zero());
  CHECK(rep.passed);
  CHECK(rep.pressure_source == doctest::Approx(std::log(2.0)).epsilon(1e-10));
  CHECK(rep.pressure_target == doctest::Approx(std::log(2.0)).epsilon(1e-10));
  CHECK(std::abs(rep.pressure_source - rep.pressure_target) <= 1e-9);
  CHECK(rep.max_cylinder_discrepancy <= 1e-6);

  // A nonzero fiber potential on the target.
  FiberPotential g0;
  g0.terms.push_back({0, table1(code.target, {0.2, -0.5})});
  PressurePreservationReport rep2 = pressure_preservation(code, flow, g0);
  CHECK(rep2.passed);
  CHECK(std::abs(rep2.pressure_source - rep2.pressure_target) <= 1e-9);

  // Degree-invariance of flow entropy under the finite-to-one factor.
  auto [h_src, mme_src] = flow_mme(flow);
  auto [h_tgt, mme_tgt] = flow_mme(apply_code(code, flow).flow);
  CHECK(std::abs(h_src - h_tgt) <= 1e-9);
}

TEST_CASE("higher-block conjugacy code preserves pressure exactly") {
  Sft g = golden_mean();
  HigherBlock hb = higher_block(g, 2);
  // Code from the 2-block presentation back to the original: first symbol.
  std::map<Word, std::string> table;
  for (int b = 0; b < hb.block_sft.state_count(); ++b)
    table[{b}] = g.states[hb.block_words[b][0]];
  BlockCode down = make_block_code(hb.block_sft, 1, table);
  FiniteToOneReport rep = check_finite_to_one(down);
  CHECK(rep.finite_to_one);
  REQUIRE(rep.degree.has_value());
  CHECK(*rep.degree == 1);

  SuspensionFlow flow{hb.block_sft, Potential::constant(hb.block_sft, 1.0)};
  FiberPotential f;
  f.terms.push_back({0, table1(g, {0.0, -1.0})});
  f.terms.push_back({1, Potential::constant(g, 0.3)});
  PressurePreservationReport pr = pressure_preservation(down, flow, f);
  CHECK(pr.passed);
  CHECK(std::abs(pr.pressure_source - pr.pressure_target) <= 1e-10);
}

TEST_SUITE_END();
