#include "thermoflow/timechange.hpp"

#include <cmath>
#include <random>

#include "doctest.h"
#include "support.hpp"

using namespace tmf;
using namespace tmf::testing;

namespace {

FiberPotential fiber_const_by_state(const Sft& g, std::vector<double> vals) {
  FiberPotential f;
  f.terms.push_back({0, table1(g, std::move(vals))});
  return f;
}

}  // namespace

TEST_SUITE_BEGIN("timechange");

TEST_CASE("ell golden examples") {
  Sft g = golden_mean();
  SuspensionFlow unit{g, Potential::constant(g, 1.0)};
  FlowPoint p{periodic_point({0, 1}), 0.0};

  FiberPotential two = FiberPotential::constant(g, 2.0);
  for (double t : {0.5, 1.0, 3.7}) CHECK(ell(unit, two, p, t) == doctest::Approx(t / 2).epsilon(1e-12));

  FiberPotential one = FiberPotential::constant(g, 1.0);
  for (double t : {-2.0, 0.3, 5.0}) CHECK(ell(unit, one, p, t) == doctest::Approx(t).epsilon(1e-12));

  // rate 1 on symbol 0 and 2 on symbol 1, base (01)..., unit roof, t = 2:
  // the first fiber contributes 1, then half of the rate-2 fiber.
  FiberPotential mixed = fiber_const_by_state(g, {1.0, 2.0});
  CHECK(ell(unit, mixed, p, 2.0) == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("ell rejects nonpositive rates") {
  Sft g = golden_mean();
  SuspensionFlow unit{g, Potential::constant(g, 1.0)};
  FlowPoint p{periodic_point({0, 1}), 0.0};
  CHECK_THROWS_WITH_AS(ell(unit, fiber_const_by_state(g, {1.0, 0.0}), p, 1.0),
                       doctest::Contains("NonpositiveRate"), Error);
}

TEST_CASE("time_changed_evaluate golden examples") {
  Sft g = golden_mean();
  SuspensionFlow unit{g, Potential::constant(g, 1.0)};
  FlowPoint p{periodic_point({0, 1}), 0.25};

  FiberPotential one = FiberPotential::constant(g, 1.0);
  FlowPoint a = time_changed_evaluate(unit, one, p, 1.7);
  FlowPoint b = flow_evaluate(unit, p, 1.7);
  CHECK(points_equal(a.base_point, b.base_point));
  CHECK(a.fiber == doctest::Approx(b.fiber).epsilon(1e-12));

  FlowPoint zero = time_changed_evaluate(unit, one, p, 0.0);
  CHECK(points_equal(zero.base_point, p.base_point));
  CHECK(zero.fiber == doctest::Approx(p.fiber));

  FiberPotential two = FiberPotential::constant(g, 2.0);
  FlowPoint q{periodic_point({0, 1}), 0.0};
  FlowPoint half = time_changed_evaluate(unit, two, q, 2.0);
  FlowPoint direct = flow_evaluate(unit, q, 1.0);
  CHECK(points_equal(half.base_point, direct.base_point));
  CHECK(half.fiber == doctest::Approx(direct.fiber).epsilon(1e-12));
}

TEST_CASE("time_changed_roof golden examples") {
  Sft g = golden_mean();
  Potential roof = table1(g, {1.0, 2.0});
  SuspensionFlow flow{g, roof};

  SuspensionFlow same = time_changed_roof(flow, FiberPotential::constant(g, 1.0));
  for (int s = 0; s < 2; ++s) CHECK(same.roof.value({s}) == doctest::Approx(roof.value({s})));

  SuspensionFlow scaled = time_changed_roof(flow, FiberPotential::constant(g, 3.0));
  for (int s = 0; s < 2; ++s)
    CHECK(scaled.roof.value({s}) == doctest::Approx(3.0 * roof.value({s})));

  SuspensionFlow unit{g, Potential::constant(g, 1.0)};
  SuspensionFlow changed = time_changed_roof(unit, fiber_const_by_state(g, {1.0, 3.0}));
  CHECK(changed.roof.value({0}) == doctest::Approx(1.0));
  CHECK(changed.roof.value({1}) == doctest::Approx(3.0));
}

TEST_CASE("transform_measure keeps the base and rescales the roof integral") {
  Sft full = full_shift(2);
  SuspensionFlow unit{full, Potential::constant(full, 1.0)};
  FlowMeasure mme = flow_equilibrium(unit, FiberPotential::zero());

  FlowMeasure same = transform_measure(unit, FiberPotential::constant(full, 1.0), mme);
  CHECK(same.roof_integral == doctest::Approx(mme.roof_integral));

  FlowMeasure scaled = transform_measure(unit, FiberPotential::constant(full, 2.5), mme);
  CHECK(scaled.roof_integral == doctest::Approx(2.5).epsilon(1e-12));

  FlowMeasure skew = transform_measure(unit, fiber_const_by_state(full, {1.0, 3.0}), mme);
  CHECK(skew.roof_integral == doctest::Approx(2.0).epsilon(1e-12));  // (1+3)/2
  CHECK(skew.base_measure.stationary[0] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("inverse_time_change round trips") {
  Sft g = golden_mean();
  Potential roof = table1(g, {1.0, 2.0});
  SuspensionFlow flow{g, roof};

  // rate c then 1/c recovers the roof; the quadrature should be well below 1e-12.
  SuspensionFlow back = inverse_time_change(flow, FiberPotential::constant(g, 3.0));
  for (int s = 0; s < 2; ++s)
    CHECK(back.roof.value({s}) == doctest::Approx(roof.value({s})).epsilon(1e-12));

  SuspensionFlow same = inverse_time_change(flow, FiberPotential::constant(g, 1.0));
  for (int s = 0; s < 2; ++s)
    CHECK(same.roof.value({s}) == doctest::Approx(roof.value({s})).epsilon(1e-12));

  SuspensionFlow unit{g, Potential::constant(g, 1.0)};
  SuspensionFlow fb = inverse_time_change(unit, fiber_const_by_state(g, {2.0, 5.0}));
  for (int s = 0; s < 2; ++s) CHECK(fb.roof.value({s}) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("round trip on random polynomial rates within 1e-10") {
  std::mt19937_64 rng(20250101);
  for (int trial = 0; trial < 20; ++trial) {
    int n = uniform_int(rng, 2, 4);
    Sft g = random_strongly_connected(rng, n, 0.4);
    Potential roof = random_window1(rng, g, 0.6, 2.0);
    SuspensionFlow flow{g, roof};
    FiberPotential rate;
    rate.terms.push_back({0, random_window1(rng, g, 0.5, 2.0)});
    rate.terms.push_back({1, random_window1(rng, g, -0.15, 0.15)});
    SuspensionFlow back = inverse_time_change(flow, rate);
    for (int s = 0; s < n; ++s)
      CHECK(std::abs(back.roof.value({s}) - roof.value({s})) <= 1e-10);
  }
}

TEST_CASE("ell cocycle and inversion identities on random data") {
  std::mt19937_64 rng(5551212);
  Sft g = golden_mean();
  Potential roof = table1(g, {1.0, 1.6});
  SuspensionFlow flow{g, roof};
  FiberPotential rate;
  rate.terms.push_back({0, table1(g, {0.8, 1.4})});
  rate.terms.push_back({1, table1(g, {0.2, -0.1})});
  SymbolicPoint x;
  x.past_cycle = {0, 1};
  x.core = {0, 0, 1};
  x.future_cycle = {0, 1};
  x.origin_index = 1;
  for (int trial = 0; trial < 100; ++trial) {
    double fiber = uniform(rng, 0.0, 0.99);
    FlowPoint p{x, fiber};
    double t1 = uniform(rng, -4.0, 4.0);
    double t2 = uniform(rng, -4.0, 4.0);
    // Cocycle: ell(y, t1 + t2) = ell(y, t1) + ell(phi_r^{t1} y, t2).
    double l1 = ell(flow, rate, p, t1);
    FlowPoint mid = flow_evaluate(flow, p, l1);
    double l2 = ell(flow, rate, mid, t2);
    double l12 = ell(flow, rate, p, t1 + t2);
    CHECK(std::abs(l12 - (l1 + l2)) <= 1e-10);
    // Inversion: k(y, ell(y, t)) = t.
    double k = time_change_inverse(flow, rate, p, l1);
    CHECK(std::abs(k - t1) <= 1e-10);
    double l_of_k = ell(flow, rate, p, time_change_inverse(flow, rate, p, t2));
    CHECK(std::abs(l_of_k - t2) <= 1e-10);
  }
}

TEST_CASE("is_hyperbolic golden examples") {
  Sft g = golden_mean();
  SuspensionFlow unit{g, Potential::constant(g, 1.0)};

  HyperbolicityReport zero = is_hyperbolic(unit, FiberPotential::zero());
  CHECK(zero.hyperbolic);
  CHECK(zero.pressure == doctest::Approx(std::log(0.5 * (1 + std::sqrt(5.0)))).epsilon(1e-9));
  CHECK(zero.max_flow_average == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(zero.equilibrium_entropy > 1e-10);

  HyperbolicityReport c = is_hyperbolic(unit, FiberPotential::constant(g, -1.3));
  CHECK(c.hyperbolic);  // both sides shift by c

  // Single cycle: h_top = 0, never hyperbolic.
  Sft two = Sft::make({"a", "b"}, {{0, 1}, {1, 0}});
  SuspensionFlow cyc{two, Potential::constant(two, 1.0)};
  HyperbolicityReport flat = is_hyperbolic(cyc, FiberPotential::constant(two, 0.5));
  CHECK_FALSE(flat.hyperbolic);
  CHECK(flat.equilibrium_entropy <= 1e-10);

  FiberPotential fc = fiber_const_by_state(g, {0.0, -1.0});
  HyperbolicityReport r = is_hyperbolic(unit, fc);
  CHECK(r.hyperbolic);
  double root = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * std::exp(-1.0)));
  CHECK(r.pressure == doctest::Approx(std::log(root)).epsilon(1e-9));
  CHECK(r.max_flow_average == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(r.witness_cycle == Word{0});
}

TEST_CASE("hyperbolicity horizon doubling search") {
  Sft g = golden_mean();
  SuspensionFlow unit{g, Potential::constant(g, 1.0)};
  FiberPotential fc = fiber_const_by_state(g, {0.0, -1.0});
  auto t = hyperbolicity_horizon(unit, fc);
  REQUIRE(t.has_value());
  CHECK(*t <= 128.0);
  // And the certified horizon indeed synchronizes.
  CHECK_NOTHROW(synchronize(unit, fc, *t));
}

TEST_CASE("synchronize: constant potential gives constant rate") {
  Sft full = full_shift(2);
  SuspensionFlow unit{full, Potential::constant(full, 1.0)};
  // f = c: r = h_top identically, R' = h_top * R.
  SynchronizationResult sync = synchronize(unit, FiberPotential::constant(full, 0.4), 1.0);
  CHECK(sync.spec.window == 2);
  for (int b = 0; b < sync.synchronized.base.state_count(); ++b) {
    CHECK(sync.synchronized.roof.value({b}) == doctest::Approx(std::log(2.0)).epsilon(1e-10));
    CHECK(sync.spec.rate[b].min() == doctest::Approx(std::log(2.0)).epsilon(1e-10));
    CHECK(sync.spec.rate[b].max() == doctest::Approx(std::log(2.0)).epsilon(1e-10));
  }
  auto [h, mme] = flow_mme(sync.synchronized);
  CHECK(h == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("synchronize: zero potential scales the roof by h_top") {
  Sft g = golden_mean();
  SuspensionFlow flow{g, table1(g, {1.0, 2.0})};
  double h = flow_pressure(flow, FiberPotential::zero());
  SynchronizationResult sync = synchronize(flow, FiberPotential::zero(), 1.0);
  for (size_t b = 0; b < sync.spec.rate.size(); ++b) {
    const Word& w = sync.spec.blocks.block_words[b];
    double r0 = flow.roof.value({w[0]});
    CHECK(sync.spec.rate[b].min() == doctest::Approx(h).epsilon(1e-10));
    CHECK(sync.spec.rate[b].max() == doctest::Approx(h).epsilon(1e-10));
    CHECK(sync.synchronized.roof.value({static_cast<int>(b)}) ==
          doctest::Approx(h * r0).epsilon(1e-10));
  }
  auto [h_sync, mme] = flow_mme(sync.synchronized);
  CHECK(std::abs(h_sync - 1.0) <= 1e-8);
}

TEST_CASE("synchronize: golden-mean fiber-constant example") {
  Sft g = golden_mean();
  SuspensionFlow unit{g, Potential::constant(g, 1.0)};
  FiberPotential fc = fiber_const_by_state(g, {0.0, -1.0});
  SynchronizationResult sync = synchronize(unit, fc, 1.0);
  CHECK(sync.spec.window == 2);  // window-2 base dependence
  // r(v, s) = P - (1-s) F(v0) - s F(v1) is piecewise linear in s.
  double P = sync.spec.pressure_const;
  for (size_t b = 0; b < sync.spec.rate.size(); ++b) {
    const Word& w = sync.spec.blocks.block_words[b];
    const FiberSegments& seg = sync.spec.rate[b];
    REQUIRE(seg.pieces.size() == 1);
    double F0 = (w[0] == 1) ? -1.0 : 0.0;
    double F1 = (w[1] == 1) ? -1.0 : 0.0;
    for (double s : {0.0, 0.3, 0.9})
      CHECK(seg.eval(s) == doctest::Approx(P - ((1 - s) * F0 + s * F1)).epsilon(1e-12));
  }
  auto [h, mme] = flow_mme(sync.synchronized);
  CHECK(std::abs(h - 1.0) <= 1e-8);
}

TEST_CASE("synchronize aborts when the recoding window explodes") {
  // Tiny roofs force dozens of crossings within the horizon.
  Sft g = golden_mean();
  SuspensionFlow flow{g, Potential::constant(g, 0.1)};
  CHECK_THROWS_WITH_AS(synchronize(flow, FiberPotential::zero(), 8.0),
                       doctest::Contains("WindowExplosion"), Error);
}

TEST_CASE("flow pressure recodes combined windows above two") {
  // Window-3 fiber coefficient: the Bowen solve must recode internally and
  // agree with the hand-recoded 2-block flow.
  Sft g = golden_mean();
  SuspensionFlow flow{g, Potential::constant(g, 1.0)};
  Potential c3;
  c3.window = 3;
  for (const auto& w : enumerate_words(g, 3))
    c3.table[w] = -0.3 * w[0] - 0.2 * w[1] + 0.1 * w[2];
  FiberPotential f;
  f.terms.push_back({0, c3});
  double p = flow_pressure(flow, f);

  HigherBlock hb = higher_block(g, 3);
  auto [rflow, hb2] = recode_flow(flow, 3);
  FiberPotential rf;
  rf.terms.push_back({0, recode_window(c3, hb2)});
  CHECK(p == doctest::Approx(flow_pressure(rflow, rf)).epsilon(1e-10));
  (void)hb;
}

TEST_CASE("synchronize rejects non-hyperbolic horizons") {
  Sft two = Sft::make({"a", "b"}, {{0, 1}, {1, 0}});
  SuspensionFlow cyc{two, Potential::constant(two, 1.0)};
  CHECK_THROWS_WITH_AS(synchronize(cyc, FiberPotential::constant(two, 0.0), 1.0),
                       doctest::Contains("NotHyperbolicAtHorizon"), Error);
}

TEST_CASE("verify_synchronization on trivial and derived instances") {
  Sft full = full_shift(2);
  SuspensionFlow unit{full, Potential::constant(full, 1.0)};
  SynchronizationReport triv = verify_synchronization(unit, FiberPotential::zero(), 1.0);
  CHECK(triv.passed);
  CHECK(std::abs(triv.h_top_synchronized - 1.0) <= 1e-10);
  CHECK(triv.max_cylinder_discrepancy <= 1e-10);
  CHECK(triv.density_check_max_error <= 1e-10);

  Sft g = golden_mean();
  SuspensionFlow gm{g, Potential::constant(g, 1.0)};
  FiberPotential fc = fiber_const_by_state(g, {0.0, -1.0});
  SynchronizationReport rep = verify_synchronization(gm, fc, 1.0);
  CHECK(rep.passed);
  CHECK(std::abs(rep.h_top_synchronized - 1.0) <= 1e-8);
  CHECK(rep.max_cylinder_discrepancy <= 1e-6);
  CHECK(rep.density_check_max_error <= 1e-8);
  CHECK(rep.window == 2);
}

TEST_CASE("P_top(Phi, -q r) is strictly decreasing with unique zero at q = 1") {
  Sft g = golden_mean();
  SuspensionFlow gm{g, Potential::constant(g, 1.0)};
  FiberPotential fc = fiber_const_by_state(g, {0.0, -1.0});
  SynchronizationResult sync = synchronize(gm, fc, 1.0);
  const HigherBlock& hb = sync.spec.blocks;
  Potential roof_blocks = recode_window(gm.roof, hb);
  const Potential& rprime = sync.synchronized.roof;  // delta r on blocks
  // P_top(Phi, -q r) solved as Bowen root c(q): P(sigma, -q delta r - c R) = 0.
  auto pq = [&](double q) {
    double lo = -10.0, hi = 10.0;
    for (int it = 0; it < 80; ++it) {
      double mid = 0.5 * (lo + hi);
      Potential pot = combine(hb.block_sft, scale(rprime, -q), roof_blocks, -mid);
      (pressure(hb.block_sft, pot) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  };
  double prev = pq(0.0);
  CHECK(prev == doctest::Approx(std::log(0.5 * (1 + std::sqrt(5.0)))).epsilon(1e-8));
  for (double q : {0.25, 0.5, 0.75, 1.0, 1.25, 1.5}) {
    double cur = pq(q);
    CHECK(cur < prev - 1e-6);
    prev = cur;
  }
  CHECK(std::abs(pq(1.0)) <= 1e-8);  // unique zero at q = 1
}

TEST_SUITE_END();
