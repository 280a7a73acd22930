#include "thermoflow/shadowing.hpp"

#include <algorithm>
#include <cmath>

#include "thermoflow/tolerances.hpp"

namespace tmf {

double flow_distance(const SuspensionFlow& flow, const FlowPoint& p, const FlowPoint& q) {
  (void)flow;
  return shift_distance(p.base_point, q.base_point) + std::abs(p.fiber - q.fiber);
}

double orbit_distance(const SuspensionFlow& flow, const FlowPoint& p, const FlowPoint& q,
                      double h_max) {
  double best = flow_distance(flow, p, q);
  double df = q.fiber - p.fiber;
  double roof0 = flow.roof_at(p.base_point);
  double roof_prev = flow.roof.value_at(p.base_point, -1);
  for (double h : {df, df + roof0, df - roof_prev}) {
    if (std::abs(h) > h_max) continue;
    best = std::min(best, std::abs(h) + flow_distance(flow, flow_evaluate(flow, p, h), q));
  }
  return best;
}

int agreement_depth(const SuspensionFlow& flow, double epsilon) {
  return static_cast<int>(std::ceil(std::max(0.0, -std::log(epsilon)))) + flow.roof.window;
}

double expansivity_certificate(const SuspensionFlow& flow, double epsilon) {
  double n = agreement_depth(flow, epsilon);
  double rmin = flow.roof.min_value(), rmax = flow.roof.max_value();
  return std::min(epsilon, std::exp(-n)) * rmin / (2.0 * rmax);
}

void validate_pseudo_orbit(const SuspensionFlow& flow, const PseudoOrbit& po) {
  if (po.entries.empty()) fail(Err::ValidationError, "pseudo-orbit has no entries");
  for (const auto& e : po.entries) {
    validate_flow_point(flow, e.point);
    if (e.duration < po.t_min)
      fail(Err::ValidationError, "duration below t_min");
  }
  size_t jumps = po.entries.size() - (po.periodic ? 0 : 1);
  for (size_t k = 0; k < jumps; ++k) {
    FlowPoint land = flow_evaluate(flow, po.entries[k].point, po.entries[k].duration);
    const FlowPoint& next = po.entries[(k + 1) % po.entries.size()].point;
    double d = flow_distance(flow, land, next);
    if (d > po.delta)
      fail(Err::ValidationError,
           "jump " + std::to_string(k) + " has distance " + std::to_string(d) +
               " > delta " + std::to_string(po.delta));
  }
}

namespace {

// Assemble a point from a coordinate function that is past_period-periodic
// below lo and fut_period-periodic from hi on; the cycles are sampled from
// the function itself, so the tails are phase-correct by construction.
template <typename CoordFn>
SymbolicPoint assemble_point(CoordFn&& coord, long lo, long hi, long past_period,
                             long fut_period) {
  SymbolicPoint z;
  for (long i = lo - past_period; i < lo; ++i) z.past_cycle.push_back(coord(i));
  for (long i = lo; i < hi; ++i) z.core.push_back(coord(i));
  for (long i = hi; i < hi + fut_period; ++i) z.future_cycle.push_back(coord(i));
  z.origin_index = -lo;
  return z;
}

// Orbit crossing times in (0, T): exact partial roof sums.
std::vector<double> crossing_times(const SuspensionFlow& flow, const FlowPoint& p, double T) {
  std::vector<double> ev;
  double acc = flow.roof_at(p.base_point) - p.fiber;
  long j = 1;
  while (acc < T) {
    ev.push_back(acc);
    acc += flow.roof.value_at(p.base_point, j++);
  }
  return ev;
}

struct SpliceData {
  SymbolicPoint point;             // spliced base sequence
  std::vector<long> block_start;   // M_k: base offset where block k begins
  std::vector<double> land_fiber;  // fiber after flowing entry k by its duration
  std::vector<long> steps;         // m_k
};

SpliceData splice_blocks(const SuspensionFlow& flow, const PseudoOrbit& po, int n_req) {
  const auto& e = po.entries;
  size_t K = e.size();
  SpliceData sd;
  sd.block_start.assign(K + 1, 0);
  sd.land_fiber.assign(K, 0.0);
  sd.steps.assign(K, 0);
  for (size_t k = 0; k < K; ++k) {
    auto [land, m] = flow_evaluate_steps(flow, e[k].point, e[k].duration);
    if (m < 1)
      fail(Err::HorizonTooShort, "entry " + std::to_string(k) + " crosses no roof");
    sd.steps[k] = m;
    sd.land_fiber[k] = land.fiber;
    sd.block_start[k + 1] = sd.block_start[k] + m;
    bool has_jump = po.periodic || k + 1 < K;
    if (has_jump) {
      const FlowPoint& next = e[(k + 1) % K].point;
      long agree = first_disagreement(land.base_point, next.base_point);
      if (agree >= 0 && agree < n_req)
        fail(Err::DeltaTooLarge, "need base agreement to depth " + std::to_string(n_req) +
                                     ", have " + std::to_string(agree) + " at jump " +
                                     std::to_string(k));
    }
  }
  // Assemble the spliced symbolic point.
  if (po.periodic) {
    Word cycle;
    for (size_t k = 0; k < K; ++k)
      for (long j = 0; j < sd.steps[k]; ++j)
        cycle.push_back(e[k].point.base_point.coord(j));
    sd.point = periodic_point(cycle);
  } else {
    const SymbolicPoint& x0 = e[0].point.base_point;
    const SymbolicPoint& xl = e[K - 1].point.base_point;
    long lo = std::min<long>(0, x0.explicit_lo());
    long hi = sd.block_start[K - 1] + std::max<long>(1, xl.explicit_hi());
    auto coord = [&](long i) -> int {
      if (i < 0) return x0.coord(i);
      if (i >= sd.block_start[K - 1]) return xl.coord(i - sd.block_start[K - 1]);
      size_t k = 0;
      while (k + 1 < K && i >= sd.block_start[k + 1]) ++k;
      return e[k].point.base_point.coord(i - sd.block_start[k]);
    };
    sd.point = assemble_point(coord, lo, hi, static_cast<long>(x0.past_cycle.size()),
                              static_cast<long>(xl.future_cycle.size()));
  }
  validate_point(flow.base, sd.point);
  return sd;
}

}  // namespace

TraceCertificate shadow(const SuspensionFlow& flow, const PseudoOrbit& po, double epsilon) {
  validate_flow(flow);
  validate_pseudo_orbit(flow, po);
  if (epsilon <= 0.0) fail(Err::ValidationError, "epsilon must be positive");
  int n_req = agreement_depth(flow, epsilon);
  SpliceData sd = splice_blocks(flow, po, n_req);

  const auto& e = po.entries;
  size_t K = e.size();
  TraceCertificate cert;
  cert.epsilon = epsilon;
  cert.traced_point = FlowPoint{sd.point, e[0].point.fiber};
  validate_flow_point(flow, cert.traced_point);

  // rho at block boundaries: the true orbit reaches base offset M_k carrying
  // the landed fiber of the previous block.
  std::vector<double> pseudo_t(K + 1, 0.0), true_t(K + 1, 0.0);
  for (size_t k = 0; k < K; ++k) pseudo_t[k + 1] = pseudo_t[k] + e[k].duration;
  double roof_acc = 0.0;
  for (size_t k = 0; k < K; ++k) {
    for (long j = 0; j < sd.steps[k]; ++j)
      roof_acc += flow.roof.value_at(sd.point, sd.block_start[k] + j);
    true_t[k + 1] = roof_acc - cert.traced_point.fiber + sd.land_fiber[k];
  }
  cert.reparam_breakpoints.push_back({0.0, 0.0});
  for (size_t k = 1; k <= K; ++k)
    cert.reparam_breakpoints.push_back({pseudo_t[k], true_t[k]});
  for (size_t k = 0; k < K; ++k) {
    double slope = (true_t[k + 1] - true_t[k]) / e[k].duration;
    cert.slopes.push_back(slope);
    if (std::abs(slope - 1.0) >= epsilon)
      fail(Err::ToleranceFailure, "reparametrization slope " + std::to_string(slope) +
                                      " violates the tracing bound");
  }

  // Exact segment comparison: events are both orbits' roof crossings plus
  // segment midpoints inside each block.
  double maxd = 0.0;
  for (size_t k = 0; k < K; ++k) {
    double T = e[k].duration;
    double slope = cert.slopes[k];
    std::vector<double> events = crossing_times(flow, e[k].point, T);
    FlowPoint zk = flow_evaluate(flow, cert.traced_point, true_t[k]);
    for (double tz : crossing_times(flow, zk, true_t[k + 1] - true_t[k]))
      events.push_back(tz / slope);
    events.push_back(0.0);
    events.push_back(T);
    std::sort(events.begin(), events.end());
    std::vector<double> probe = events;
    for (size_t i = 0; i + 1 < events.size(); ++i)
      probe.push_back(0.5 * (events[i] + events[i + 1]));
    for (double s : probe) {
      if (s < 0.0 || s > T) continue;
      FlowPoint ps = flow_evaluate(flow, e[k].point, s);
      FlowPoint zs = flow_evaluate(flow, cert.traced_point, true_t[k] + slope * s);
      maxd = std::max(maxd, orbit_distance(flow, zs, ps, epsilon));
    }
  }
  cert.max_distance = maxd;
  if (maxd > epsilon)
    fail(Err::ToleranceFailure,
         "traced orbit strays to distance " + std::to_string(maxd) + " > epsilon");
  return cert;
}

CloseResult close_periodic(const SuspensionFlow& flow, const FlowPoint& p, double t,
                           double epsilon) {
  validate_flow(flow);
  validate_flow_point(flow, p);
  if (epsilon <= 0.0) fail(Err::ValidationError, "epsilon must be positive");
  if (t < flow.roof.max_value())
    fail(Err::HorizonTooShort, "t below the closing horizon T(eps) = max roof");
  double delta = expansivity_certificate(flow, epsilon);
  auto [land, m] = flow_evaluate_steps(flow, p, t);
  if (m < flow.roof.window)
    fail(Err::HorizonTooShort, "orbit crosses fewer roofs than the roof window");
  double d = flow_distance(flow, p, land);
  if (d > delta)
    fail(Err::DeltaTooLarge, "d(p, theta^t p) = " + std::to_string(d) +
                                 " exceeds delta(eps) = " + std::to_string(delta));
  int n_req = agreement_depth(flow, epsilon);
  long agree = first_disagreement(p.base_point, land.base_point);
  if (agree >= 0 && agree < n_req)
    fail(Err::DeltaTooLarge, "base agreement depth " + std::to_string(agree) + " below " +
                                 std::to_string(n_req));

  Word cycle;
  for (long j = 0; j < m; ++j) cycle.push_back(p.base_point.coord(j));
  CloseResult res;
  res.periodic_point = FlowPoint{periodic_point(cycle), p.fiber};
  validate_flow_point(flow, res.periodic_point);
  double period = 0.0;
  for (long j = 0; j < m; ++j)
    period += flow.roof.value_at(res.periodic_point.base_point, j);
  res.period = period;
  if (std::abs(res.period - t) > epsilon)
    fail(Err::ToleranceFailure, "period misses t by " + std::to_string(res.period - t));

  // Exact periodicity: flowing by the period returns the representative.
  FlowPoint around = flow_evaluate(flow, res.periodic_point, res.period);
  if (!points_equal(around.base_point, res.periodic_point.base_point) ||
      std::abs(around.fiber - res.periodic_point.fiber) > tol().segment_abs)
    fail(Err::ToleranceFailure, "closed orbit fails to return exactly");

  double horizon = std::min(t, res.period);
  std::vector<double> events = crossing_times(flow, p, horizon);
  for (double s : crossing_times(flow, res.periodic_point, horizon)) events.push_back(s);
  events.push_back(0.0);
  events.push_back(horizon);
  std::sort(events.begin(), events.end());
  std::vector<double> probe = events;
  for (size_t i = 0; i + 1 < events.size(); ++i)
    probe.push_back(0.5 * (events[i] + events[i + 1]));
  double maxd = 0.0;
  for (double s : probe) {
    FlowPoint a = flow_evaluate(flow, p, s);
    FlowPoint b = flow_evaluate(flow, res.periodic_point, s);
    maxd = std::max(maxd, orbit_distance(flow, b, a, epsilon));
  }
  res.max_distance = maxd;
  if (maxd > epsilon)
    fail(Err::ToleranceFailure, "closing orbit strays to " + std::to_string(maxd));
  return res;
}

BracketResult bracket(const SuspensionFlow& flow, const FlowPoint& x, const FlowPoint& y,
                      double epsilon) {
  validate_flow(flow);
  validate_flow_point(flow, x);
  validate_flow_point(flow, y);
  if (epsilon <= 0.0) fail(Err::ValidationError, "epsilon must be positive");
  int n_req = agreement_depth(flow, epsilon);
  long agree = first_disagreement(x.base_point, y.base_point);
  if (agree >= 0 && agree < n_req)
    fail(Err::DeltaTooLarge, "base agreement depth " + std::to_string(agree) + " below " +
                                 std::to_string(n_req));
  if (std::abs(x.fiber - y.fiber) > epsilon)
    fail(Err::DeltaTooLarge, "fiber gap exceeds epsilon");

  const SymbolicPoint& xb = x.base_point;
  const SymbolicPoint& yb = y.base_point;
  long lo = std::min<long>(0, yb.explicit_lo());
  long hi = std::max<long>(1, xb.explicit_hi());
  SymbolicPoint z = assemble_point([&](long i) { return i < 0 ? yb.coord(i) : xb.coord(i); },
                                   lo, hi, static_cast<long>(yb.past_cycle.size()),
                                   static_cast<long>(xb.future_cycle.size()));
  validate_point(flow.base, z);

  BracketResult res;
  res.point = FlowPoint{z, y.fiber};
  validate_flow_point(flow, res.point);
  res.tau = y.fiber - x.fiber;
  return res;
}

DichotomyResult suspension_dichotomy(const SuspensionFlow& flow) {
  validate_flow(flow);
  if (!is_irreducible(flow.base)) fail(Err::NotIrreducible, "dichotomy needs an irreducible base");
  if (!is_aperiodic(flow.base)) fail(Err::NotAperiodic, "dichotomy needs an aperiodic base");
  Potential roof = flow.roof;
  DichotomyResult res;
  if (roof.window > 1) {
    HigherBlock hb = higher_block(flow.base, roof.window);
    Potential r1 = recode_window(roof, hb);
    auto c = cohomologous_to_constant(hb.block_sft, r1);
    res.constant_suspension = c.has_value();
    res.c = c.value_or(0.0);
  } else {
    auto c = cohomologous_to_constant(flow.base, roof);
    res.constant_suspension = c.has_value();
    res.c = c.value_or(0.0);
  }
  return res;
}

}  // namespace tmf
