#include "thermoflow/suspension.hpp"

#include <algorithm>
#include <cmath>

#include "thermoflow/tolerances.hpp"

namespace tmf {

void validate_flow(const SuspensionFlow& flow) {
  validate_sft(flow.base);
  validate_potential(flow.base, flow.roof);
  if (flow.roof.min_value() <= 0.0)
    fail(Err::NonpositiveRoof, "roof must be strictly positive (min " +
                                   std::to_string(flow.roof.min_value()) + ")");
}

void validate_flow_point(const SuspensionFlow& flow, const FlowPoint& p) {
  validate_point(flow.base, p.base_point);
  double r = flow.roof_at(p.base_point);
  if (p.fiber < 0.0 || p.fiber >= r)
    fail(Err::ValidationError, "fiber " + std::to_string(p.fiber) +
                                   " outside [0, " + std::to_string(r) + ")");
}

int FiberPotential::base_window() const {
  int w = 1;
  for (const auto& t : terms) w = std::max(w, t.coeff.window);
  return w;
}

Polynomial FiberPotential::fiber_poly(const SymbolicPoint& x, long i) const {
  Polynomial p;
  for (const auto& t : terms) p = p.plus(Polynomial::monomial(t.degree, t.coeff.value_at(x, i)));
  return p;
}

Polynomial FiberPotential::fiber_poly_word(const Word& w) const {
  Polynomial p;
  for (const auto& t : terms) {
    Word prefix(w.begin(), w.begin() + t.coeff.window);
    p = p.plus(Polynomial::monomial(t.degree, t.coeff.value(prefix)));
  }
  return p;
}

FiberPotential FiberPotential::constant(const Sft& g, double c, int window) {
  FiberPotential f;
  f.terms.push_back({0, Potential::constant(g, c, window)});
  return f;
}

void validate_fiber_potential(const Sft& g, const FiberPotential& f) {
  for (const auto& t : f.terms) {
    if (t.degree < 0) fail(Err::ValidationError, "fiber degree must be nonnegative");
    validate_potential(g, t.coeff);
  }
}

std::pair<FlowPoint, long> flow_evaluate_steps(const SuspensionFlow& flow, const FlowPoint& p,
                                               double t) {
  SymbolicPoint x = p.base_point;
  double s = p.fiber + t;
  long steps = 0;
  while (s >= flow.roof_at(x)) {
    s -= flow.roof_at(x);
    x = shift_point(x, 1);
    ++steps;
  }
  while (s < 0.0) {
    x = shift_point(x, -1);
    s += flow.roof_at(x);
    --steps;
  }
  return {{x, s}, steps};
}

FlowPoint flow_evaluate(const SuspensionFlow& flow, const FlowPoint& p, double t) {
  return flow_evaluate_steps(flow, p, t).first;
}

Potential delta_potential(const SuspensionFlow& flow, const FiberPotential& f) {
  int window = std::max(flow.roof.window, f.base_window());
  Potential out;
  out.window = window;
  for (const auto& w : enumerate_words(flow.base, window)) {
    Word rw(w.begin(), w.begin() + flow.roof.window);
    double r = flow.roof.value(rw);
    out.table[w] = f.fiber_poly_word(w).integral(0.0, r);
  }
  return out;
}

namespace {

// Shared setup for Bowen-equation solves: recode so delta f and R live as
// window<=2 potentials on a fixed graph, then bisect in c.
struct BowenProblem {
  Sft graph;
  Potential delta_f;
  Potential roof;

  double pressure_at(double c) const {
    return pressure(graph, combine(graph, delta_f, roof, -c));
  }
};

BowenProblem make_bowen(const SuspensionFlow& flow, const FiberPotential& f) {
  Potential df = delta_potential(flow, f);
  int window = std::max(df.window, flow.roof.window);
  if (window <= 2) return {flow.base, df, flow.roof};
  HigherBlock hb = higher_block(flow.base, window - 1);
  Potential df2, r2;
  df2.window = r2.window = 2;
  for (const auto& bw : enumerate_words(hb.block_sft, 2)) {
    Word orig = hb.decode_word(bw);
    Word dfw(orig.begin(), orig.begin() + df.window);
    Word rw(orig.begin(), orig.begin() + flow.roof.window);
    df2.table[bw] = df.value(dfw);
    r2.table[bw] = flow.roof.value(rw);
  }
  return {hb.block_sft, df2, r2};
}

double bowen_root(const BowenProblem& bp) {
  double h_top = pressure(bp.graph, Potential::constant(bp.graph, 0.0));
  double df_min = bp.delta_f.min_value(), df_max = bp.delta_f.max_value();
  double r_min = bp.roof.min_value(), r_max = bp.roof.max_value();
  if (r_min <= 0.0) fail(Err::NonpositiveRoof, "roof must be positive");
  double lo = (df_min - h_top * r_max) / r_min - 1.0;
  double hi = (df_max + h_top * r_max) / r_min + 1.0;
  // The stated bracket can fail to straddle when r_max < 1; expand until it does.
  double span = std::max(1.0, hi - lo);
  for (int guard = 0; bp.pressure_at(lo) < 0.0 && guard < 64; ++guard) lo -= span;
  for (int guard = 0; bp.pressure_at(hi) > 0.0 && guard < 64; ++guard) hi += span;
  while (hi - lo > tol().bowen_root) {
    double mid = 0.5 * (lo + hi);
    if (bp.pressure_at(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  double c = 0.5 * (lo + hi);
  double resid = bp.pressure_at(c);
  if (std::abs(resid) > tol().bowen_residual)
    fail(Err::ToleranceFailure,
         "Bowen residual " + std::to_string(resid) + " at c = " + std::to_string(c));
  return c;
}

}  // namespace

double flow_pressure(const SuspensionFlow& flow, const FiberPotential& f) {
  validate_flow(flow);
  if (!is_irreducible(flow.base)) fail(Err::NotIrreducible, "flow pressure needs an irreducible base");
  return bowen_root(make_bowen(flow, f));
}

FlowMeasure flow_equilibrium(const SuspensionFlow& flow, const FiberPotential& f) {
  validate_flow(flow);
  if (!is_irreducible(flow.base))
    fail(Err::NotIrreducible, "flow equilibrium needs an irreducible base");
  Potential df = delta_potential(flow, f);
  if (std::max(df.window, flow.roof.window) > 2)
    fail(Err::WindowMismatch, "flow equilibrium needs windows <= 2 (recode the flow first)");
  double c = flow_pressure(flow, f);
  MarkovMeasure nu = equilibrium_measure(flow.base, combine(flow.base, df, flow.roof, -c));
  return lift_measure(flow, nu);
}

FlowMeasure lift_measure(const SuspensionFlow& flow, const MarkovMeasure& nu) {
  FlowMeasure mu;
  mu.base_measure = nu;
  mu.roof_integral = integrate(nu, flow.roof);
  if (mu.roof_integral <= 0.0) fail(Err::NonpositiveRoof, "mean roof must be positive");
  return mu;
}

MarkovMeasure project_measure(const SuspensionFlow& flow, const FlowMeasure& mu) {
  (void)flow;
  return mu.base_measure;
}

double flow_entropy(const SuspensionFlow& flow, const FlowMeasure& mu) {
  (void)flow;
  return entropy(mu.base_measure) / mu.roof_integral;
}

double flow_integral(const SuspensionFlow& flow, const FlowMeasure& mu, const FiberPotential& f) {
  Potential df = delta_potential(flow, f);
  return integrate(mu.base_measure, df) / mu.roof_integral;
}

std::pair<double, FlowMeasure> flow_mme(const SuspensionFlow& flow) {
  double h = flow_pressure(flow, FiberPotential::zero());
  Potential neg = scale(flow.roof, -h);
  MarkovMeasure nu = equilibrium_measure(flow.base, neg);
  return {h, lift_measure(flow, nu)};
}

std::pair<SuspensionFlow, HigherBlock> recode_flow(const SuspensionFlow& flow, int n) {
  HigherBlock hb = higher_block(flow.base, n);
  SuspensionFlow out;
  out.base = hb.block_sft;
  out.roof = recode_window(flow.roof, hb);
  return {out, hb};
}

}  // namespace tmf
