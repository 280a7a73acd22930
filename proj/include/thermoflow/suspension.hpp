#pragma once

#include <utility>

#include "thermoflow/polynomial.hpp"
#include "thermoflow/potential.hpp"
#include "thermoflow/thermo.hpp"

namespace tmf {

// Suspension flow over an SFT under a strictly positive locally constant roof.
struct SuspensionFlow {
  Sft base;
  Potential roof;

  double roof_at(const SymbolicPoint& x, long i = 0) const { return roof.value_at(x, i); }
};

void validate_flow(const SuspensionFlow& flow);

// Canonical point (v, s) with 0 <= s < R(v).
struct FlowPoint {
  SymbolicPoint base_point;
  double fiber = 0.0;
};

void validate_flow_point(const SuspensionFlow& flow, const FlowPoint& p);

// f(v, s) = sum_i F_i(v) * s^{d_i} with locally constant coefficients.
struct FiberPotential {
  struct Term {
    int degree = 0;
    Potential coeff;
  };
  std::vector<Term> terms;

  int base_window() const;
  // The fiber polynomial at sigma^i(x).
  Polynomial fiber_poly(const SymbolicPoint& x, long i) const;
  Polynomial fiber_poly_word(const Word& w) const;  // w at least base_window long

  static FiberPotential zero() { return {}; }
  static FiberPotential constant(const Sft& g, double c, int window = 1);
};

void validate_fiber_potential(const Sft& g, const FiberPotential& f);

// Flow-invariant measure represented by its cross-section base measure.
struct FlowMeasure {
  MarkovMeasure base_measure;
  double roof_integral = 0.0;  // = integrate(base_measure, roof)
};

// theta^t(p), exact through roof crossings; `steps` variant reports the net
// shift count.
FlowPoint flow_evaluate(const SuspensionFlow& flow, const FlowPoint& p, double t);
std::pair<FlowPoint, long> flow_evaluate_steps(const SuspensionFlow& flow, const FlowPoint& p,
                                               double t);

// Delta f(v) = integral_0^{R(v)} f(v,s) ds, closed form.
Potential delta_potential(const SuspensionFlow& flow, const FiberPotential& f);

// Bowen root: the unique c with P_top(base, Delta f - c R) = 0.
double flow_pressure(const SuspensionFlow& flow, const FiberPotential& f);

FlowMeasure flow_equilibrium(const SuspensionFlow& flow, const FiberPotential& f);

FlowMeasure lift_measure(const SuspensionFlow& flow, const MarkovMeasure& nu);
MarkovMeasure project_measure(const SuspensionFlow& flow, const FlowMeasure& mu);

double flow_entropy(const SuspensionFlow& flow, const FlowMeasure& mu);
double flow_integral(const SuspensionFlow& flow, const FlowMeasure& mu, const FiberPotential& f);

// (h_top(Theta), unique measure of maximal entropy).
std::pair<double, FlowMeasure> flow_mme(const SuspensionFlow& flow);

// Recode the flow to the n-block presentation (roof becomes window-1).
std::pair<SuspensionFlow, HigherBlock> recode_flow(const SuspensionFlow& flow, int n);

}  // namespace tmf
