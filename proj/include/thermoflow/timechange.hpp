#pragma once

#include <functional>
#include <optional>

#include "thermoflow/suspension.hpp"

namespace tmf {

// Piecewise polynomial on one fiber [0, R): ascending breakpoints bracketing
// the polynomial pieces.
struct FiberSegments {
  std::vector<double> breaks;      // breaks.front() = 0, breaks.back() = R
  std::vector<Polynomial> pieces;  // pieces[i] on [breaks[i], breaks[i+1]]

  double eval(double s) const;
  double integral() const;
  double integral_to(double s) const;  // from 0 to s
  double min() const;
  double max() const;
};

// Rate functions are consumed as fiber slices along an orbit: the segments of
// r( sigma^i(x), . ) on [0, R(sigma^i x)).
using RateSlices = std::function<FiberSegments(const SymbolicPoint& x, long i)>;

RateSlices rate_from_fiber_potential(const SuspensionFlow& flow, const FiberPotential& rate);

// Synchronization data: the rate r of the synchronizing time-change together with
// the recoding that makes its base dependence window-1.
struct TimeChangeSpec {
  SuspensionFlow source;
  double t_horizon = 1.0;
  double pressure_const = 0.0;  // P_top(Theta, f)
  int window = 1;               // m: block length of the rate's base dependence
  HigherBlock blocks;           // m-block presentation of the source base
  std::vector<FiberSegments> rate;  // per block state, on [0, R(first coord))

  RateSlices slices() const;
};

// ell(y, t): the unique l with integral_0^l r(phi^s y) ds = t.
double ell(const SuspensionFlow& flow, const FiberPotential& rate, const FlowPoint& p, double t);
double ell(const SuspensionFlow& flow, const RateSlices& rate, const FlowPoint& p, double t);

// phi_r^tau(y) = phi^{ell(y, tau)}(y).
FlowPoint time_changed_evaluate(const SuspensionFlow& flow, const FiberPotential& rate,
                                const FlowPoint& p, double tau);

// k(y, t): inverse reparametrization, integral_0^{k} (1/r)(phi_r^s y) ds = t,
// i.e. the amount of new time accumulated along old time t.
double time_change_inverse(const SuspensionFlow& flow, const FiberPotential& rate,
                           const FlowPoint& p, double t);

// The time-changed TMF: same base, roof R' = delta r.
SuspensionFlow time_changed_roof(const SuspensionFlow& flow, const FiberPotential& rate);

// Measure transport: same cross-section base measure, roof integral against R'.
FlowMeasure transform_measure(const SuspensionFlow& flow, const FiberPotential& rate,
                              const FlowMeasure& mu);

// Time-change of flow' (= time_changed_roof(flow, rate)) by the transported
// reciprocal rate; recovers the original roof. Quadrature in the new fiber
// coordinate with exact breakpoints.
SuspensionFlow inverse_time_change(const SuspensionFlow& flow, const FiberPotential& rate);

struct HyperbolicityReport {
  bool hyperbolic = false;
  double pressure = 0.0;        // P_top(Theta, f)
  double max_flow_average = 0.0;  // max over flow-invariant measures of int f
  Word witness_cycle;
  double equilibrium_entropy = 0.0;
};

// P > M test (with diagnostics) via the Bowen root and the cycle-ratio
// maximum of (delta f)/R.
HyperbolicityReport is_hyperbolic(const SuspensionFlow& flow, const FiberPotential& f);

// Smallest t in {1, 2, 4, ..., 2^7} certifying the finite-horizon condition
// P - max_y (1/t) int_0^t f > 0, if any.
std::optional<double> hyperbolicity_horizon(const SuspensionFlow& flow, const FiberPotential& f);

struct SynchronizationResult {
  TimeChangeSpec spec;
  SuspensionFlow synchronized;  // m-block base, roof R' = delta r (window 1)
};

// synchronization rate r = P - (1/t) int_0^t f(phi^s y) ds as exact fiber segments,
// plus the synchronized TMF.
SynchronizationResult synchronize(const SuspensionFlow& flow, const FiberPotential& f,
                                  double t_horizon);

struct SynchronizationReport {
  double pressure = 0.0;
  double horizon = 0.0;
  int window = 0;
  double h_top_synchronized = 0.0;
  double max_cylinder_discrepancy = 0.0;
  double density_check_max_error = 0.0;
  bool passed = false;
};

SynchronizationReport verify_synchronization(const SuspensionFlow& flow, const FiberPotential& f,
                                double t_horizon);

}  // namespace tmf
