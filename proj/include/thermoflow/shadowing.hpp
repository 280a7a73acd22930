#pragma once

#include <utility>
#include <vector>

#include "thermoflow/suspension.hpp"

namespace tmf {

// Flow metric on canonical representatives: shift distance plus fiber gap.
// (Equivalent to the Bowen-Walters metric for the purposes of the tracing
// and closing certificates; reports say so explicitly.)
double flow_distance(const SuspensionFlow& flow, const FlowPoint& p, const FlowPoint& q);

// min over small aligning time shifts h of |h| + d(theta^h p, q); the
// orbit-segment comparison used where canonical representatives jump at roof
// crossings.
double orbit_distance(const SuspensionFlow& flow, const FlowPoint& p, const FlowPoint& q,
                      double h_max);

struct PseudoOrbitEntry {
  FlowPoint point;
  double duration = 0.0;
};

// (delta, T)-pseudo orbit; `periodic` stores one period of entries and closes
// the last jump back to the first point.
struct PseudoOrbit {
  std::vector<PseudoOrbitEntry> entries;
  double delta = 0.0;
  double t_min = 0.0;
  bool periodic = false;
};

void validate_pseudo_orbit(const SuspensionFlow& flow, const PseudoOrbit& po);

struct TraceCertificate {
  FlowPoint traced_point;
  std::vector<std::pair<double, double>> reparam_breakpoints;  // (s, rho(s))
  double epsilon = 0.0;
  double max_distance = 0.0;
  std::vector<double> slopes;  // piecewise-linear rho slopes per block
};

// Splices base words at agreement windows into a true orbit, assembles the
// piecewise-linear reparametrization from the accumulated roof discrepancies,
// and certifies the tracing bound by exact segment comparison.
TraceCertificate shadow(const SuspensionFlow& flow, const PseudoOrbit& po, double epsilon);

struct CloseResult {
  FlowPoint periodic_point;
  double period = 0.0;
  double max_distance = 0.0;
};

// Closes the base word over [0, t] into a cycle at the agreement window; the
// returned point is exactly periodic with |period - t| <= epsilon.
CloseResult close_periodic(const SuspensionFlow& flow, const FlowPoint& p, double t,
                           double epsilon);

struct BracketResult {
  FlowPoint point;  // future of x, past of y
  double tau = 0.0;
};

// Local product bracket [x, y].
BracketResult bracket(const SuspensionFlow& flow, const FlowPoint& x, const FlowPoint& y,
                      double epsilon);

struct DichotomyResult {
  bool constant_suspension = false;
  double c = 0.0;  // set when constant_suspension
};

// Mixing versus constant-suspension alternative via the roof cycle-sum test.
DichotomyResult suspension_dichotomy(const SuspensionFlow& flow);

// Certified sufficient delta(epsilon) for shadow/close/bracket: symbolic
// agreement depth N(eps) = ceil(-log eps) + window(R).
double expansivity_certificate(const SuspensionFlow& flow, double epsilon);
int agreement_depth(const SuspensionFlow& flow, double epsilon);  // N(eps)

}  // namespace tmf
