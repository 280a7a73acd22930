#pragma once

#include <string>

namespace tmf {

// Every numeric threshold used by the library lives here so tests and the CLI
// reference a single source of truth. Defaults are the contract values.
struct Tolerances {
  double eig_iter_diff = 1e-14;   // power iteration: max-norm diff between iterates
  long eig_iter_cap = 1000000;    // power iteration: iteration cap
  double eig_residual = 1e-12;    // eigenvector residual bound after normalization
  double pressure_abs = 1e-10;    // absolute tolerance on P_top(sigma, f)
  double bowen_root = 1e-11;      // bisection width on the Bowen root c
  double bowen_residual = 1e-9;   // |P(delta f - c*R)| internal-check bound (exit 2 gate)
  double ratio_cycle = 1e-10;     // parametric cycle-ratio bisection width
  double mean_cycle_witness = 1e-12;  // witness cycle must attain the value this tightly
  double policy_improve = 1e-13;  // Howard policy iteration strict-improvement margin
  double cohomology = 1e-10;      // cycle-sum test for cohomology to a constant
  double segment_abs = 1e-13;     // fiber segment/breakpoint comparisons
  double fiber_invert = 1e-12;    // root finding when inverting fiber integrals (ell)
  double measure_residual = 1e-12;  // row sums / stationarity residuals
  double component_tie = 1e-9;    // reducible pressure tie -> NonUniqueEquilibrium
  double sync_entropy = 1e-8;     // |h_top(synchronized) - 1| bound
  double cylinder_match = 1e-6;   // base-measure agreement on cylinders <= 6
  double density_check = 1e-8;    // synchronization density identity bound
  double factor_pressure = 1e-9;  // factor pressure preservation bound
  int window_explosion = 12;      // recoding beyond this block size aborts
};

// Process-wide mutable record. Initialized from defaults, then from the
// THERMOFLOW_TOL environment variable (a bare double sets bowen_residual;
// "key=value,key=value" sets named fields).
Tolerances& tol();

// Set a named field; unknown keys raise ValidationError.
void tol_set(const std::string& key, double value);
void tol_reset();

// Apply a THERMOFLOW_TOL-style spec string.
void tol_apply_spec(const std::string& spec);

}  // namespace tmf
