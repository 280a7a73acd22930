#pragma once

#include <utility>
#include <vector>

#include "thermoflow/potential.hpp"
#include "thermoflow/sft.hpp"

namespace tmf {

// Ruelle transfer matrix of a window<=2 potential on an irreducible graph:
// entry (u,v) = e^{f(u)} resp. e^{f(u,v)} on edges, with Perron data.
struct TransferData {
  std::vector<int> states;  // ambient state indices, ascending
  // Sparse rows in local indexing: rows[i] = list of (local col, weight).
  std::vector<std::vector<std::pair<int, double>>> rows;
  double spectral_radius = 0.0;
  std::vector<double> right_eigvec;  // positive, max-normalized
  std::vector<double> left_eigvec;   // positive, scaled so <l,h> = 1
};

TransferData transfer_data(const Sft& g, const Potential& f);

// Shift-invariant Markov measure: sparse row-stochastic transitions plus a
// stationary vector. Supports reducible ambient graphs (stationary mass on a
// single component; off-support rows are uniform over out-edges).
struct MarkovMeasure {
  std::vector<std::vector<std::pair<int, double>>> transition;  // ascending cols
  std::vector<double> stationary;

  int state_count() const { return static_cast<int>(stationary.size()); }
  double prob(int u, int v) const;
  double cylinder(const Word& w) const;  // measure of [w] at coordinates 0..|w|-1
};

void validate_measure(const Sft& g, const MarkovMeasure& m);

// P_top(sigma, f) = log Perron root; reducible graphs take the max over
// strongly connected components with at least one edge.
double pressure(const Sft& g, const Potential& f);

// The unique Gibbs/equilibrium Markov measure of a window<=2 potential.
// Reducible input is accepted only when one component strictly maximizes
// pressure (NonUniqueEquilibrium otherwise).
MarkovMeasure equilibrium_measure(const Sft& g, const Potential& f);

double entropy(const MarkovMeasure& m);
double integrate(const MarkovMeasure& m, const Potential& f);

std::vector<std::pair<double, double>> pressure_curve(const Sft& g, const Potential& f,
                                                      const std::vector<double>& q_grid);

// Strongly connected components (Tarjan), each as an ascending state list.
std::vector<std::vector<int>> strongly_connected_components(const Sft& g);

// Stationary row vector of a row-stochastic sparse matrix (power iteration on
// the transpose, normalized).
std::vector<double> stationary_vector(
    const std::vector<std::vector<std::pair<int, double>>>& transition);

// Markov measure transported to the n-block presentation (stationary =
// cylinder masses, transitions driven by the last coordinate).
MarkovMeasure measure_to_blocks(const MarkovMeasure& m, const HigherBlock& hb);

}  // namespace tmf
