#pragma once

#include <map>
#include <optional>

#include "thermoflow/sft.hpp"

namespace tmf {

// Locally constant function on a shift: a window length k and a value table
// over the admissible k-words.
struct Potential {
  int window = 1;
  std::map<Word, double> table;

  double value(const Word& w) const;
  // Value of f at sigma^i(x): looks up the word x_i ... x_{i+window-1}.
  double value_at(const SymbolicPoint& x, long i) const;
  double min_value() const;
  double max_value() const;

  static Potential constant(const Sft& g, double c, int window = 1);
};

void validate_potential(const Sft& g, const Potential& f);

Potential scale(const Potential& f, double a);
Potential add(const Potential& f, double c);
// f + a*g on a common window (tables merged over admissible words).
Potential combine(const Sft& g, const Potential& f, const Potential& h, double a);

double birkhoff_sum(const Potential& f, const SymbolicPoint& x, long n);

// Transport to the n-block presentation as a window-1 potential.
Potential recode_window(const Potential& f, const HigherBlock& hb);

struct CycleOpt {
  double value = 0.0;
  Word cycle;  // witness, smallest state first
};

// max over cycles of (sum of f along cycle)/length, window-1 potential,
// irreducible graph. Howard policy iteration; the returned value is the
// witness cycle's own mean.
CycleOpt max_mean_cycle(const Sft& g, const Potential& f);

// max over cycles of (num-sum)/(den-sum), den > 0, via bisection on
// num - lambda*den with a final witness-ratio polish.
CycleOpt max_ratio_cycle(const Sft& g, const Potential& num, const Potential& den);

// max over admissible length-T paths of the average of f (window 1).
double max_birkhoff_average(const Sft& g, const Potential& f, long T);

// The constant c with all cycle averages equal to c (within tolerance), if
// one exists; certified through a spanning-tree transfer function.
std::optional<double> cohomologous_to_constant(const Sft& g, const Potential& f);

}  // namespace tmf
