#pragma once

#include <optional>

#include "thermoflow/suspension.hpp"

namespace tmf {

// Sliding block code between SFTs: admissible source windows to target states.
// The target graph is the image graph (states = image values, edges = images
// of (window+1)-words).
struct BlockCode {
  int window = 1;
  std::map<Word, int> map;  // source window -> target state index
  Sft source;
  Sft target;

  int image_state(const Word& w) const;
  // pi(w) for |w| >= window: |w| - window + 1 target states.
  Word image_word(const Word& w) const;
};

// Build from a window table keyed by source words with target state names;
// infers the target graph and verifies the factor is onto it.
BlockCode make_block_code(const Sft& source, int window,
                          const std::map<Word, std::string>& table);

void validate_code(const BlockCode& code);

// Relabeled point under the code (conjugation with the shift holds by
// construction; checked on generators in tests).
SymbolicPoint apply_code_point(const BlockCode& code, const SymbolicPoint& x);

struct FactorFlow {
  SuspensionFlow flow;   // target suspension with the pushed-forward roof
  Potential target_roof; // same as flow.roof
};

// Time-preserving factor: requires the source roof constant on code fibers.
FactorFlow apply_code(const BlockCode& code, const SuspensionFlow& flow_src);

struct FiniteToOneReport {
  bool finite_to_one = false;
  std::optional<int> degree;  // set for right- or left-resolving codes
  bool right_resolving = false;
  bool left_resolving = false;
};

// Diamond test on the pair graph; degree by preimage-path counting for
// resolving codes (either orientation).
FiniteToOneReport check_finite_to_one(const BlockCode& code);

struct PressurePreservationReport {
  double pressure_source = 0.0;  // P_top of f o pi on the source flow
  double pressure_target = 0.0;  // P_top of f on the target flow
  double max_cylinder_discrepancy = 0.0;  // pushforward vs target equilibrium
  bool passed = false;
};

// Pulls a target fiber potential back through the code, compares flow
// pressures, and checks the equilibrium transport on cylinders <= 6.
PressurePreservationReport pressure_preservation(const BlockCode& code,
                                                 const SuspensionFlow& flow_src,
                                                 const FiberPotential& f_target);

// Brute-force preimage-path count of a target word (test oracle surface).
long count_preimage_paths(const BlockCode& code, const Word& target_word);

}  // namespace tmf
