#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "thermoflow/errors.hpp"

namespace tmf {

// A finite path segment, as state indices. Admissibility is relative to an Sft.
using Word = std::vector<int>;

// Two-sided subshift of finite type given by a finite directed graph.
struct Sft {
  std::vector<std::string> states;
  std::set<std::pair<int, int>> edges;
  std::vector<std::vector<int>> out;  // ascending successor lists
  std::vector<std::vector<int>> in;   // ascending predecessor lists

  static Sft make(std::vector<std::string> names,
                  const std::vector<std::pair<int, int>>& edge_list);
  int state_count() const { return static_cast<int>(states.size()); }
  bool has_edge(int u, int v) const { return edges.count({u, v}) > 0; }
  int index_of(const std::string& name) const;
  bool admissible(const Word& w) const;
};

void validate_sft(const Sft& g);
bool is_irreducible(const Sft& g);
bool is_aperiodic(const Sft& g);  // requires irreducibility

// n-block presentation: states are admissible n-words, edges given by overlap.
struct HigherBlock {
  Sft base;
  Sft block_sft;
  int n = 1;
  std::vector<Word> block_words;    // block state index -> n-word over base states
  std::map<Word, int> block_index;  // inverse of block_words

  // A base word of length L >= n becomes L-n+1 block states.
  Word encode_word(const Word& w) const;
  // Block word back to the base word it spells (length |bw| + n - 1).
  Word decode_word(const Word& bw) const;
};

HigherBlock higher_block(const Sft& g, int n);

// All simple cycles of length <= max_len, each rotated so its smallest state
// comes first, in shortlex order.
std::vector<Word> enumerate_cycles(const Sft& g, int max_len);

// All admissible words of a given length, lexicographic.
std::vector<Word> enumerate_words(const Sft& g, int len);

// Bi-infinite eventually-periodic point:
//   ... past_cycle past_cycle | core | future_cycle future_cycle ...
// Coordinate 0 sits at position origin_index inside core (core may be empty,
// in which case origin_index locates coordinate 0 at the junction).
struct SymbolicPoint {
  Word past_cycle;
  Word core;
  Word future_cycle;
  long origin_index = 0;

  int coord(long i) const;
  // Coordinate range outside of which the point is purely periodic.
  long explicit_lo() const { return -origin_index; }
  long explicit_hi() const { return static_cast<long>(core.size()) - origin_index; }
};

SymbolicPoint periodic_point(const Word& cycle);
SymbolicPoint shift_point(const SymbolicPoint& x, long n);
void validate_point(const Sft& g, const SymbolicPoint& x);

// Smallest |n| with x_n != y_n, or -1 if the points are equal.
long first_disagreement(const SymbolicPoint& x, const SymbolicPoint& y);
// d(x,y) = exp(-min{|n| : x_n != y_n}), 0 for equal points.
double shift_distance(const SymbolicPoint& x, const SymbolicPoint& y);
bool points_equal(const SymbolicPoint& x, const SymbolicPoint& y);

// Point-level relabeling onto the n-block presentation (topological conjugacy).
SymbolicPoint point_to_blocks(const HigherBlock& hb, const SymbolicPoint& x);

std::string word_to_string(const Sft& g, const Word& w);  // space-joined
std::string word_to_name(const Sft& g, const Word& w);    // dot-joined block-state name

}  // namespace tmf
