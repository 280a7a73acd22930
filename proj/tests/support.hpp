#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "thermoflow/potential.hpp"
#include "thermoflow/sft.hpp"
#include "thermoflow/thermo.hpp"

namespace tmf::testing {

// Platform-independent uniforms: mt19937_64 output mapped by hand.
inline double uniform(std::mt19937_64& rng, double a, double b) {
  double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return a + (b - a) * u;
}

inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {  // inclusive
  return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

inline std::vector<std::string> default_names(int n) {
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back(std::string(1, static_cast<char>('a' + i)));
  return names;
}

// Random strongly connected graph: a random ring plus extra edges.
inline Sft random_strongly_connected(std::mt19937_64& rng, int n, double extra_edge_prob) {
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  std::set<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) edges.insert({perm[i], perm[(i + 1) % n]});
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      if (uniform(rng, 0.0, 1.0) < extra_edge_prob) edges.insert({u, v});
  return Sft::make(default_names(n),
                   std::vector<std::pair<int, int>>(edges.begin(), edges.end()));
}

inline Potential random_window1(std::mt19937_64& rng, const Sft& g, double lo, double hi) {
  Potential f;
  f.window = 1;
  for (int s = 0; s < g.state_count(); ++s) f.table[{s}] = uniform(rng, lo, hi);
  return f;
}

// Independent brute-force simple-cycle enumeration: plain path extension from
// every start with canonical-rotation dedupe (no root-pruning).
inline std::vector<Word> brute_force_cycles(const Sft& g, int max_len) {
  std::set<Word> found;
  int n = g.state_count();
  std::vector<char> onpath(n, 0);
  Word path;
  auto canon = [](Word c) {
    auto it = std::min_element(c.begin(), c.end());
    std::rotate(c.begin(), it, c.end());
    return c;
  };
  auto dfs = [&](auto&& self, int start, int u) -> void {
    for (int v : g.out[u]) {
      if (v == start) found.insert(canon(path));
      if (!onpath[v] && static_cast<int>(path.size()) < max_len) {
        onpath[v] = 1;
        path.push_back(v);
        self(self, start, v);
        path.pop_back();
        onpath[v] = 0;
      }
    }
  };
  for (int s = 0; s < n; ++s) {
    path = {s};
    onpath.assign(n, 0);
    onpath[s] = 1;
    dfs(dfs, s, s);
  }
  std::vector<Word> out(found.begin(), found.end());
  std::sort(out.begin(), out.end(), [](const Word& a, const Word& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  return out;
}

// Random shift-invariant Markov measure supported on the whole edge set.
inline MarkovMeasure random_markov(std::mt19937_64& rng, const Sft& g) {
  MarkovMeasure m;
  int n = g.state_count();
  m.transition.assign(n, {});
  for (int u = 0; u < n; ++u) {
    std::vector<double> w;
    double tot = 0.0;
    for (size_t i = 0; i < g.out[u].size(); ++i) {
      w.push_back(uniform(rng, 0.1, 1.0));
      tot += w.back();
    }
    for (size_t i = 0; i < w.size(); ++i) m.transition[u].push_back({g.out[u][i], w[i] / tot});
  }
  m.stationary = stationary_vector(m.transition);
  return m;
}

// Eventually-periodic point agreeing with x on [-K, K], with periodic tails
// cut from x's own coordinates by pigeonhole. The result differs from x only
// beyond the window (or not at all), so d(x, result) <= exp(-K).
inline SymbolicPoint truncate_to_window(const Sft& g, const SymbolicPoint& x, long K) {
  long V = g.state_count();
  long fut_i1 = K, fut_i2 = -1;
  for (long i1 = K; i1 <= K + V && fut_i2 < 0; ++i1)
    for (long i2 = i1 + 1; i2 <= K + V + 1; ++i2)
      if (x.coord(i1) == x.coord(i2)) {
        fut_i1 = i1;
        fut_i2 = i2;
        break;
      }
  long past_i1 = -K, past_i2 = 1;
  for (long i1 = -K; i1 >= -K - V && past_i2 > 0; --i1)
    for (long i2 = i1 - 1; i2 >= -K - V - 1; --i2)
      if (x.coord(i1) == x.coord(i2)) {
        past_i1 = i1;
        past_i2 = i2;
        break;
      }
  SymbolicPoint y;
  for (long i = past_i2; i < past_i1; ++i) y.past_cycle.push_back(x.coord(i));
  for (long i = past_i1; i < fut_i1; ++i) y.core.push_back(x.coord(i));
  for (long i = fut_i1; i < fut_i2; ++i) y.future_cycle.push_back(x.coord(i));
  y.origin_index = -past_i1;
  return y;
}

// Common fixtures.
inline Sft golden_mean() { return Sft::make({"0", "1"}, {{0, 0}, {0, 1}, {1, 0}}); }
inline Sft full_shift(int n) {
  std::vector<std::pair<int, int>> e;
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) e.push_back({u, v});
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back(std::to_string(i));
  return Sft::make(names, e);
}

inline Potential table1(const Sft& g, std::vector<double> vals) {
  Potential f;
  f.window = 1;
  for (int s = 0; s < g.state_count(); ++s) f.table[{s}] = vals.at(s);
  return f;
}

}  // namespace tmf::testing
