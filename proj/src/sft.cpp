#include "thermoflow/sft.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace tmf {

Sft Sft::make(std::vector<std::string> names,
              const std::vector<std::pair<int, int>>& edge_list) {
  Sft g;
  g.states = std::move(names);
  int n = g.state_count();
  g.out.assign(n, {});
  g.in.assign(n, {});
  for (auto [u, v] : edge_list) {
    if (u < 0 || u >= n || v < 0 || v >= n)
      fail(Err::ValidationError, "edge endpoint out of range");
    if (g.edges.insert({u, v}).second) {
      g.out[u].push_back(v);
      g.in[v].push_back(u);
    }
  }
  for (auto& a : g.out) std::sort(a.begin(), a.end());
  for (auto& a : g.in) std::sort(a.begin(), a.end());
  return g;
}

int Sft::index_of(const std::string& name) const {
  for (int i = 0; i < state_count(); ++i)
    if (states[i] == name) return i;
  return -1;
}

bool Sft::admissible(const Word& w) const {
  for (int s : w)
    if (s < 0 || s >= state_count()) return false;
  for (size_t i = 0; i + 1 < w.size(); ++i)
    if (!has_edge(w[i], w[i + 1])) return false;
  return true;
}

void validate_sft(const Sft& g) {
  std::set<std::string> seen;
  for (const auto& name : g.states)
    if (!seen.insert(name).second) fail(Err::DuplicateState, "state '" + name + "'");
  for (int s = 0; s < g.state_count(); ++s) {
    if (g.out[s].empty())
      fail(Err::StrandedState, "state '" + g.states[s] + "' has no outgoing edge");
    if (g.in[s].empty())
      fail(Err::StrandedState, "state '" + g.states[s] + "' has no incoming edge");
  }
  if (g.state_count() == 0) fail(Err::EmptyShift, "no states");
}

namespace {

// Forward/backward reachability from state 0.
bool strongly_connected(const Sft& g) {
  int n = g.state_count();
  if (n == 0) return false;
  for (const auto& adj : {g.out, g.in}) {
    std::vector<char> vis(n, 0);
    std::vector<int> stack{0};
    vis[0] = 1;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int v : adj[u])
        if (!vis[v]) {
          vis[v] = 1;
          stack.push_back(v);
        }
    }
    if (std::count(vis.begin(), vis.end(), 1) != n) return false;
  }
  return true;
}

}  // namespace

bool is_irreducible(const Sft& g) {
  validate_sft(g);
  return strongly_connected(g);
}

bool is_aperiodic(const Sft& g) {
  if (!is_irreducible(g)) fail(Err::NotIrreducible, "aperiodicity needs an irreducible graph");
  // gcd of cycle lengths via BFS levels: gcd over edges of depth(u)+1-depth(v).
  int n = g.state_count();
  std::vector<long> depth(n, -1);
  std::vector<int> queue{0};
  depth[0] = 0;
  for (size_t h = 0; h < queue.size(); ++h) {
    int u = queue[h];
    for (int v : g.out[u])
      if (depth[v] < 0) {
        depth[v] = depth[u] + 1;
        queue.push_back(v);
      }
  }
  long period = 0;
  for (auto [u, v] : g.edges) period = std::gcd(period, depth[u] + 1 - depth[v]);
  return std::abs(period) == 1;
}

HigherBlock higher_block(const Sft& g, int n) {
  validate_sft(g);
  if (n < 1) fail(Err::ValidationError, "block length must be >= 1");
  HigherBlock hb;
  hb.base = g;
  hb.n = n;
  hb.block_words = enumerate_words(g, n);
  for (size_t i = 0; i < hb.block_words.size(); ++i)
    hb.block_index[hb.block_words[i]] = static_cast<int>(i);
  std::vector<std::string> names;
  names.reserve(hb.block_words.size());
  for (const auto& w : hb.block_words) names.push_back(word_to_name(g, w));
  std::vector<std::pair<int, int>> edges;
  for (size_t i = 0; i < hb.block_words.size(); ++i) {
    const Word& w = hb.block_words[i];
    for (int s : g.out[w.back()]) {
      Word next(w.begin() + 1, w.end());
      next.push_back(s);
      auto it = hb.block_index.find(next);
      if (it != hb.block_index.end()) edges.push_back({static_cast<int>(i), it->second});
    }
  }
  hb.block_sft = Sft::make(std::move(names), edges);
  return hb;
}

Word HigherBlock::encode_word(const Word& w) const {
  if (static_cast<int>(w.size()) < n)
    fail(Err::IncompatibleRecoding, "word shorter than block length");
  Word out;
  for (size_t i = 0; i + n <= w.size(); ++i) {
    Word b(w.begin() + i, w.begin() + i + n);
    auto it = block_index.find(b);
    if (it == block_index.end())
      fail(Err::IncompatibleRecoding, "word not admissible in base shift");
    out.push_back(it->second);
  }
  return out;
}

Word HigherBlock::decode_word(const Word& bw) const {
  if (bw.empty()) return {};
  Word out = block_words.at(bw[0]);
  for (size_t i = 1; i < bw.size(); ++i) out.push_back(block_words.at(bw[i]).back());
  return out;
}

std::vector<Word> enumerate_words(const Sft& g, int len) {
  std::vector<Word> result;
  if (len <= 0) return result;
  Word w;
  auto dfs = [&](auto&& self, int u) -> void {
    w.push_back(u);
    if (static_cast<int>(w.size()) == len) {
      result.push_back(w);
    } else {
      for (int v : g.out[u]) self(self, v);
    }
    w.pop_back();
  };
  for (int s = 0; s < g.state_count(); ++s) dfs(dfs, s);
  return result;
}

std::vector<Word> enumerate_cycles(const Sft& g, int max_len) {
  validate_sft(g);
  std::vector<Word> cycles;
  int n = g.state_count();
  std::vector<char> onpath(n, 0);
  Word path;
  // Roots ascending; only states > root may appear inside, so every simple
  // cycle is produced exactly once with its smallest state first.
  auto dfs = [&](auto&& self, int root, int u) -> void {
    for (int v : g.out[u]) {
      if (v == root) {
        cycles.push_back(path);
      } else if (v > root && !onpath[v] && static_cast<int>(path.size()) < max_len) {
        onpath[v] = 1;
        path.push_back(v);
        self(self, root, v);
        path.pop_back();
        onpath[v] = 0;
      }
    }
  };
  for (int root = 0; root < n; ++root) {
    onpath.assign(n, 0);
    onpath[root] = 1;
    path = {root};
    dfs(dfs, root, root);
  }
  std::sort(cycles.begin(), cycles.end(), [](const Word& a, const Word& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  return cycles;
}

int SymbolicPoint::coord(long i) const {
  long p = origin_index + i;
  long csz = static_cast<long>(core.size());
  if (p >= 0 && p < csz) return core[p];
  if (p >= csz) {
    long q = (p - csz) % static_cast<long>(future_cycle.size());
    return future_cycle[q];
  }
  long m = static_cast<long>(past_cycle.size());
  long q = ((p % m) + m) % m;
  return past_cycle[q];
}

SymbolicPoint periodic_point(const Word& cycle) {
  SymbolicPoint x;
  x.past_cycle = cycle;
  x.future_cycle = cycle;
  x.core = {};
  x.origin_index = 0;
  return x;
}

SymbolicPoint shift_point(const SymbolicPoint& x, long n) {
  SymbolicPoint y = x;
  y.origin_index += n;
  return y;
}

void validate_point(const Sft& g, const SymbolicPoint& x) {
  if (x.past_cycle.empty() || x.future_cycle.empty())
    fail(Err::ValidationError, "periodic tails must be nonempty");
  long lo = x.explicit_lo() - static_cast<long>(x.past_cycle.size()) - 1;
  long hi = x.explicit_hi() + static_cast<long>(x.future_cycle.size()) + 1;
  for (long i = lo; i < hi; ++i) {
    int u = x.coord(i), v = x.coord(i + 1);
    if (u < 0 || u >= g.state_count() || v < 0 || v >= g.state_count() || !g.has_edge(u, v))
      fail(Err::ValidationError, "inadmissible transition at coordinate " + std::to_string(i));
  }
}

namespace {

long lcm_capped(long a, long b, long cap) {
  long g = std::gcd(a, b);
  long l = a / g * b;
  return std::min(l, cap);
}

}  // namespace

long first_disagreement(const SymbolicPoint& x, const SymbolicPoint& y) {
  const long cap = 1 << 20;
  long fwd = std::max(x.explicit_hi(), y.explicit_hi()) +
             lcm_capped(static_cast<long>(x.future_cycle.size()),
                        static_cast<long>(y.future_cycle.size()), cap);
  long bwd = std::min(x.explicit_lo(), y.explicit_lo()) -
             lcm_capped(static_cast<long>(x.past_cycle.size()),
                        static_cast<long>(y.past_cycle.size()), cap);
  long horizon = std::max(fwd, -bwd) + 1;
  for (long n = 0; n <= horizon; ++n) {
    if (x.coord(n) != y.coord(n)) return n;
    if (n > 0 && x.coord(-n) != y.coord(-n)) return n;
  }
  return -1;
}

double shift_distance(const SymbolicPoint& x, const SymbolicPoint& y) {
  long n = first_disagreement(x, y);
  if (n < 0) return 0.0;
  return std::exp(-static_cast<double>(n));
}

bool points_equal(const SymbolicPoint& x, const SymbolicPoint& y) {
  return first_disagreement(x, y) < 0;
}

SymbolicPoint point_to_blocks(const HigherBlock& hb, const SymbolicPoint& x) {
  int n = hb.n;
  auto block_at = [&](long i) -> int {
    Word w;
    w.reserve(n);
    for (int j = 0; j < n; ++j) w.push_back(x.coord(i + j));
    auto it = hb.block_index.find(w);
    if (it == hb.block_index.end())
      fail(Err::IncompatibleRecoding, "point not admissible in base shift");
    return it->second;
  };
  long c0 = x.explicit_lo();
  long c1 = x.explicit_hi();
  long p = static_cast<long>(x.past_cycle.size());
  long q = static_cast<long>(x.future_cycle.size());
  long new_c0 = c0 - (n - 1);  // blocks at i < new_c0 are p-periodic
  SymbolicPoint y;
  for (long i = new_c0 - p; i < new_c0; ++i) y.past_cycle.push_back(block_at(i));
  for (long i = new_c0; i < c1; ++i) y.core.push_back(block_at(i));
  for (long i = c1; i < c1 + q; ++i) y.future_cycle.push_back(block_at(i));
  y.origin_index = -new_c0;
  return y;
}

std::string word_to_string(const Sft& g, const Word& w) {
  std::string s;
  for (size_t i = 0; i < w.size(); ++i) {
    if (i) s += ' ';
    s += g.states[w[i]];
  }
  return s;
}

std::string word_to_name(const Sft& g, const Word& w) {
  // Dot-joined so block-state names stay single tokens in potential tables.
  std::string s;
  for (size_t i = 0; i < w.size(); ++i) {
    if (i) s += '.';
    s += g.states[w[i]];
  }
  return s;
}

}  // namespace tmf
