#include "thermoflow/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "thermoflow/tolerances.hpp"

namespace tmf {

double Potential::value(const Word& w) const {
  auto it = table.find(w);
  if (it == table.end())
    fail(Err::WindowMismatch, "no table entry for a length-" + std::to_string(w.size()) + " word");
  return it->second;
}

double Potential::value_at(const SymbolicPoint& x, long i) const {
  Word w;
  w.reserve(window);
  for (int j = 0; j < window; ++j) w.push_back(x.coord(i + j));
  return value(w);
}

double Potential::min_value() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& [w, v] : table) m = std::min(m, v);
  return m;
}

double Potential::max_value() const {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& [w, v] : table) m = std::max(m, v);
  return m;
}

Potential Potential::constant(const Sft& g, double c, int window) {
  Potential f;
  f.window = window;
  for (const auto& w : enumerate_words(g, window)) f.table[w] = c;
  return f;
}

void validate_potential(const Sft& g, const Potential& f) {
  if (f.window < 1) fail(Err::ValidationError, "window must be >= 1");
  auto words = enumerate_words(g, f.window);
  if (words.size() != f.table.size())
    fail(Err::ValidationError, "table must cover exactly the admissible words (" +
                                   std::to_string(words.size()) + " expected, " +
                                   std::to_string(f.table.size()) + " given)");
  for (const auto& w : words) {
    auto it = f.table.find(w);
    if (it == f.table.end())
      fail(Err::ValidationError, "missing table entry for word '" + word_to_string(g, w) + "'");
    if (!std::isfinite(it->second))
      fail(Err::ValidationError, "non-finite value at word '" + word_to_string(g, w) + "'");
  }
}

Potential scale(const Potential& f, double a) {
  Potential out = f;
  for (auto& [w, v] : out.table) v *= a;
  return out;
}

Potential add(const Potential& f, double c) {
  Potential out = f;
  for (auto& [w, v] : out.table) v += c;
  return out;
}

Potential combine(const Sft& g, const Potential& f, const Potential& h, double a) {
  int window = std::max(f.window, h.window);
  Potential out;
  out.window = window;
  for (const auto& w : enumerate_words(g, window)) {
    Word wf(w.begin(), w.begin() + f.window);
    Word wh(w.begin(), w.begin() + h.window);
    out.table[w] = f.value(wf) + a * h.value(wh);
  }
  return out;
}

double birkhoff_sum(const Potential& f, const SymbolicPoint& x, long n) {
  double s = 0.0;
  for (long i = 0; i < n; ++i) s += f.value_at(x, i);
  return s;
}

Potential recode_window(const Potential& f, const HigherBlock& hb) {
  if (hb.n < f.window)
    fail(Err::IncompatibleRecoding, "block length " + std::to_string(hb.n) +
                                        " below potential window " + std::to_string(f.window));
  Potential out;
  out.window = 1;
  for (size_t i = 0; i < hb.block_words.size(); ++i) {
    const Word& w = hb.block_words[i];
    Word prefix(w.begin(), w.begin() + f.window);
    out.table[{static_cast<int>(i)}] = f.value(prefix);
  }
  return out;
}

namespace {

// State weights of a window-1 potential: a cycle's weight sum over source
// states equals its Birkhoff sum.
std::vector<double> make_weights(const Sft& g, const Potential& f) {
  if (f.window != 1) fail(Err::WindowMismatch, "cycle optimization needs a window-1 potential");
  std::vector<double> vals(g.state_count());
  for (int s = 0; s < g.state_count(); ++s) vals[s] = f.value({s});
  return vals;
}

struct PolicyResult {
  Word best_cycle;  // cycle with maximal gain, smallest state first
  double best_gain = 0.0;
};

Word canonical_rotation(Word c) {
  auto it = std::min_element(c.begin(), c.end());
  std::rotate(c.begin(), it, c.end());
  return c;
}

// Howard policy iteration for the maximum mean cycle of state weights w.
PolicyResult howard_max_mean(const Sft& g, const std::vector<double>& w) {
  int n = g.state_count();
  const double eps = tol().policy_improve;
  std::vector<int> policy(n);
  for (int u = 0; u < n; ++u) policy[u] = g.out[u].front();

  std::vector<double> gain(n, 0.0), bias(n, 0.0);
  Word best_cycle;
  double best_gain = 0.0;

  long max_rounds = 64L * n + 64;
  for (long round = 0; round < max_rounds; ++round) {
    // Evaluate the functional graph u -> policy[u]: each component has one
    // cycle; gain = cycle mean, bias rooted at the cycle entry point.
    std::vector<int> color(n, 0);  // 0 unvisited, 1 walking, 2 evaluated
    best_gain = -std::numeric_limits<double>::infinity();
    best_cycle.clear();
    for (int s = 0; s < n; ++s) {
      if (color[s]) continue;
      std::vector<int> stack;
      int u = s;
      while (color[u] == 0) {
        color[u] = 1;
        stack.push_back(u);
        u = policy[u];
      }
      if (color[u] == 1) {
        auto it = std::find(stack.begin(), stack.end(), u);
        std::vector<int> cyc(it, stack.end());
        double sum = 0.0;
        for (int c : cyc) sum += w[c];
        double mean = sum / static_cast<double>(cyc.size());
        gain[cyc[0]] = mean;
        bias[cyc[0]] = 0.0;
        for (size_t i = cyc.size(); i-- > 1;) {
          int a = cyc[i];
          int b = (i + 1 < cyc.size()) ? cyc[i + 1] : cyc[0];
          gain[a] = mean;
          bias[a] = w[a] - mean + bias[b];
        }
        for (int c : cyc) color[c] = 2;
        stack.erase(it, stack.end());
        if (mean > best_gain) {
          best_gain = mean;
          best_cycle = canonical_rotation(Word(cyc.begin(), cyc.end()));
        }
      }
      // Remaining stack entries are tree nodes whose chain now ends in an
      // evaluated node; fill from the chain end backwards.
      for (auto rit = stack.rbegin(); rit != stack.rend(); ++rit) {
        int a = *rit;
        int b = policy[a];
        gain[a] = gain[b];
        bias[a] = w[a] - gain[b] + bias[b];
        color[a] = 2;
      }
    }
    // Improvement step (gain first, then bias), deterministic tie-breaks.
    bool improved = false;
    for (int u = 0; u < n; ++u) {
      int best_v = policy[u];
      double bg = gain[best_v];
      double bb = w[u] - gain[best_v] + bias[best_v];
      for (int v : g.out[u]) {
        double cg = gain[v];
        double cb = w[u] - gain[v] + bias[v];
        if (cg > bg + eps || (std::abs(cg - bg) <= eps && cb > bb + eps)) {
          best_v = v;
          bg = cg;
          bb = cb;
        }
      }
      if (best_v != policy[u]) {
        policy[u] = best_v;
        improved = true;
      }
    }
    if (!improved) return {std::move(best_cycle), best_gain};
  }
  fail(Err::ToleranceFailure, "policy iteration did not converge");
}

}  // namespace

CycleOpt max_mean_cycle(const Sft& g, const Potential& f) {
  if (!is_irreducible(g)) fail(Err::NotIrreducible, "max_mean_cycle needs an irreducible graph");
  std::vector<double> w = make_weights(g, f);
  PolicyResult pr = howard_max_mean(g, w);
  CycleOpt out;
  out.cycle = pr.best_cycle;
  double sum = 0.0;
  for (int s : out.cycle) sum += w[s];
  out.value = sum / static_cast<double>(out.cycle.size());
  return out;
}

CycleOpt max_ratio_cycle(const Sft& g, const Potential& num, const Potential& den) {
  if (!is_irreducible(g)) fail(Err::NotIrreducible, "max_ratio_cycle needs an irreducible graph");
  std::vector<double> wn = make_weights(g, num);
  std::vector<double> wd = make_weights(g, den);
  for (double d : wd)
    if (d <= 0.0) fail(Err::NonpositiveDenominator, "denominator must be strictly positive");

  auto cycle_ratio = [&](const Word& c) {
    double sn = 0.0, sd = 0.0;
    for (int s : c) {
      sn += wn[s];
      sd += wd[s];
    }
    return sn / sd;
  };
  // phi(lambda) = max cycle mean of num - lambda*den; decreasing, zero at the
  // optimal ratio.
  auto phi = [&](double lambda) {
    std::vector<double> w(g.state_count());
    for (int s = 0; s < g.state_count(); ++s) w[s] = wn[s] - lambda * wd[s];
    PolicyResult pr = howard_max_mean(g, w);
    return std::make_pair(pr.best_gain, pr.best_cycle);
  };

  double nmin = *std::min_element(wn.begin(), wn.end());
  double nmax = *std::max_element(wn.begin(), wn.end());
  double dmin = *std::min_element(wd.begin(), wd.end());
  double dmax = *std::max_element(wd.begin(), wd.end());
  double lo = std::min(nmin / dmin, nmin / dmax);
  double hi = std::max(nmax / dmin, nmax / dmax);
  double span = std::max(1.0, hi - lo);
  for (int guard = 0; phi(lo).first < 0.0 && guard < 64; ++guard) lo -= span;
  for (int guard = 0; phi(hi).first > 0.0 && guard < 64; ++guard) hi += span;

  Word witness;
  while (hi - lo > tol().ratio_cycle) {
    double mid = 0.5 * (lo + hi);
    auto [val, cyc] = phi(mid);
    if (val > 0.0) {
      lo = mid;
      witness = cyc;
    } else {
      hi = mid;
    }
  }
  if (witness.empty()) witness = phi(lo).second;
  // Dinkelbach polish: the witness's own ratio can only move lambda up.
  for (int i = 0; i < 8; ++i) {
    double lambda = cycle_ratio(witness);
    Word next = phi(lambda).second;
    if (next == witness || cycle_ratio(next) <= lambda) break;
    witness = next;
  }
  CycleOpt out;
  out.cycle = witness;
  out.value = cycle_ratio(witness);
  return out;
}

double max_birkhoff_average(const Sft& g, const Potential& f, long T) {
  std::vector<double> w = make_weights(g, f);
  if (T < 1) fail(Err::ValidationError, "horizon must be >= 1");
  int n = g.state_count();
  const double ninf = -std::numeric_limits<double>::infinity();
  std::vector<double> cur(n), nxt(n, ninf);
  for (int s = 0; s < n; ++s) cur[s] = w[s];
  for (long k = 1; k < T; ++k) {
    std::fill(nxt.begin(), nxt.end(), ninf);
    for (int u = 0; u < n; ++u) {
      if (cur[u] == ninf) continue;
      for (int v : g.out[u]) nxt[v] = std::max(nxt[v], cur[u] + w[v]);
    }
    std::swap(cur, nxt);
  }
  return *std::max_element(cur.begin(), cur.end()) / static_cast<double>(T);
}

std::optional<double> cohomologous_to_constant(const Sft& g, const Potential& f) {
  if (!is_irreducible(g))
    fail(Err::NotIrreducible, "cohomology test needs an irreducible graph");
  std::vector<double> w = make_weights(g, f);
  // Reference constant from any directed cycle.
  Word c = enumerate_cycles(g, g.state_count()).front();
  double cs = 0.0;
  for (int s : c) cs += w[s];
  double cmean = cs / static_cast<double>(c.size());

  // Transfer function along an undirected spanning tree; every remaining edge
  // must be a tension of eta, i.e. f(u) - cmean = eta(v) - eta(u).
  int n = g.state_count();
  std::vector<double> eta(n, 0.0);
  std::vector<char> vis(n, 0);
  std::vector<int> queue{0};
  vis[0] = 1;
  for (size_t h = 0; h < queue.size(); ++h) {
    int u = queue[h];
    for (int v : g.out[u])
      if (!vis[v]) {
        vis[v] = 1;
        eta[v] = eta[u] + (w[u] - cmean);
        queue.push_back(v);
      }
    for (int v : g.in[u])
      if (!vis[v]) {
        vis[v] = 1;
        eta[v] = eta[u] - (w[v] - cmean);
        queue.push_back(v);
      }
  }
  for (auto [u, v] : g.edges)
    if (std::abs((w[u] - cmean) - (eta[v] - eta[u])) > tol().cohomology) return std::nullopt;
  return cmean;
}

}  // namespace tmf
