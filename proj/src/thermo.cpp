#include "thermoflow/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "thermoflow/tolerances.hpp"

namespace tmf {

namespace {

using SparseRows = std::vector<std::vector<std::pair<int, double>>>;

SparseRows transpose(const SparseRows& rows) {
  SparseRows t(rows.size());
  for (size_t u = 0; u < rows.size(); ++u)
    for (auto [v, w] : rows[u]) t[v].push_back({static_cast<int>(u), w});
  for (auto& r : t) std::sort(r.begin(), r.end());
  return t;
}

double max_row_sum(const SparseRows& rows) {
  double m = 0.0;
  for (const auto& r : rows) {
    double s = 0.0;
    for (auto [v, w] : r) s += w;
    m = std::max(m, s);
  }
  return m;
}

// Power iteration on M + shift*I. The diagonal shift leaves the Perron pair
// untouched and makes the iteration converge for periodic matrices.
struct PerronPair {
  double lambda;
  std::vector<double> vec;  // max-normalized, positive
};

PerronPair perron(const SparseRows& rows) {
  int n = static_cast<int>(rows.size());
  double shift = std::max(1e-30, max_row_sum(rows));
  std::vector<double> x(n, 1.0), y(n);
  double lambda_shifted = 0.0;
  const Tolerances& t = tol();
  for (long it = 0; it < t.eig_iter_cap; ++it) {
    for (int u = 0; u < n; ++u) {
      double s = shift * x[u];
      for (auto [v, w] : rows[u]) s += w * x[v];
      y[u] = s;
    }
    double norm = *std::max_element(y.begin(), y.end());
    double diff = 0.0;
    for (int u = 0; u < n; ++u) {
      y[u] /= norm;
      diff = std::max(diff, std::abs(y[u] - x[u]));
    }
    x.swap(y);
    lambda_shifted = norm;
    if (diff <= t.eig_iter_diff) {
      // A few polish rounds tighten the residual.
      for (int extra = 0; extra < 4; ++extra) {
        for (int u = 0; u < n; ++u) {
          double s = shift * x[u];
          for (auto [v, w] : rows[u]) s += w * x[v];
          y[u] = s;
        }
        lambda_shifted = *std::max_element(y.begin(), y.end());
        for (int u = 0; u < n; ++u) y[u] /= lambda_shifted;
        x.swap(y);
      }
      return {lambda_shifted - shift, x};
    }
  }
  fail(Err::ToleranceFailure, "power iteration hit the iteration cap");
}

SparseRows build_rows(const Sft& g, const Potential& f, const std::vector<int>& states) {
  std::vector<int> local(g.state_count(), -1);
  for (size_t i = 0; i < states.size(); ++i) local[states[i]] = static_cast<int>(i);
  SparseRows rows(states.size());
  for (size_t i = 0; i < states.size(); ++i) {
    int u = states[i];
    for (int v : g.out[u]) {
      if (local[v] < 0) continue;
      double fv = f.window == 1 ? f.value({u}) : f.value({u, v});
      rows[i].push_back({local[v], std::exp(fv)});
    }
  }
  return rows;
}

}  // namespace

std::vector<std::vector<int>> strongly_connected_components(const Sft& g) {
  int n = g.state_count();
  std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
  std::vector<char> onstack(n, 0);
  std::vector<int> stack;
  int counter = 0, ncomp = 0;
  std::function<void(int)> dfs = [&](int u) {
    index[u] = low[u] = counter++;
    stack.push_back(u);
    onstack[u] = 1;
    for (int v : g.out[u]) {
      if (index[v] < 0) {
        dfs(v);
        low[u] = std::min(low[u], low[v]);
      } else if (onstack[v]) {
        low[u] = std::min(low[u], index[v]);
      }
    }
    if (low[u] == index[u]) {
      while (true) {
        int v = stack.back();
        stack.pop_back();
        onstack[v] = 0;
        comp[v] = ncomp;
        if (v == u) break;
      }
      ++ncomp;
    }
  };
  for (int u = 0; u < n; ++u)
    if (index[u] < 0) dfs(u);
  std::vector<std::vector<int>> comps(ncomp);
  for (int u = 0; u < n; ++u) comps[comp[u]].push_back(u);
  for (auto& c : comps) std::sort(c.begin(), c.end());
  std::sort(comps.begin(), comps.end());
  return comps;
}

TransferData transfer_data(const Sft& g, const Potential& f) {
  if (f.window > 2)
    fail(Err::WindowMismatch, "transfer matrices need window <= 2 (recode first)");
  if (!is_irreducible(g)) fail(Err::NotIrreducible, "transfer data needs an irreducible graph");
  TransferData td;
  td.states.resize(g.state_count());
  for (int s = 0; s < g.state_count(); ++s) td.states[s] = s;
  td.rows = build_rows(g, f, td.states);
  PerronPair right = perron(td.rows);
  PerronPair left = perron(transpose(td.rows));
  td.spectral_radius = 0.5 * (right.lambda + left.lambda);
  td.right_eigvec = right.vec;
  td.left_eigvec = left.vec;
  // Scale the left vector so <l, h> = 1.
  double dot = 0.0;
  for (size_t i = 0; i < td.right_eigvec.size(); ++i)
    dot += td.left_eigvec[i] * td.right_eigvec[i];
  for (auto& v : td.left_eigvec) v /= dot;
  // Residual check against the invariant.
  double resid = 0.0;
  for (size_t u = 0; u < td.rows.size(); ++u) {
    double s = 0.0;
    for (auto [v, w] : td.rows[u]) s += w * td.right_eigvec[v];
    resid = std::max(resid, std::abs(s - td.spectral_radius * td.right_eigvec[u]));
  }
  if (resid > tol().eig_residual * std::max(1.0, td.spectral_radius))
    fail(Err::ToleranceFailure, "eigenvector residual " + std::to_string(resid));
  return td;
}

namespace {

Sft component_sft(const Sft& g, const std::vector<int>& states) {
  std::vector<int> local(g.state_count(), -1);
  std::vector<std::string> names;
  for (size_t i = 0; i < states.size(); ++i) {
    local[states[i]] = static_cast<int>(i);
    names.push_back(g.states[states[i]]);
  }
  std::vector<std::pair<int, int>> edges;
  for (int u : states)
    for (int v : g.out[u])
      if (local[v] >= 0) edges.push_back({local[u], local[v]});
  return Sft::make(std::move(names), edges);
}

Potential restrict_potential(const Sft& g, const Potential& f, const Sft& sub,
                             const std::vector<int>& states) {
  Potential out;
  out.window = f.window;
  for (const auto& w : enumerate_words(sub, f.window)) {
    Word orig;
    for (int s : w) orig.push_back(states[s]);
    out.table[w] = f.value(orig);
  }
  (void)g;
  return out;
}

struct ComponentPressure {
  std::vector<int> states;
  double value;
};

std::vector<ComponentPressure> component_pressures(const Sft& g, const Potential& f) {
  validate_sft(g);
  std::vector<ComponentPressure> out;
  for (const auto& comp : strongly_connected_components(g)) {
    bool has_edge = comp.size() > 1 || g.has_edge(comp[0], comp[0]);
    if (!has_edge) continue;
    Sft sub = component_sft(g, comp);
    Potential fsub = restrict_potential(g, f, sub, comp);
    PerronPair p = perron(build_rows(sub, fsub, [&] {
      std::vector<int> all(sub.state_count());
      for (int i = 0; i < sub.state_count(); ++i) all[i] = i;
      return all;
    }()));
    out.push_back({comp, std::log(p.lambda)});
  }
  if (out.empty()) fail(Err::EmptyShift, "no strongly connected component carries an edge");
  return out;
}

}  // namespace

double pressure(const Sft& g, const Potential& f) {
  validate_potential(g, f);
  if (f.window > 2) {
    HigherBlock hb = higher_block(g, f.window - 1);
    Potential f2;
    f2.window = 2;
    for (const auto& bw : enumerate_words(hb.block_sft, 2))
      f2.table[bw] = f.value(hb.decode_word(bw));
    return pressure(hb.block_sft, f2);
  }
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& cp : component_pressures(g, f)) best = std::max(best, cp.value);
  return best;
}

MarkovMeasure equilibrium_measure(const Sft& g, const Potential& f) {
  validate_potential(g, f);
  if (f.window > 2)
    fail(Err::WindowMismatch, "equilibrium measures need window <= 2 (recode first)");
  auto comps = component_pressures(g, f);
  size_t best = 0;
  for (size_t i = 1; i < comps.size(); ++i)
    if (comps[i].value > comps[best].value) best = i;
  for (size_t i = 0; i < comps.size(); ++i)
    if (i != best && comps[i].value >= comps[best].value - tol().component_tie)
      fail(Err::NonUniqueEquilibrium,
           "pressure is maximized on more than one component (tie within " +
               std::to_string(tol().component_tie) + ")");

  const auto& states = comps[best].states;
  Sft sub = component_sft(g, states);
  Potential fsub = restrict_potential(g, f, sub, states);
  TransferData td = transfer_data(sub, fsub);

  MarkovMeasure m;
  int n = g.state_count();
  m.transition.assign(n, {});
  m.stationary.assign(n, 0.0);
  const auto& h = td.right_eigvec;
  const auto& l = td.left_eigvec;
  double lambda = td.spectral_radius;
  // P(u,v) = M(u,v) h(v) / (lambda h(u)); rows renormalized exactly.
  for (size_t i = 0; i < states.size(); ++i) {
    double row_sum = 0.0;
    std::vector<std::pair<int, double>> row;
    for (auto [j, w] : td.rows[i]) {
      double p = w * h[j] / (lambda * h[i]);
      row.push_back({states[j], p});
      row_sum += p;
    }
    if (std::abs(row_sum - 1.0) > tol().measure_residual)
      fail(Err::ToleranceFailure, "transition row sum residual " + std::to_string(row_sum - 1.0));
    for (auto& [v, p] : row) p /= row_sum;
    m.transition[states[i]] = std::move(row);
  }
  double mass = 0.0;
  for (size_t i = 0; i < states.size(); ++i) mass += l[i] * h[i];
  for (size_t i = 0; i < states.size(); ++i) m.stationary[states[i]] = l[i] * h[i] / mass;
  // States off the supporting component: uniform over out-edges, zero mass.
  for (int u = 0; u < n; ++u) {
    if (!m.transition[u].empty()) continue;
    double p = 1.0 / static_cast<double>(g.out[u].size());
    for (int v : g.out[u]) m.transition[u].push_back({v, p});
  }
  // Polish stationarity: one exact renormalization pass of pi <- pi P.
  std::vector<double> pi = m.stationary;
  for (int polish = 0; polish < 3; ++polish) {
    std::vector<double> nxt(n, 0.0);
    for (int u = 0; u < n; ++u)
      for (auto [v, p] : m.transition[u]) nxt[v] += pi[u] * p;
    double s = 0.0;
    for (double v : nxt) s += v;
    for (double& v : nxt) v /= s;
    pi.swap(nxt);
  }
  m.stationary = pi;
  return m;
}

double MarkovMeasure::prob(int u, int v) const {
  for (auto [w, p] : transition[u])
    if (w == v) return p;
  return 0.0;
}

double MarkovMeasure::cylinder(const Word& w) const {
  if (w.empty()) return 1.0;
  double p = stationary[w[0]];
  for (size_t i = 0; i + 1 < w.size(); ++i) p *= prob(w[i], w[i + 1]);
  return p;
}

void validate_measure(const Sft& g, const MarkovMeasure& m) {
  const double tolr = tol().measure_residual;
  if (m.state_count() != g.state_count())
    fail(Err::ValidationError, "measure dimension does not match the shift");
  double total = 0.0;
  for (int u = 0; u < m.state_count(); ++u) {
    double row = 0.0;
    for (auto [v, p] : m.transition[u]) {
      if (p < -tolr) fail(Err::ValidationError, "negative transition probability");
      if (p > tolr && !g.has_edge(u, v))
        fail(Err::ValidationError, "transition mass outside the edge set");
      row += p;
    }
    if (std::abs(row - 1.0) > tolr)
      fail(Err::ValidationError, "transition row " + std::to_string(u) + " sums to " +
                                     std::to_string(row));
    total += m.stationary[u];
  }
  if (std::abs(total - 1.0) > tolr)
    fail(Err::ValidationError, "stationary vector sums to " + std::to_string(total));
  for (int v = 0; v < m.state_count(); ++v) {
    double in = 0.0;
    for (int u = 0; u < m.state_count(); ++u) in += m.stationary[u] * m.prob(u, v);
    if (std::abs(in - m.stationary[v]) > tolr)
      fail(Err::ValidationError, "stationarity residual at state " + std::to_string(v));
  }
}

double entropy(const MarkovMeasure& m) {
  double h = 0.0;
  for (int u = 0; u < m.state_count(); ++u) {
    if (m.stationary[u] == 0.0) continue;
    for (auto [v, p] : m.transition[u]) {
      if (p <= 0.0) continue;
      h -= m.stationary[u] * p * std::log(p);
    }
  }
  return h;
}

double integrate(const MarkovMeasure& m, const Potential& f) {
  if (f.window > 2) fail(Err::WindowMismatch, "integrate needs window <= 2 (recode first)");
  double s = 0.0;
  for (int u = 0; u < m.state_count(); ++u) {
    if (m.stationary[u] == 0.0) continue;
    if (f.window == 1) {
      s += m.stationary[u] * f.value({u});
    } else {
      for (auto [v, p] : m.transition[u])
        if (p > 0.0) s += m.stationary[u] * p * f.value({u, v});
    }
  }
  return s;
}

std::vector<std::pair<double, double>> pressure_curve(const Sft& g, const Potential& f,
                                                      const std::vector<double>& q_grid) {
  std::vector<std::pair<double, double>> out;
  out.reserve(q_grid.size());
  for (double q : q_grid) out.push_back({q, pressure(g, scale(f, q))});
  return out;
}

std::vector<double> stationary_vector(const SparseRows& transition) {
  int n = static_cast<int>(transition.size());
  if (n == 0) fail(Err::EmptyShift, "empty transition matrix");
  // Damped iteration pi <- (pi + pi P)/2 converges for periodic chains too.
  std::vector<double> pi(n, 1.0 / n), nxt(n);
  for (long it = 0; it < tol().eig_iter_cap; ++it) {
    std::fill(nxt.begin(), nxt.end(), 0.0);
    for (int u = 0; u < n; ++u)
      for (auto [v, p] : transition[u]) nxt[v] += pi[u] * p;
    double s = 0.0;
    for (int u = 0; u < n; ++u) {
      nxt[u] = 0.5 * (nxt[u] + pi[u]);
      s += nxt[u];
    }
    double diff = 0.0;
    for (int u = 0; u < n; ++u) {
      nxt[u] /= s;
      diff = std::max(diff, std::abs(nxt[u] - pi[u]));
    }
    pi.swap(nxt);
    if (diff <= 1e-16) return pi;
  }
  fail(Err::ToleranceFailure, "stationary vector iteration hit the cap");
}

MarkovMeasure measure_to_blocks(const MarkovMeasure& m, const HigherBlock& hb) {
  MarkovMeasure out;
  int nb = static_cast<int>(hb.block_words.size());
  out.transition.assign(nb, {});
  out.stationary.assign(nb, 0.0);
  for (int b = 0; b < nb; ++b) {
    const Word& w = hb.block_words[b];
    out.stationary[b] = m.cylinder(w);
    for (int c : hb.block_sft.out[b]) {
      int last = hb.block_words[c].back();
      double p = m.prob(w.back(), last);
      if (p > 0.0) out.transition[b].push_back({c, p});
    }
    if (out.transition[b].empty()) {
      // Off the support: uniform over block successors.
      double p = 1.0 / static_cast<double>(hb.block_sft.out[b].size());
      for (int c : hb.block_sft.out[b]) out.transition[b].push_back({c, p});
    } else {
      double row = 0.0;
      for (auto [c, p] : out.transition[b]) row += p;
      for (auto& [c, p] : out.transition[b]) p /= row;
    }
  }
  double mass = 0.0;
  for (double v : out.stationary) mass += v;
  for (double& v : out.stationary) v /= mass;
  return out;
}

}  // namespace tmf
