#include "thermoflow/timechange.hpp"

#include <algorithm>
#include <cmath>

#include "thermoflow/tolerances.hpp"

namespace tmf {

double FiberSegments::eval(double s) const {
  for (size_t i = 0; i + 1 < breaks.size(); ++i)
    if (s <= breaks[i + 1] || i + 2 == breaks.size()) return pieces[i].eval(s);
  return pieces.back().eval(s);
}

double FiberSegments::integral() const {
  double total = 0.0;
  for (size_t i = 0; i < pieces.size(); ++i) total += pieces[i].integral(breaks[i], breaks[i + 1]);
  return total;
}

double FiberSegments::integral_to(double s) const {
  double total = 0.0;
  for (size_t i = 0; i < pieces.size(); ++i) {
    double hi = std::min(s, breaks[i + 1]);
    if (hi <= breaks[i]) break;
    total += pieces[i].integral(breaks[i], hi);
    if (hi >= s) break;
  }
  return total;
}

double FiberSegments::min() const {
  double m = pieces.front().eval(breaks.front());
  for (size_t i = 0; i < pieces.size(); ++i)
    m = std::min(m, pieces[i].min_on(breaks[i], breaks[i + 1]));
  return m;
}

double FiberSegments::max() const {
  double m = pieces.front().eval(breaks.front());
  for (size_t i = 0; i < pieces.size(); ++i)
    m = std::max(m, pieces[i].max_on(breaks[i], breaks[i + 1]));
  return m;
}

RateSlices rate_from_fiber_potential(const SuspensionFlow& flow, const FiberPotential& rate) {
  Potential roof = flow.roof;
  return [roof, rate](const SymbolicPoint& x, long i) {
    FiberSegments seg;
    seg.breaks = {0.0, roof.value_at(x, i)};
    seg.pieces = {rate.fiber_poly(x, i)};
    return seg;
  };
}

RateSlices TimeChangeSpec::slices() const {
  const HigherBlock* hb = &blocks;
  const std::vector<FiberSegments>* segs = &rate;
  int m = window;
  return [hb, segs, m](const SymbolicPoint& x, long i) {
    Word w;
    w.reserve(m);
    for (int j = 0; j < m; ++j) w.push_back(x.coord(i + j));
    auto it = hb->block_index.find(w);
    if (it == hb->block_index.end())
      fail(Err::IncompatibleRecoding, "point leaves the recoded shift");
    return (*segs)[it->second];
  };
}

namespace {

// Solve integral_{a}^{x} seg = target for x in [a, b], monotone (seg > 0).
double invert_segment(const FiberSegments& seg, double a, double b, double target) {
  double base = seg.integral_to(a);
  if (target <= 0.0) return a;
  if (target >= seg.integral_to(b) - base) return b;
  double lo = a, hi = b;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    double v = seg.integral_to(mid) - base;
    if (std::abs(v - target) <= tol().fiber_invert * 0.01 || (hi - lo) < 1e-16 * (1.0 + std::abs(b)))
      return mid;
    if (v < target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double ell_impl(const RateSlices& slices, const FlowPoint& p, double t) {
  if (t == 0.0) return 0.0;
  const long step_cap = 100000000;
  if (t > 0.0) {
    double remaining = t;
    double l = 0.0;
    double s = p.fiber;
    for (long j = 0; j < step_cap; ++j) {
      FiberSegments seg = slices(p.base_point, j);
      if (seg.min() <= 0.0) fail(Err::NonpositiveRate, "rate must be strictly positive");
      double R = seg.breaks.back();
      double avail = seg.integral() - seg.integral_to(s);
      if (avail <= remaining) {
        remaining -= avail;
        l += R - s;
        s = 0.0;
      } else {
        double target = invert_segment(seg, s, R, remaining);
        return l + (target - s);
      }
    }
    fail(Err::ToleranceFailure, "time-change walk exceeded the step cap");
  }
  // Backwards: mirror of the forward walk.
  double remaining = -t;
  double l = 0.0;
  double s = p.fiber;
  long j = 0;
  for (long guard = 0; guard < step_cap; ++guard) {
    FiberSegments seg = slices(p.base_point, j);
    if (seg.min() <= 0.0) fail(Err::NonpositiveRate, "rate must be strictly positive");
    double avail = seg.integral_to(s);
    if (avail < remaining) {
      remaining -= avail;
      l += s;
      --j;
      FiberSegments prev = slices(p.base_point, j);
      s = prev.breaks.back();
    } else {
      // Find x in [0, s] with integral_x^s = remaining.
      double x = invert_segment(seg, 0.0, s, seg.integral_to(s) - remaining);
      return -(l + (s - x));
    }
  }
  fail(Err::ToleranceFailure, "time-change walk exceeded the step cap");
}

void check_rate_positive(const SuspensionFlow& flow, const FiberPotential& rate) {
  int window = std::max(flow.roof.window, rate.base_window());
  for (const auto& w : enumerate_words(flow.base, window)) {
    Word rw(w.begin(), w.begin() + flow.roof.window);
    double roof = flow.roof.value(rw);
    if (rate.fiber_poly_word(w).min_on(0.0, roof) <= 0.0)
      fail(Err::NonpositiveRate, "rate has a nonpositive value over word '" +
                                     word_to_string(flow.base, w) + "'");
  }
}

FiberPotential recode_fiber(const FiberPotential& f, const HigherBlock& hb) {
  FiberPotential out;
  for (const auto& t : f.terms) out.terms.push_back({t.degree, recode_window(t.coeff, hb)});
  return out;
}

}  // namespace

double ell(const SuspensionFlow& flow, const FiberPotential& rate, const FlowPoint& p, double t) {
  validate_flow(flow);
  check_rate_positive(flow, rate);
  return ell_impl(rate_from_fiber_potential(flow, rate), p, t);
}

double ell(const SuspensionFlow& flow, const RateSlices& rate, const FlowPoint& p, double t) {
  (void)flow;
  return ell_impl(rate, p, t);
}

FlowPoint time_changed_evaluate(const SuspensionFlow& flow, const FiberPotential& rate,
                                const FlowPoint& p, double tau) {
  return flow_evaluate(flow, p, ell(flow, rate, p, tau));
}

double time_change_inverse(const SuspensionFlow& flow, const FiberPotential& rate,
                           const FlowPoint& p, double t) {
  validate_flow(flow);
  check_rate_positive(flow, rate);
  RateSlices slices = rate_from_fiber_potential(flow, rate);
  // k(y, t) = integral_0^t r(phi^s y) ds, accumulated fiber by fiber.
  if (t == 0.0) return 0.0;
  double acc = 0.0;
  if (t > 0.0) {
    double s = p.fiber;
    double left = t;
    for (long j = 0;; ++j) {
      FiberSegments seg = slices(p.base_point, j);
      double R = seg.breaks.back();
      if (s + left <= R) return acc + (seg.integral_to(s + left) - seg.integral_to(s));
      acc += seg.integral() - seg.integral_to(s);
      left -= R - s;
      s = 0.0;
    }
  }
  double s = p.fiber;
  double left = -t;
  for (long j = 0;; --j) {
    FiberSegments seg = slices(p.base_point, j);
    if (s - left >= 0.0) return -(acc + seg.integral_to(s) - seg.integral_to(s - left));
    acc += seg.integral_to(s);
    left -= s;
    FiberSegments prev = slices(p.base_point, j - 1);
    s = prev.breaks.back();
  }
}

SuspensionFlow time_changed_roof(const SuspensionFlow& flow, const FiberPotential& rate) {
  validate_flow(flow);
  check_rate_positive(flow, rate);
  SuspensionFlow out;
  out.base = flow.base;
  out.roof = delta_potential(flow, rate);
  return out;
}

FlowMeasure transform_measure(const SuspensionFlow& flow, const FiberPotential& rate,
                              const FlowMeasure& mu) {
  SuspensionFlow changed = time_changed_roof(flow, rate);
  return lift_measure(changed, mu.base_measure);
}

SuspensionFlow inverse_time_change(const SuspensionFlow& flow, const FiberPotential& rate) {
  validate_flow(flow);
  check_rate_positive(flow, rate);
  static const GaussLegendre gl(32);
  int window = std::max(flow.roof.window, rate.base_window());
  Potential back;
  back.window = window;
  for (const auto& w : enumerate_words(flow.base, window)) {
    Word rw(w.begin(), w.begin() + flow.roof.window);
    double R = flow.roof.value(rw);
    Polynomial p = rate.fiber_poly_word(w);
    Polynomial tau = p.antiderivative();  // new fiber coordinate
    // R'' = integral over the new fiber of 1/r at the transported position,
    // chunked in the old coordinate so each quadrature panel is smooth.
    double total = 0.0;
    int chunks = std::max(1, static_cast<int>(std::ceil(R / 0.5)));
    for (int c = 0; c < chunks; ++c) {
      double a = R * c / chunks, b = R * (c + 1) / chunks;
      double ta = tau.eval(a), tb = tau.eval(b);
      double half = 0.5 * (tb - ta), mid = 0.5 * (ta + tb);
      for (size_t k = 0; k < gl.nodes.size(); ++k) {
        double sp = mid + half * gl.nodes[k];  // point in the new fiber
        // Invert tau on [a, b] (monotone since r > 0).
        double lo = a, hi = b;
        for (int it = 0; it < 100; ++it) {
          double m = 0.5 * (lo + hi);
          if (tau.eval(m) < sp)
            lo = m;
          else
            hi = m;
        }
        double s = 0.5 * (lo + hi);
        total += gl.weights[k] * half / p.eval(s);
      }
    }
    back.table[w] = total;
  }
  SuspensionFlow out;
  out.base = flow.base;
  out.roof = back;
  return out;
}

HyperbolicityReport is_hyperbolic(const SuspensionFlow& flow, const FiberPotential& f) {
  validate_flow(flow);
  if (!is_irreducible(flow.base)) fail(Err::NotIrreducible, "hyperbolicity needs an irreducible base");
  HyperbolicityReport rep;
  Potential df = delta_potential(flow, f);
  int window = std::max(df.window, flow.roof.window);

  if (window == 1) {
    rep.pressure = flow_pressure(flow, f);
    auto ratio = max_ratio_cycle(flow.base, df, flow.roof);
    rep.max_flow_average = ratio.value;
    rep.witness_cycle = ratio.cycle;
    rep.equilibrium_entropy = flow_entropy(flow, flow_equilibrium(flow, f));
  } else {
    auto [rflow, hb] = recode_flow(flow, window);
    FiberPotential rf = recode_fiber(f, hb);
    rep.pressure = flow_pressure(rflow, rf);
    Potential rdf = recode_window(df, hb);
    auto ratio = max_ratio_cycle(rflow.base, rdf, rflow.roof);
    rep.max_flow_average = ratio.value;
    rep.witness_cycle = hb.decode_word(ratio.cycle);
    rep.equilibrium_entropy = flow_entropy(rflow, flow_equilibrium(rflow, rf));
  }
  rep.hyperbolic = rep.pressure > rep.max_flow_average + 1e-10;
  return rep;
}

namespace {

struct HorizonData {
  HigherBlock blocks;
  int window = 1;                    // m
  std::vector<FiberSegments> birkhoff;  // per block state: s -> int_0^t f(phi^u (v,s)) du
  double max_average = 0.0;          // max over states and fibers of (1/t) * birkhoff
};

// Exact finite-horizon Birkhoff integrals of a fiber-polynomial f, per m-block
// state, as piecewise polynomials of the start fiber.
HorizonData horizon_birkhoff(const SuspensionFlow& flow, const FiberPotential& f, double t) {
  int w = std::max(flow.roof.window, f.base_window());
  // Tight crossing bound: J_max = max over words of #{j >= 1 : T_j < t} with
  // T_j the roof sum over positions 1..j-1 (minimized over paths).
  int spec_bound = static_cast<int>(
      std::ceil((t + flow.roof.max_value()) / flow.roof.min_value())) +
      flow.roof.window + f.base_window();
  HigherBlock hb1 = higher_block(flow.base, w);
  Potential roof1 = recode_window(flow.roof, hb1);
  int nb = hb1.block_sft.state_count();
  std::vector<double> minT(nb, 0.0);
  int jmax = 1;
  for (int depth = 1;; ++depth) {
    std::vector<double> nxt(nb, std::numeric_limits<double>::infinity());
    for (int u = 0; u < nb; ++u)
      for (int v : hb1.block_sft.out[u])
        nxt[u] = std::min(nxt[u], roof1.value({v}) + minT[v]);
    double best = *std::min_element(nxt.begin(), nxt.end());
    if (best >= t) break;
    minT.swap(nxt);
    jmax = depth + 1;
    if (jmax + w > tol().window_explosion || jmax + w > spec_bound + 1)
      fail(Err::WindowExplosion, "required window " + std::to_string(jmax + w) +
                                     " exceeds the recoding cap");
  }
  HorizonData hd;
  hd.window = jmax + w;
  // Count admissible words before materializing the presentation; transfer
  // matrices grow with the word count, not just the window.
  {
    std::vector<double> cnt(flow.base.state_count(), 1.0);
    for (int d = 1; d < hd.window; ++d) {
      std::vector<double> nxt(flow.base.state_count(), 0.0);
      for (int u = 0; u < flow.base.state_count(); ++u)
        for (int v : flow.base.out[u]) nxt[u] += cnt[v];
      cnt.swap(nxt);
    }
    double words = 0.0;
    for (double c : cnt) words += c;
    if (words > 250000.0)
      fail(Err::WindowExplosion, "window " + std::to_string(hd.window) + " spans " +
                                     std::to_string(static_cast<long>(words)) +
                                     " admissible words");
  }
  hd.blocks = higher_block(flow.base, hd.window);
  hd.birkhoff.resize(hd.blocks.block_sft.state_count());
  double max_birkhoff = -std::numeric_limits<double>::infinity();
  for (size_t b = 0; b < hd.blocks.block_words.size(); ++b) {
    const Word& word = hd.blocks.block_words[b];
    // Roofs and antiderivatives along the word.
    std::vector<double> R(jmax + 1);
    std::vector<Polynomial> F(jmax + 1);
    for (int j = 0; j <= jmax; ++j) {
      Word rw(word.begin() + j, word.begin() + j + flow.roof.window);
      R[j] = flow.roof.value(rw);
      Word fw(word.begin() + j, word.begin() + j + f.base_window());
      F[j] = f.fiber_poly_word(fw).antiderivative();
    }
    std::vector<double> S(jmax + 2, 0.0);  // S[j] = R[0] + ... + R[j-1]
    for (int j = 1; j <= jmax + 1; ++j) S[j] = S[j - 1] + R[j - 1];

    FiberSegments seg;
    seg.breaks.push_back(0.0);
    for (int j = 1; j <= jmax; ++j) {
      double brk = S[j] - t;
      if (brk > tol().segment_abs && brk < R[0] - tol().segment_abs) seg.breaks.push_back(brk);
    }
    seg.breaks.push_back(R[0]);
    for (size_t i = 0; i + 1 < seg.breaks.size(); ++i) {
      double mid = 0.5 * (seg.breaks[i] + seg.breaks[i + 1]);
      // Crossing count J at start fiber mid: largest j with S[j] <= mid + t.
      int J = 0;
      while (J < jmax + 1 && S[J + 1] <= mid + t) ++J;
      Polynomial piece;
      if (J == 0) {
        piece = F[0].shifted(t).plus(F[0].scaled(-1.0));
      } else {
        double head = F[0].eval(R[0]);
        for (int j = 1; j < J; ++j) head += F[j].eval(R[j]) - F[j].eval(0.0);
        head -= F[J].eval(0.0);
        piece = Polynomial::constant(head)
                    .plus(F[0].scaled(-1.0))
                    .plus(F[J].shifted(t - S[J]));
      }
      seg.pieces.push_back(piece);
      max_birkhoff = std::max(max_birkhoff, piece.max_on(seg.breaks[i], seg.breaks[i + 1]));
    }
    hd.birkhoff[b] = std::move(seg);
  }
  hd.max_average = max_birkhoff / t;
  return hd;
}

}  // namespace

std::optional<double> hyperbolicity_horizon(const SuspensionFlow& flow, const FiberPotential& f) {
  double P = flow_pressure(flow, f);
  for (int k = 0; k <= 7; ++k) {
    double t = std::pow(2.0, k);
    try {
      HorizonData hd = horizon_birkhoff(flow, f, t);
      if (P - hd.max_average > 0.0) return t;
    } catch (const Error& e) {
      if (e.code() != Err::WindowExplosion) throw;
      return std::nullopt;  // deeper horizons only grow the window further
    }
  }
  return std::nullopt;
}

SynchronizationResult synchronize(const SuspensionFlow& flow, const FiberPotential& f,
                                  double t_horizon) {
  validate_flow(flow);
  validate_fiber_potential(flow.base, f);
  if (t_horizon <= 0.0) fail(Err::ValidationError, "t_horizon must be positive");
  if (!is_irreducible(flow.base))
    fail(Err::NotIrreducible, "synchronization needs an irreducible base");

  double P = flow_pressure(flow, f);
  HorizonData hd = horizon_birkhoff(flow, f, t_horizon);
  if (P - hd.max_average <= 0.0)
    fail(Err::NotHyperbolicAtHorizon,
         "max Birkhoff average " + std::to_string(hd.max_average) + " >= pressure " +
             std::to_string(P) + " at t = " + std::to_string(t_horizon));

  SynchronizationResult res;
  res.spec.source = flow;
  res.spec.t_horizon = t_horizon;
  res.spec.pressure_const = P;
  res.spec.window = hd.window;
  res.spec.blocks = std::move(hd.blocks);
  res.spec.rate.resize(hd.birkhoff.size());
  Potential roof_prime;
  roof_prime.window = 1;
  for (size_t b = 0; b < hd.birkhoff.size(); ++b) {
    FiberSegments& seg = res.spec.rate[b];
    seg.breaks = hd.birkhoff[b].breaks;
    for (const auto& piece : hd.birkhoff[b].pieces)
      seg.pieces.push_back(Polynomial::constant(P).plus(piece.scaled(-1.0 / t_horizon)));
    roof_prime.table[{static_cast<int>(b)}] = seg.integral();
  }
  res.synchronized.base = res.spec.blocks.block_sft;
  res.synchronized.roof = std::move(roof_prime);
  validate_flow(res.synchronized);
  return res;
}

SynchronizationReport verify_synchronization(const SuspensionFlow& flow, const FiberPotential& f,
                                double t_horizon) {
  SynchronizationResult sync = synchronize(flow, f, t_horizon);
  SynchronizationReport rep;
  rep.pressure = sync.spec.pressure_const;
  rep.horizon = t_horizon;
  rep.window = sync.spec.window;

  // (a) The synchronized flow has topological entropy 1.
  auto [h_sync, mme_sync] = flow_mme(sync.synchronized);
  rep.h_top_synchronized = h_sync;

  // (b) Base equilibrium of delta f - P R equals the synchronized MME base on
  // all original cylinders of length <= 6.
  Potential df = delta_potential(flow, f);
  MarkovMeasure nu1 =
      equilibrium_measure(flow.base, combine(flow.base, df, flow.roof, -rep.pressure));
  const MarkovMeasure& nu2 = mme_sync.base_measure;
  const HigherBlock& hb = sync.spec.blocks;
  double max_disc = 0.0;
  for (int len = 1; len <= 6; ++len) {
    for (const Word& w : enumerate_words(flow.base, len)) {
      double mu1 = nu1.cylinder(w);
      // Induced mass: sum over admissible extensions to length len + m - 1.
      double mu2 = 0.0;
      Word ext = w;
      auto extend = [&](auto&& self, int depth) -> void {
        if (depth == hb.n - 1) {
          mu2 += nu2.cylinder(hb.encode_word(ext));
          return;
        }
        for (int v : flow.base.out[ext.back()]) {
          ext.push_back(v);
          self(self, depth + 1);
          ext.pop_back();
        }
      };
      extend(extend, 0);
      max_disc = std::max(max_disc, std::abs(mu1 - mu2));
    }
  }
  rep.max_cylinder_discrepancy = max_disc;

  // (c) Density identity through the two pipelines: for fiber test functions
  // g, int (g/r) dmu_r against (int g dmu)/(int r dmu).
  MarkovMeasure nu1_blocks = measure_to_blocks(nu1, hb);
  const Potential& roof_prime = sync.synchronized.roof;
  double denom_rhs = integrate(nu1_blocks, roof_prime);   // int delta r d nu1
  double denom_lhs = integrate(nu2, roof_prime);          // int R' d nu2
  std::vector<FiberPotential> battery;
  battery.push_back(FiberPotential::constant(flow.base, 1.0));
  for (int s = 0; s < flow.base.state_count(); ++s) {
    std::vector<double> ind(flow.base.state_count(), 0.0);
    ind[s] = 1.0;
    Potential indicator;
    indicator.window = 1;
    for (int u = 0; u < flow.base.state_count(); ++u) indicator.table[{u}] = ind[u];
    FiberPotential g0;
    g0.terms.push_back({0, indicator});
    battery.push_back(g0);
    FiberPotential g1;
    g1.terms.push_back({1, indicator});
    battery.push_back(g1);
  }
  double max_err = 0.0;
  for (const FiberPotential& g : battery) {
    Potential dg = delta_potential(flow, g);
    Potential dg_blocks = recode_window(dg, hb);
    double lhs = integrate(nu2, dg_blocks) / denom_lhs;
    double rhs = integrate(nu1_blocks, dg_blocks) / denom_rhs;
    max_err = std::max(max_err, std::abs(lhs - rhs));
  }
  rep.density_check_max_error = max_err;

  rep.passed = std::abs(rep.h_top_synchronized - 1.0) <= tol().sync_entropy &&
               rep.max_cylinder_discrepancy <= tol().cylinder_match &&
               rep.density_check_max_error <= tol().density_check;
  return rep;
}

}  // namespace tmf
