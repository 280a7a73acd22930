#include "thermoflow/factors.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "thermoflow/tolerances.hpp"

namespace tmf {

int BlockCode::image_state(const Word& w) const {
  auto it = map.find(w);
  if (it == map.end()) fail(Err::WindowMismatch, "no code entry for the given source window");
  return it->second;
}

Word BlockCode::image_word(const Word& w) const {
  if (static_cast<int>(w.size()) < window)
    fail(Err::WindowMismatch, "word shorter than the code window");
  Word out;
  for (size_t i = 0; i + window <= w.size(); ++i)
    out.push_back(image_state(Word(w.begin() + i, w.begin() + i + window)));
  return out;
}

BlockCode make_block_code(const Sft& source, int window,
                          const std::map<Word, std::string>& table) {
  validate_sft(source);
  if (window < 1) fail(Err::ValidationError, "code window must be >= 1");
  auto words = enumerate_words(source, window);
  if (words.size() != table.size())
    fail(Err::ValidationError, "code table must cover exactly the admissible source windows");
  std::vector<std::string> target_names;
  for (const auto& [w, name] : table) {
    if (std::find(target_names.begin(), target_names.end(), name) == target_names.end())
      target_names.push_back(name);
  }
  std::sort(target_names.begin(), target_names.end());
  BlockCode code;
  code.window = window;
  code.source = source;
  for (const auto& w : words) {
    auto it = table.find(w);
    if (it == table.end())
      fail(Err::ValidationError, "missing code entry for word '" + word_to_string(source, w) + "'");
    int idx = static_cast<int>(
        std::find(target_names.begin(), target_names.end(), it->second) - target_names.begin());
    code.map[w] = idx;
  }
  // Image edges from (window+1)-words.
  std::set<std::pair<int, int>> edges;
  for (const auto& w : enumerate_words(source, window + 1)) {
    Word a(w.begin(), w.end() - 1), b(w.begin() + 1, w.end());
    edges.insert({code.map.at(a), code.map.at(b)});
  }
  code.target = Sft::make(target_names,
                          std::vector<std::pair<int, int>>(edges.begin(), edges.end()));
  validate_code(code);
  return code;
}

namespace {

// 1-block presentation of the code: recode the source to window-blocks so the
// code becomes a state map.
struct OneBlock {
  HigherBlock hb;
  std::vector<int> pi;  // block state -> target state
};

OneBlock one_block(const BlockCode& code) {
  OneBlock ob;
  ob.hb = higher_block(code.source, code.window);
  ob.pi.resize(ob.hb.block_words.size());
  for (size_t b = 0; b < ob.hb.block_words.size(); ++b)
    ob.pi[b] = code.map.at(ob.hb.block_words[b]);
  return ob;
}

}  // namespace

void validate_code(const BlockCode& code) {
  validate_sft(code.target);
  // Image admissibility is built in; verify the factor is onto the target:
  // subset construction never reaches an empty preimage set.
  OneBlock ob = one_block(code);
  int nb = static_cast<int>(ob.hb.block_words.size());
  std::set<std::pair<int, std::vector<int>>> seen;
  std::vector<std::pair<int, std::vector<int>>> stack;
  for (int t = 0; t < code.target.state_count(); ++t) {
    std::vector<int> subset;
    for (int b = 0; b < nb; ++b)
      if (ob.pi[b] == t) subset.push_back(b);
    if (subset.empty())
      fail(Err::ValidationError, "target state '" + code.target.states[t] + "' has no preimage");
    stack.push_back({t, subset});
    seen.insert(stack.back());
  }
  while (!stack.empty()) {
    auto [t, subset] = stack.back();
    stack.pop_back();
    for (int t2 : code.target.out[t]) {
      std::vector<int> next;
      for (int b : subset)
        for (int b2 : ob.hb.block_sft.out[b])
          if (ob.pi[b2] == t2 &&
              std::find(next.begin(), next.end(), b2) == next.end())
            next.push_back(b2);
      std::sort(next.begin(), next.end());
      if (next.empty())
        fail(Err::ValidationError,
             "target word through '" + code.target.states[t2] + "' has no source preimage");
      if (seen.insert({t2, next}).second) stack.push_back({t2, next});
    }
  }
}

SymbolicPoint apply_code_point(const BlockCode& code, const SymbolicPoint& x) {
  HigherBlock hb = higher_block(code.source, code.window);
  SymbolicPoint blocks = point_to_blocks(hb, x);
  SymbolicPoint out = blocks;
  auto relabel = [&](Word& w) {
    for (int& s : w) s = code.map.at(hb.block_words[s]);
  };
  relabel(out.past_cycle);
  relabel(out.core);
  relabel(out.future_cycle);
  return out;
}

FactorFlow apply_code(const BlockCode& code, const SuspensionFlow& flow_src) {
  validate_flow(flow_src);
  int w_r = flow_src.roof.window;
  int span = w_r + code.window - 1;
  // Group source spans by the image of their first w_r target symbols; the
  // roof must be constant on each group.
  std::map<Word, double> target_roof;
  for (const auto& w : enumerate_words(code.source, span)) {
    Word rw(w.begin(), w.begin() + w_r);
    double r = flow_src.roof.value(rw);
    Word img = code.image_word(w);
    Word key(img.begin(), img.begin() + w_r);
    auto [it, inserted] = target_roof.insert({key, r});
    if (!inserted && std::abs(it->second - r) > tol().segment_abs)
      fail(Err::RoofNotFiberConstant,
           "roof differs across the code fiber of target word '" +
               word_to_string(code.target, key) + "'");
  }
  FactorFlow out;
  out.flow.base = code.target;
  out.flow.roof.window = w_r;
  out.flow.roof.table = std::move(target_roof);
  validate_flow(out.flow);
  out.target_roof = out.flow.roof;
  return out;
}

long count_preimage_paths(const BlockCode& code, const Word& target_word) {
  OneBlock ob = one_block(code);
  int nb = static_cast<int>(ob.hb.block_words.size());
  if (target_word.empty()) return 0;
  std::vector<long> cnt(nb, 0);
  for (int b = 0; b < nb; ++b)
    if (ob.pi[b] == target_word[0]) cnt[b] = 1;
  for (size_t i = 1; i < target_word.size(); ++i) {
    std::vector<long> nxt(nb, 0);
    for (int b = 0; b < nb; ++b) {
      if (cnt[b] == 0) continue;
      for (int b2 : ob.hb.block_sft.out[b])
        if (ob.pi[b2] == target_word[i]) nxt[b2] += cnt[b];
    }
    cnt.swap(nxt);
  }
  long total = 0;
  for (long c : cnt) total += c;
  return total;
}

FiniteToOneReport check_finite_to_one(const BlockCode& code) {
  OneBlock ob = one_block(code);
  const Sft& g = ob.hb.block_sft;
  int nb = g.state_count();
  FiniteToOneReport rep;

  // Pair graph on equal-image pairs; a diamond is an off-diagonal pair
  // reachable from and back to the diagonal.
  auto pid = [nb](int a, int b) { return a * nb + b; };
  std::vector<char> fwd(nb * nb, 0), bwd(nb * nb, 0);
  std::vector<int> stack;
  for (int a = 0; a < nb; ++a) {
    fwd[pid(a, a)] = 1;
    stack.push_back(pid(a, a));
  }
  while (!stack.empty()) {
    int id = stack.back();
    stack.pop_back();
    int a = id / nb, b = id % nb;
    for (int a2 : g.out[a])
      for (int b2 : g.out[b])
        if (ob.pi[a2] == ob.pi[b2] && !fwd[pid(a2, b2)]) {
          fwd[pid(a2, b2)] = 1;
          stack.push_back(pid(a2, b2));
        }
  }
  for (int a = 0; a < nb; ++a) {
    bwd[pid(a, a)] = 1;
    stack.push_back(pid(a, a));
  }
  while (!stack.empty()) {
    int id = stack.back();
    stack.pop_back();
    int a = id / nb, b = id % nb;
    for (int a2 : g.in[a])
      for (int b2 : g.in[b])
        if (ob.pi[a2] == ob.pi[b2] && !bwd[pid(a2, b2)]) {
          bwd[pid(a2, b2)] = 1;
          stack.push_back(pid(a2, b2));
        }
  }
  rep.finite_to_one = true;
  for (int a = 0; a < nb && rep.finite_to_one; ++a)
    for (int b = 0; b < nb; ++b)
      if (a != b && fwd[pid(a, b)] && bwd[pid(a, b)]) {
        rep.finite_to_one = false;
        break;
      }
  if (!rep.finite_to_one) return rep;

  // Resolving checks: successors (resp. predecessors) carry distinct images.
  rep.right_resolving = true;
  for (int b = 0; b < nb && rep.right_resolving; ++b) {
    std::set<int> images;
    for (int b2 : g.out[b])
      if (!images.insert(ob.pi[b2]).second) rep.right_resolving = false;
  }
  rep.left_resolving = true;
  for (int b = 0; b < nb && rep.left_resolving; ++b) {
    std::set<int> images;
    for (int b2 : g.in[b])
      if (!images.insert(ob.pi[b2]).second) rep.left_resolving = false;
  }
  if (!rep.right_resolving && !rep.left_resolving) return rep;

  // Degree: min preimage-path count over target words, increased in length
  // until it stabilizes.
  long prev = -1;
  for (int len = 2; len <= 2 * nb + 4; ++len) {
    long best = -1;
    for (const Word& w : enumerate_words(code.target, len)) {
      long c = count_preimage_paths(code, w);
      if (c > 0 && (best < 0 || c < best)) best = c;
    }
    if (best == prev) break;
    prev = best;
  }
  rep.degree = static_cast<int>(prev);
  return rep;
}

PressurePreservationReport pressure_preservation(const BlockCode& code,
                                                 const SuspensionFlow& flow_src,
                                                 const FiberPotential& f_target) {
  FiniteToOneReport ft = check_finite_to_one(code);
  if (!ft.finite_to_one)
    fail(Err::NotFiniteToOne, "the code has a diamond; pressure transport needs finite fibers");
  FactorFlow tgt = apply_code(code, flow_src);
  validate_fiber_potential(tgt.flow.base, f_target);

  // Pull the potential back: coefficients gain window + code window - 1.
  FiberPotential pullback;
  for (const auto& term : f_target.terms) {
    Potential c;
    c.window = term.coeff.window + code.window - 1;
    for (const auto& w : enumerate_words(code.source, c.window)) {
      Word img = code.image_word(w);
      c.table[w] = term.coeff.value(Word(img.begin(), img.begin() + term.coeff.window));
    }
    pullback.terms.push_back({term.degree, c});
  }

  PressurePreservationReport rep;
  rep.pressure_target = flow_pressure(tgt.flow, f_target);
  rep.pressure_source = flow_pressure(flow_src, pullback);

  // Equilibrium transport on cylinders <= 6: pushforward of the source
  // equilibrium base against the target equilibrium base.
  Potential df_src = delta_potential(flow_src, pullback);
  int w_src = std::max(df_src.window, flow_src.roof.window);
  MarkovMeasure nu_src;
  HigherBlock hb_src;
  bool recoded = w_src > 2;
  if (recoded) {
    hb_src = higher_block(code.source, w_src - 1);
    Potential df2, r2;
    df2.window = r2.window = 2;
    for (const auto& bw : enumerate_words(hb_src.block_sft, 2)) {
      Word orig = hb_src.decode_word(bw);
      df2.table[bw] = df_src.value(Word(orig.begin(), orig.begin() + df_src.window));
      r2.table[bw] = flow_src.roof.value(Word(orig.begin(), orig.begin() + flow_src.roof.window));
    }
    nu_src = equilibrium_measure(hb_src.block_sft,
                                 combine(hb_src.block_sft, df2, r2, -rep.pressure_source));
  } else {
    nu_src = equilibrium_measure(
        code.source, combine(code.source, df_src, flow_src.roof, -rep.pressure_source));
  }
  FlowMeasure eq_tgt = flow_equilibrium(tgt.flow, f_target);
  const MarkovMeasure& nu_tgt = eq_tgt.base_measure;

  double max_disc = 0.0;
  for (int len = 1; len <= 6; ++len) {
    for (const Word& w : enumerate_words(code.target, len)) {
      double tgt_mass = nu_tgt.cylinder(w);
      // Pushforward mass: sum over source words of length len + window - 1
      // whose image is w.
      double push = 0.0;
      for (const Word& sw : enumerate_words(code.source, len + code.window - 1)) {
        if (code.image_word(sw) != w) continue;
        push += recoded ? nu_src.cylinder(hb_src.encode_word(sw)) : nu_src.cylinder(sw);
      }
      max_disc = std::max(max_disc, std::abs(push - tgt_mass));
    }
  }
  rep.max_cylinder_discrepancy = max_disc;
  rep.passed = std::abs(rep.pressure_source - rep.pressure_target) <= tol().factor_pressure &&
               max_disc <= tol().cylinder_match;
  return rep;
}

}  // namespace tmf
