#include "thermoflow/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace tmf {

using nlohmann::json;

std::string fmt12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%#.12g", v);
  return buf;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Err::ParseError, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(Err::ParseError, "cannot write '" + path + "'");
  out << content;
}

namespace {

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    fail(Err::ParseError, e.what());
  }
}

void reject_unknown(const json& j, std::initializer_list<const char*> allowed,
                    const char* what) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed)
      if (it.key() == a) ok = true;
    if (!ok)
      fail(Err::ParseError, std::string("unknown field '") + it.key() + "' in " + what);
  }
}

const json& require(const json& j, const char* key, const char* what) {
  auto it = j.find(key);
  if (it == j.end())
    fail(Err::ParseError, std::string("missing field '") + key + "' in " + what);
  return *it;
}

Word parse_word(const Sft& g, const std::string& key) {
  Word w;
  std::stringstream ss(key);
  std::string tok;
  while (ss >> tok) {
    int s = g.index_of(tok);
    if (s < 0) fail(Err::ParseError, "unknown state '" + tok + "' in word '" + key + "'");
    w.push_back(s);
  }
  return w;
}

Word parse_state_list(const Sft& g, const json& arr, const char* field) {
  if (!arr.is_array()) fail(Err::ParseError, std::string(field) + " must be an array");
  Word w;
  for (const auto& s : arr) {
    if (!s.is_string()) fail(Err::ParseError, std::string(field) + " entries must be state names");
    int idx = g.index_of(s.get<std::string>());
    if (idx < 0)
      fail(Err::ParseError, "unknown state '" + s.get<std::string>() + "' in " + field);
    w.push_back(idx);
  }
  return w;
}

Sft parse_sft_json(const json& j, bool allow_roof) {
  if (!j.is_object()) fail(Err::ParseError, "model must be a JSON object");
  if (allow_roof)
    reject_unknown(j, {"states", "edges", "roof"}, "model");
  else
    reject_unknown(j, {"states", "edges"}, "model");
  const json& jstates = require(j, "states", "model");
  const json& jedges = require(j, "edges", "model");
  if (!jstates.is_array()) fail(Err::ParseError, "'states' must be an array of names");
  std::vector<std::string> names;
  for (const auto& s : jstates) {
    if (!s.is_string()) fail(Err::ParseError, "'states' entries must be strings");
    names.push_back(s.get<std::string>());
  }
  std::vector<std::pair<int, int>> edges;
  if (!jedges.is_array()) fail(Err::ParseError, "'edges' must be an array of pairs");
  auto index_of = [&](const std::string& n) {
    for (size_t i = 0; i < names.size(); ++i)
      if (names[i] == n) return static_cast<int>(i);
    fail(Err::ParseError, "edge references unknown state '" + n + "'");
  };
  for (const auto& e : jedges) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string())
      fail(Err::ParseError, "'edges' entries must be [from, to] name pairs");
    edges.push_back({index_of(e[0].get<std::string>()), index_of(e[1].get<std::string>())});
  }
  Sft g = Sft::make(std::move(names), edges);
  try {
    validate_sft(g);
  } catch (const Error& err) {
    fail(Err::ValidationError, err.what());
  }
  return g;
}

Potential parse_potential_json(const json& j, const Sft& g) {
  if (!j.is_object()) fail(Err::ParseError, "potential must be a JSON object");
  reject_unknown(j, {"window", "table"}, "potential");
  const json& jw = require(j, "window", "potential");
  const json& jt = require(j, "table", "potential");
  if (!jw.is_number_integer() || jw.get<int>() < 1)
    fail(Err::ParseError, "'window' must be a positive integer");
  Potential f;
  f.window = jw.get<int>();
  if (!jt.is_object()) fail(Err::ParseError, "'table' must be an object");
  for (auto it = jt.begin(); it != jt.end(); ++it) {
    if (!it.value().is_number())
      fail(Err::ParseError, "table value for '" + it.key() + "' must be a number");
    Word w = parse_word(g, it.key());
    if (static_cast<int>(w.size()) != f.window)
      fail(Err::ParseError, "table key '" + it.key() + "' does not match the window");
    f.table[w] = it.value().get<double>();
  }
  try {
    validate_potential(g, f);
  } catch (const Error& err) {
    fail(Err::ValidationError, err.what());
  }
  return f;
}

}  // namespace

Sft parse_sft_text(const std::string& text) { return parse_sft_json(parse_json(text), false); }

SuspensionFlow parse_flow_text(const std::string& text) {
  json j = parse_json(text);
  Sft g = parse_sft_json(j, true);
  SuspensionFlow flow;
  flow.base = g;
  flow.roof = parse_potential_json(require(j, "roof", "flow model"), flow.base);
  try {
    validate_flow(flow);
  } catch (const Error& err) {
    if (err.code() == Err::NonpositiveRoof) throw;
    fail(Err::ValidationError, err.what());
  }
  return flow;
}

Potential parse_potential_text(const std::string& text, const Sft& g) {
  return parse_potential_json(parse_json(text), g);
}

FiberPotential parse_fiber_potential_text(const std::string& text, const Sft& g) {
  json j = parse_json(text);
  if (!j.is_array()) fail(Err::ParseError, "fiber potential must be a JSON array of terms");
  FiberPotential f;
  for (const auto& term : j) {
    if (!term.is_object()) fail(Err::ParseError, "fiber term must be an object");
    reject_unknown(term, {"degree", "potential"}, "fiber term");
    const json& jd = require(term, "degree", "fiber term");
    if (!jd.is_number_integer() || jd.get<int>() < 0)
      fail(Err::ParseError, "'degree' must be a nonnegative integer");
    f.terms.push_back(
        {jd.get<int>(), parse_potential_json(require(term, "potential", "fiber term"), g)});
  }
  return f;
}

BlockCode parse_code_text(const std::string& text, const Sft& source) {
  json j = parse_json(text);
  if (!j.is_object()) fail(Err::ParseError, "code must be a JSON object");
  reject_unknown(j, {"window", "map"}, "code");
  const json& jw = require(j, "window", "code");
  const json& jm = require(j, "map", "code");
  if (!jw.is_number_integer() || jw.get<int>() < 1)
    fail(Err::ParseError, "'window' must be a positive integer");
  if (!jm.is_object()) fail(Err::ParseError, "'map' must be an object");
  std::map<Word, std::string> table;
  for (auto it = jm.begin(); it != jm.end(); ++it) {
    if (!it.value().is_string())
      fail(Err::ParseError, "code image for '" + it.key() + "' must be a state name");
    table[parse_word(source, it.key())] = it.value().get<std::string>();
  }
  try {
    return make_block_code(source, jw.get<int>(), table);
  } catch (const Error& err) {
    if (err.code() == Err::ValidationError) throw;
    fail(Err::ValidationError, err.what());
  }
}

namespace {

FlowPoint parse_point_json(const json& j, const SuspensionFlow& flow) {
  if (!j.is_object()) fail(Err::ParseError, "point must be a JSON object");
  reject_unknown(j, {"past_cycle", "core", "future_cycle", "origin", "fiber"}, "point");
  SymbolicPoint x;
  x.past_cycle = parse_state_list(flow.base, require(j, "past_cycle", "point"), "past_cycle");
  if (auto it = j.find("core"); it != j.end())
    x.core = parse_state_list(flow.base, *it, "core");
  x.future_cycle =
      parse_state_list(flow.base, require(j, "future_cycle", "point"), "future_cycle");
  if (auto it = j.find("origin"); it != j.end()) {
    if (!it->is_number_integer()) fail(Err::ParseError, "'origin' must be an integer");
    x.origin_index = it->get<long>();
  }
  const json& jf = require(j, "fiber", "point");
  if (!jf.is_number()) fail(Err::ParseError, "'fiber' must be a number");
  FlowPoint p{x, jf.get<double>()};
  try {
    validate_flow_point(flow, p);
  } catch (const Error& err) {
    fail(Err::ValidationError, err.what());
  }
  return p;
}

}  // namespace

FlowPoint parse_point_text(const std::string& text, const SuspensionFlow& flow) {
  return parse_point_json(parse_json(text), flow);
}

PseudoOrbit parse_pseudo_orbit_text(const std::string& text, const SuspensionFlow& flow) {
  json j = parse_json(text);
  PseudoOrbit po;
  const json* entries = nullptr;
  bool bare_list = j.is_array();
  if (bare_list) {
    // Bare list of {point, duration}: delta and t_min are inferred below.
    entries = &j;
  } else if (j.is_object()) {
    reject_unknown(j, {"delta", "t_min", "periodic", "entries"}, "pseudo-orbit");
    po.delta = require(j, "delta", "pseudo-orbit").get<double>();
    po.t_min = require(j, "t_min", "pseudo-orbit").get<double>();
    if (auto it = j.find("periodic"); it != j.end()) po.periodic = it->get<bool>();
    entries = &require(j, "entries", "pseudo-orbit");
  } else {
    fail(Err::ParseError, "pseudo-orbit must be a JSON object or entry list");
  }
  if (!entries->is_array()) fail(Err::ParseError, "'entries' must be an array");
  for (const auto& e : *entries) {
    reject_unknown(e, {"point", "duration"}, "pseudo-orbit entry");
    PseudoOrbitEntry entry;
    entry.point = parse_point_json(require(e, "point", "entry"), flow);
    entry.duration = require(e, "duration", "entry").get<double>();
    po.entries.push_back(std::move(entry));
  }
  if (bare_list) {
    if (po.entries.empty()) fail(Err::ParseError, "pseudo-orbit list is empty");
    po.t_min = po.entries.front().duration;
    for (const auto& e : po.entries) po.t_min = std::min(po.t_min, e.duration);
    for (size_t k = 0; k + 1 < po.entries.size(); ++k) {
      FlowPoint land = flow_evaluate(flow, po.entries[k].point, po.entries[k].duration);
      po.delta = std::max(po.delta, flow_distance(flow, land, po.entries[k + 1].point));
    }
    po.delta = po.delta * (1.0 + 1e-12) + 1e-300;
  }
  try {
    validate_pseudo_orbit(flow, po);
  } catch (const Error& err) {
    fail(Err::ValidationError, err.what());
  }
  return po;
}

Model parse_model_text(const std::string& text) {
  json j = parse_json(text);
  if (j.is_object() && j.contains("roof")) return parse_flow_text(text);
  return parse_sft_text(text);
}

Model load_model(const std::string& path) { return parse_model_text(read_text_file(path)); }

namespace {

json sft_json(const Sft& g) {
  json j;
  j["states"] = g.states;
  json edges = json::array();
  for (auto [u, v] : g.edges) edges.push_back({g.states[u], g.states[v]});
  j["edges"] = edges;
  return j;
}

json potential_json(const Sft& g, const Potential& f) {
  json j;
  j["window"] = f.window;
  json table = json::object();
  for (const auto& [w, v] : f.table) table[word_to_string(g, w)] = v;
  j["table"] = table;
  return j;
}

}  // namespace

std::string serialize_sft(const Sft& g) { return sft_json(g).dump(2) + "\n"; }

std::string serialize_flow(const SuspensionFlow& flow) {
  json j = sft_json(flow.base);
  j["roof"] = potential_json(flow.base, flow.roof);
  return j.dump(2) + "\n";
}

std::string curve_csv(const std::vector<std::pair<double, double>>& curve) {
  std::string out = "q,pressure\n";
  for (auto [q, p] : curve) out += fmt12(q) + "," + fmt12(p) + "\n";
  return out;
}

std::string measure_csv(const Sft& g, const MarkovMeasure& m) {
  std::string out = "kind,from,to,value\n";
  for (int u = 0; u < m.state_count(); ++u)
    out += "stationary," + g.states[u] + ",," + fmt12(m.stationary[u]) + "\n";
  for (int u = 0; u < m.state_count(); ++u)
    for (auto [v, p] : m.transition[u])
      out += "transition," + g.states[u] + "," + g.states[v] + "," + fmt12(p) + "\n";
  return out;
}

std::string synchronization_report_text(const SynchronizationReport& rep) {
  std::string out;
  out += "pressure: " + fmt12(rep.pressure) + "\n";
  out += "horizon: " + fmt12(rep.horizon) + "\n";
  out += "window: " + std::to_string(rep.window) + "\n";
  out += "h_top_synchronized: " + fmt12(rep.h_top_synchronized) + "\n";
  out += "max_cylinder_discrepancy: " + fmt12(rep.max_cylinder_discrepancy) + "\n";
  out += "density_check_max_error: " + fmt12(rep.density_check_max_error) + "\n";
  out += std::string("passed: ") + (rep.passed ? "true" : "false") + "\n";
  return out;
}

std::string synchronization_report_csv(const SynchronizationReport& rep) {
  std::string out =
      "pressure,horizon,window,h_top_synchronized,max_cylinder_discrepancy,"
      "density_check_max_error,passed\n";
  out += fmt12(rep.pressure) + "," + fmt12(rep.horizon) + "," + std::to_string(rep.window) +
         "," + fmt12(rep.h_top_synchronized) + "," + fmt12(rep.max_cylinder_discrepancy) + "," +
         fmt12(rep.density_check_max_error) + "," + (rep.passed ? "1" : "0") + "\n";
  return out;
}

std::string trace_certificate_text(const TraceCertificate& cert) {
  std::string out;
  out += "metric: shift_distance + fiber_gap on canonical representatives\n";
  out += "epsilon: " + fmt12(cert.epsilon) + "\n";
  out += "max_distance: " + fmt12(cert.max_distance) + "\n";
  out += "breakpoints:\n";
  for (auto [s, rho] : cert.reparam_breakpoints)
    out += "  " + fmt12(s) + " -> " + fmt12(rho) + "\n";
  out += "slopes:";
  for (double s : cert.slopes) out += " " + fmt12(s);
  out += "\n";
  return out;
}

}  // namespace tmf
