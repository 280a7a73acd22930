#pragma once

#include <string>
#include <variant>

#include "thermoflow/factors.hpp"
#include "thermoflow/shadowing.hpp"
#include "thermoflow/suspension.hpp"
#include "thermoflow/timechange.hpp"

namespace tmf {

// 12 significant digits, deterministic.
std::string fmt12(double v);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// Model text formats (JSON; unknown fields rejected):
//   Sft:            {"states": [...], "edges": [[from,to], ...]}
//   flow model:     the Sft object plus "roof": {"window": k, "table": {...}}
//   potential:      {"window": k, "table": {"w1 w2 ... wk": value, ...}}
//   fiber potential:[{"degree": d, "potential": {...}}, ...]
//   block code:     {"window": k, "map": {"w1 ... wk": target_state}}
//   flow point:     {"past_cycle": [...], "core": [...], "future_cycle": [...],
//                    "origin": i, "fiber": s}
//   pseudo-orbit:   {"delta": d, "t_min": t, "periodic": bool,
//                    "entries": [{"point": {...}, "duration": tau}, ...]}
Sft parse_sft_text(const std::string& text);
SuspensionFlow parse_flow_text(const std::string& text);
Potential parse_potential_text(const std::string& text, const Sft& g);
FiberPotential parse_fiber_potential_text(const std::string& text, const Sft& g);
BlockCode parse_code_text(const std::string& text, const Sft& source);
FlowPoint parse_point_text(const std::string& text, const SuspensionFlow& flow);
PseudoOrbit parse_pseudo_orbit_text(const std::string& text, const SuspensionFlow& flow);

// A model file holds either a bare shift or a suspension flow.
using Model = std::variant<Sft, SuspensionFlow>;
Model parse_model_text(const std::string& text);
Model load_model(const std::string& path);

std::string serialize_flow(const SuspensionFlow& flow);
std::string serialize_sft(const Sft& g);

// Artifact emission.
std::string curve_csv(const std::vector<std::pair<double, double>>& curve);
std::string measure_csv(const Sft& g, const MarkovMeasure& m);
std::string synchronization_report_text(const SynchronizationReport& rep);
std::string synchronization_report_csv(const SynchronizationReport& rep);
std::string trace_certificate_text(const TraceCertificate& cert);

}  // namespace tmf
