#include "thermoflow/tolerances.hpp"

#include <cstdlib>
#include <sstream>

#include "thermoflow/errors.hpp"

namespace tmf {

namespace {

Tolerances g_tol;
bool g_env_applied = false;

void set_field(Tolerances& t, const std::string& key, double value) {
  if (key == "eig_iter_diff") t.eig_iter_diff = value;
  else if (key == "eig_iter_cap") t.eig_iter_cap = static_cast<long>(value);
  else if (key == "eig_residual") t.eig_residual = value;
  else if (key == "pressure_abs") t.pressure_abs = value;
  else if (key == "bowen_root") t.bowen_root = value;
  else if (key == "bowen_residual") t.bowen_residual = value;
  else if (key == "ratio_cycle") t.ratio_cycle = value;
  else if (key == "mean_cycle_witness") t.mean_cycle_witness = value;
  else if (key == "policy_improve") t.policy_improve = value;
  else if (key == "cohomology") t.cohomology = value;
  else if (key == "segment_abs") t.segment_abs = value;
  else if (key == "fiber_invert") t.fiber_invert = value;
  else if (key == "measure_residual") t.measure_residual = value;
  else if (key == "component_tie") t.component_tie = value;
  else if (key == "sync_entropy") t.sync_entropy = value;
  else if (key == "cylinder_match") t.cylinder_match = value;
  else if (key == "density_check") t.density_check = value;
  else if (key == "factor_pressure") t.factor_pressure = value;
  else if (key == "window_explosion") t.window_explosion = static_cast<int>(value);
  else fail(Err::ValidationError, "unknown tolerance key '" + key + "'");
}

void apply_spec(Tolerances& t, const std::string& spec) {
  if (spec.empty()) return;
  if (spec.find('=') == std::string::npos) {
    char* end = nullptr;
    double v = std::strtod(spec.c_str(), &end);
    if (end == spec.c_str() || *end != '\0')
      fail(Err::ValidationError, "cannot parse tolerance value '" + spec + "'");
    t.bowen_residual = v;
    return;
  }
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos)
      fail(Err::ValidationError, "tolerance entry '" + item + "' is not key=value");
    std::string key = item.substr(0, eq);
    std::string val = item.substr(eq + 1);
    char* end = nullptr;
    double v = std::strtod(val.c_str(), &end);
    if (end == val.c_str() || *end != '\0')
      fail(Err::ValidationError, "cannot parse tolerance value '" + val + "'");
    set_field(t, key, v);
  }
}

}  // namespace

Tolerances& tol() {
  if (!g_env_applied) {
    g_env_applied = true;
    if (const char* env = std::getenv("THERMOFLOW_TOL")) apply_spec(g_tol, env);
  }
  return g_tol;
}

void tol_set(const std::string& key, double value) { set_field(tol(), key, value); }

void tol_reset() {
  g_tol = Tolerances{};
  if (const char* env = std::getenv("THERMOFLOW_TOL")) apply_spec(g_tol, env);
}

void tol_apply_spec(const std::string& spec) { apply_spec(tol(), spec); }

}  // namespace tmf
