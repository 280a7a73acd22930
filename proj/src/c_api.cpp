#include "thermoflow.h"

#include <cstring>
#include <string>

#include "thermoflow/io.hpp"
#include "thermoflow/tolerances.hpp"

using namespace tmf;

namespace {

thread_local std::string g_last_error;

tf_status status_of(Err e) {
  switch (e) {
    case Err::StrandedState: return TF_ERR_STRANDED_STATE;
    case Err::DuplicateState: return TF_ERR_DUPLICATE_STATE;
    case Err::NotIrreducible: return TF_ERR_NOT_IRREDUCIBLE;
    case Err::NotAperiodic: return TF_ERR_NOT_APERIODIC;
    case Err::WindowMismatch: return TF_ERR_WINDOW_MISMATCH;
    case Err::IncompatibleRecoding: return TF_ERR_INCOMPATIBLE_RECODING;
    case Err::NonpositiveDenominator: return TF_ERR_NONPOSITIVE_DENOMINATOR;
    case Err::EmptyShift: return TF_ERR_EMPTY_SHIFT;
    case Err::NonUniqueEquilibrium: return TF_ERR_NON_UNIQUE_EQUILIBRIUM;
    case Err::NonpositiveRoof: return TF_ERR_NONPOSITIVE_ROOF;
    case Err::NonpositiveRate: return TF_ERR_NONPOSITIVE_RATE;
    case Err::NotHyperbolicAtHorizon: return TF_ERR_NOT_HYPERBOLIC_AT_HORIZON;
    case Err::WindowExplosion: return TF_ERR_WINDOW_EXPLOSION;
    case Err::DeltaTooLarge: return TF_ERR_DELTA_TOO_LARGE;
    case Err::HorizonTooShort: return TF_ERR_HORIZON_TOO_SHORT;
    case Err::RoofNotFiberConstant: return TF_ERR_ROOF_NOT_FIBER_CONSTANT;
    case Err::NotFiniteToOne: return TF_ERR_NOT_FINITE_TO_ONE;
    case Err::ParseError: return TF_ERR_PARSE;
    case Err::ValidationError: return TF_ERR_VALIDATION;
    case Err::ToleranceFailure: return TF_ERR_TOLERANCE;
  }
  return TF_ERR_INTERNAL;
}

template <typename Fn>
tf_status guard(Fn&& fn) {
  try {
    fn();
    return TF_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return TF_ERR_INTERNAL;
  }
}

}  // namespace

struct tf_model {
  Model model;
  const Sft& base() const {
    if (auto* g = std::get_if<Sft>(&model)) return *g;
    return std::get<SuspensionFlow>(model).base;
  }
  const SuspensionFlow& flow() const {
    if (auto* f = std::get_if<SuspensionFlow>(&model)) return *f;
    fail(Err::ValidationError, "model has no roof: a suspension flow is required");
  }
};

struct tf_potential {
  Potential f;
};
struct tf_fiber_potential {
  FiberPotential f;
};
struct tf_code {
  BlockCode code;
};
struct tf_measure {
  Sft graph;  // ambient state names for emission
  MarkovMeasure m;
};

extern "C" {

const char* tf_status_name(tf_status s) {
  switch (s) {
    case TF_OK: return "OK";
    case TF_ERR_STRANDED_STATE: return "StrandedState";
    case TF_ERR_DUPLICATE_STATE: return "DuplicateState";
    case TF_ERR_NOT_IRREDUCIBLE: return "NotIrreducible";
    case TF_ERR_NOT_APERIODIC: return "NotAperiodic";
    case TF_ERR_WINDOW_MISMATCH: return "WindowMismatch";
    case TF_ERR_INCOMPATIBLE_RECODING: return "IncompatibleRecoding";
    case TF_ERR_NONPOSITIVE_DENOMINATOR: return "NonpositiveDenominator";
    case TF_ERR_EMPTY_SHIFT: return "EmptyShift";
    case TF_ERR_NON_UNIQUE_EQUILIBRIUM: return "NonUniqueEquilibrium";
    case TF_ERR_NONPOSITIVE_ROOF: return "NonpositiveRoof";
    case TF_ERR_NONPOSITIVE_RATE: return "NonpositiveRate";
    case TF_ERR_NOT_HYPERBOLIC_AT_HORIZON: return "NotHyperbolicAtHorizon";
    case TF_ERR_WINDOW_EXPLOSION: return "WindowExplosion";
    case TF_ERR_DELTA_TOO_LARGE: return "DeltaTooLarge";
    case TF_ERR_HORIZON_TOO_SHORT: return "HorizonTooShort";
    case TF_ERR_ROOF_NOT_FIBER_CONSTANT: return "RoofNotFiberConstant";
    case TF_ERR_NOT_FINITE_TO_ONE: return "NotFiniteToOne";
    case TF_ERR_PARSE: return "ParseError";
    case TF_ERR_VALIDATION: return "ValidationError";
    case TF_ERR_TOLERANCE: return "ToleranceFailure";
    case TF_ERR_INTERNAL: return "InternalError";
  }
  return "UnknownStatus";
}

int tf_exit_code(tf_status s) {
  if (s == TF_OK) return 0;
  return s == TF_ERR_TOLERANCE ? 2 : 1;
}

const char* tf_last_error(void) { return g_last_error.c_str(); }

const char* tf_format12(double v, char* buf, unsigned long buflen) {
  std::string s = fmt12(v);
  std::snprintf(buf, buflen, "%s", s.c_str());
  return buf;
}

tf_status tf_tol_apply_spec(const char* spec) {
  return guard([&] { tol_apply_spec(spec ? spec : ""); });
}

tf_status tf_tol_set(const char* key, double value) {
  return guard([&] { tol_set(key ? key : "", value); });
}

void tf_tol_reset(void) { tol_reset(); }

tf_status tf_model_load(const char* path, tf_model** out) {
  return guard([&] { *out = new tf_model{load_model(path)}; });
}

tf_status tf_model_parse(const char* text, tf_model** out) {
  return guard([&] { *out = new tf_model{parse_model_text(text)}; });
}

int tf_model_is_flow(const tf_model* m) {
  return std::holds_alternative<SuspensionFlow>(m->model) ? 1 : 0;
}

int tf_model_state_count(const tf_model* m) { return m->base().state_count(); }

void tf_model_free(tf_model* m) { delete m; }

tf_status tf_potential_load(const char* path, const tf_model* m, tf_potential** out) {
  return guard([&] {
    *out = new tf_potential{parse_potential_text(read_text_file(path), m->base())};
  });
}

void tf_potential_free(tf_potential* f) { delete f; }

tf_status tf_fiber_potential_load(const char* path, const tf_model* m,
                                  tf_fiber_potential** out) {
  return guard([&] {
    *out = new tf_fiber_potential{parse_fiber_potential_text(read_text_file(path), m->base())};
  });
}

void tf_fiber_potential_free(tf_fiber_potential* f) { delete f; }

tf_status tf_code_load(const char* path, const tf_model* source, tf_code** out) {
  return guard([&] {
    *out = new tf_code{parse_code_text(read_text_file(path), source->base())};
  });
}

void tf_code_free(tf_code* c) { delete c; }
void tf_measure_free(tf_measure* m) { delete m; }

tf_status tf_pressure(const tf_model* m, const tf_potential* f, double q, double* out,
                      const char* out_path) {
  return guard([&] {
    double p = pressure(m->base(), scale(f->f, q));
    if (out) *out = p;
    if (out_path) write_text_file(out_path, "pressure\n" + fmt12(p) + "\n");
  });
}

tf_status tf_equilibrium(const tf_model* m, const tf_potential* f, double q,
                         tf_measure** out, const char* csv_path) {
  return guard([&] {
    MarkovMeasure eq = equilibrium_measure(m->base(), scale(f->f, q));
    if (csv_path) write_text_file(csv_path, measure_csv(m->base(), eq));
    if (out) *out = new tf_measure{m->base(), std::move(eq)};
  });
}

tf_status tf_measure_entropy(const tf_measure* m, double* out) {
  return guard([&] { *out = entropy(m->m); });
}

tf_status tf_measure_stationary(const tf_measure* m, int state, double* out) {
  return guard([&] {
    if (state < 0 || state >= m->m.state_count())
      fail(Err::ValidationError, "state index out of range");
    *out = m->m.stationary[state];
  });
}

tf_status tf_phase_curve(const tf_model* m, const tf_potential* f, double q_min,
                         double q_max, int steps, const char* csv_path) {
  return guard([&] {
    if (steps < 2) fail(Err::ValidationError, "steps must be >= 2");
    std::vector<double> grid;
    for (int i = 0; i < steps; ++i)
      grid.push_back(q_min + (q_max - q_min) * i / (steps - 1));
    auto curve = pressure_curve(m->base(), f->f, grid);
    if (csv_path) write_text_file(csv_path, curve_csv(curve));
  });
}

tf_status tf_flow_pressure(const tf_model* m, const tf_fiber_potential* f, double* out,
                           const char* out_path) {
  return guard([&] {
    double p = flow_pressure(m->flow(), f ? f->f : FiberPotential::zero());
    if (out) *out = p;
    if (out_path) write_text_file(out_path, "flow_pressure\n" + fmt12(p) + "\n");
  });
}

tf_status tf_flow_mme(const tf_model* m, double* h_top, tf_measure** base,
                      const char* csv_path) {
  return guard([&] {
    auto [h, mme] = flow_mme(m->flow());
    if (h_top) *h_top = h;
    if (csv_path)
      write_text_file(csv_path, "h_top\n" + fmt12(h) + "\n" +
                                    measure_csv(m->flow().base, mme.base_measure));
    if (base) *base = new tf_measure{m->flow().base, std::move(mme.base_measure)};
  });
}

tf_status tf_hyperbolic(const tf_model* m, const tf_fiber_potential* f,
                        tf_hyperbolic_report* rep, const char* report_path) {
  return guard([&] {
    HyperbolicityReport r = is_hyperbolic(m->flow(), f ? f->f : FiberPotential::zero());
    if (rep) {
      rep->hyperbolic = r.hyperbolic ? 1 : 0;
      rep->pressure = r.pressure;
      rep->max_flow_average = r.max_flow_average;
      rep->equilibrium_entropy = r.equilibrium_entropy;
    }
    if (report_path) {
      std::string out;
      out += std::string("hyperbolic: ") + (r.hyperbolic ? "true" : "false") + "\n";
      out += "pressure: " + fmt12(r.pressure) + "\n";
      out += "max_flow_average: " + fmt12(r.max_flow_average) + "\n";
      out += "equilibrium_entropy: " + fmt12(r.equilibrium_entropy) + "\n";
      out += "witness_cycle: " + word_to_string(m->flow().base, r.witness_cycle) + "\n";
      write_text_file(report_path, out);
    }
  });
}

tf_status tf_synchronize(const tf_model* m, const tf_fiber_potential* f, double t_horizon,
                         int* window, double* pressure_out, const char* flow_out_path) {
  return guard([&] {
    SynchronizationResult res =
        synchronize(m->flow(), f ? f->f : FiberPotential::zero(), t_horizon);
    if (window) *window = res.spec.window;
    if (pressure_out) *pressure_out = res.spec.pressure_const;
    if (flow_out_path) write_text_file(flow_out_path, serialize_flow(res.synchronized));
  });
}

tf_status tf_verify_synchronization(const tf_model* m, const tf_fiber_potential* f,
                              double t_horizon, tf_synchronization_report* rep,
                              const char* report_path) {
  return guard([&] {
    SynchronizationReport r = verify_synchronization(m->flow(), f ? f->f : FiberPotential::zero(), t_horizon);
    if (rep) {
      rep->pressure = r.pressure;
      rep->horizon = r.horizon;
      rep->window = r.window;
      rep->h_top_synchronized = r.h_top_synchronized;
      rep->max_cylinder_discrepancy = r.max_cylinder_discrepancy;
      rep->density_check_max_error = r.density_check_max_error;
      rep->passed = r.passed ? 1 : 0;
    }
    if (report_path) {
      std::string path = report_path;
      bool csv = path.size() >= 4 && path.substr(path.size() - 4) == ".csv";
      write_text_file(path, csv ? synchronization_report_csv(r) : synchronization_report_text(r));
    }
    if (!r.passed)
      fail(Err::ToleranceFailure, "synchronization checks exceeded their bounds");
  });
}

tf_status tf_dichotomy(const tf_model* m, tf_dichotomy_result* out,
                       const char* report_path) {
  return guard([&] {
    DichotomyResult r = suspension_dichotomy(m->flow());
    if (out) {
      out->constant_suspension = r.constant_suspension ? 1 : 0;
      out->c = r.c;
    }
    if (report_path) {
      std::string text = r.constant_suspension
                             ? "verdict: ConstantSuspension\nc: " + fmt12(r.c) + "\n"
                             : "verdict: Mixing\n";
      write_text_file(report_path, text);
    }
  });
}

tf_status tf_shadow(const tf_model* m, const char* pseudo_orbit_path, double epsilon,
                    double* max_distance, const char* report_path) {
  return guard([&] {
    PseudoOrbit po = parse_pseudo_orbit_text(read_text_file(pseudo_orbit_path), m->flow());
    TraceCertificate cert = shadow(m->flow(), po, epsilon);
    if (max_distance) *max_distance = cert.max_distance;
    if (report_path) write_text_file(report_path, trace_certificate_text(cert));
  });
}

tf_status tf_close_orbit(const tf_model* m, const char* point_path, double t,
                         double epsilon, double* period, double* max_distance,
                         const char* report_path) {
  return guard([&] {
    FlowPoint p = parse_point_text(read_text_file(point_path), m->flow());
    CloseResult res = close_periodic(m->flow(), p, t, epsilon);
    if (period) *period = res.period;
    if (max_distance) *max_distance = res.max_distance;
    if (report_path) {
      std::string out;
      out += "period: " + fmt12(res.period) + "\n";
      out += "max_distance: " + fmt12(res.max_distance) + "\n";
      out += "cycle: " +
             word_to_string(m->flow().base, res.periodic_point.base_point.future_cycle) + "\n";
      write_text_file(report_path, out);
    }
  });
}

tf_status tf_factor_check(const tf_model* source_flow, const tf_code* code,
                          const tf_fiber_potential* f_target, tf_factor_report* rep,
                          const char* report_path) {
  return guard([&] {
    FiniteToOneReport ft = check_finite_to_one(code->code);
    tf_factor_report local{};
    local.finite_to_one = ft.finite_to_one ? 1 : 0;
    local.has_degree = ft.degree.has_value() ? 1 : 0;
    local.degree = ft.degree.value_or(0);
    std::string text;
    text += std::string("finite_to_one: ") + (ft.finite_to_one ? "true" : "false") + "\n";
    if (ft.degree)
      text += "degree: " + std::to_string(*ft.degree) + "\n";
    if (ft.finite_to_one) {
      FiberPotential f = f_target ? f_target->f
                                  : FiberPotential::zero();
      PressurePreservationReport pr =
          pressure_preservation(code->code, source_flow->flow(), f);
      local.pressure_source = pr.pressure_source;
      local.pressure_target = pr.pressure_target;
      local.max_cylinder_discrepancy = pr.max_cylinder_discrepancy;
      local.passed = pr.passed ? 1 : 0;
      text += "pressure_source: " + fmt12(pr.pressure_source) + "\n";
      text += "pressure_target: " + fmt12(pr.pressure_target) + "\n";
      text += "max_cylinder_discrepancy: " + fmt12(pr.max_cylinder_discrepancy) + "\n";
      text += std::string("passed: ") + (pr.passed ? "true" : "false") + "\n";
    }
    if (rep) *rep = local;
    if (report_path) write_text_file(report_path, text);
    if (!ft.finite_to_one)
      fail(Err::NotFiniteToOne, "the code has a diamond");
    if (!local.passed)
      fail(Err::ToleranceFailure, "factor transport checks exceeded their bounds");
  });
}

}  // extern "C"
