/* C interface to the thermoflow library: opaque handles, status codes, and
 * artifact emission. All functions returning tf_status leave a message for
 * the last failure in tf_last_error(). */
#ifndef THERMOFLOW_H
#define THERMOFLOW_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tf_status {
  TF_OK = 0,
  TF_ERR_STRANDED_STATE,
  TF_ERR_DUPLICATE_STATE,
  TF_ERR_NOT_IRREDUCIBLE,
  TF_ERR_NOT_APERIODIC,
  TF_ERR_WINDOW_MISMATCH,
  TF_ERR_INCOMPATIBLE_RECODING,
  TF_ERR_NONPOSITIVE_DENOMINATOR,
  TF_ERR_EMPTY_SHIFT,
  TF_ERR_NON_UNIQUE_EQUILIBRIUM,
  TF_ERR_NONPOSITIVE_ROOF,
  TF_ERR_NONPOSITIVE_RATE,
  TF_ERR_NOT_HYPERBOLIC_AT_HORIZON,
  TF_ERR_WINDOW_EXPLOSION,
  TF_ERR_DELTA_TOO_LARGE,
  TF_ERR_HORIZON_TOO_SHORT,
  TF_ERR_ROOF_NOT_FIBER_CONSTANT,
  TF_ERR_NOT_FINITE_TO_ONE,
  TF_ERR_PARSE,
  TF_ERR_VALIDATION,
  TF_ERR_TOLERANCE,
  TF_ERR_INTERNAL
} tf_status;

const char* tf_status_name(tf_status s);
/* 0 for TF_OK, 2 for TF_ERR_TOLERANCE, 1 otherwise. */
int tf_exit_code(tf_status s);
/* Message of the most recent failure on this thread. */
const char* tf_last_error(void);

/* 12-significant-digit formatting used by every artifact. Returns buf. */
const char* tf_format12(double v, char* buf, unsigned long buflen);

/* Tolerance record: a bare double spec overrides the internal-check gate,
 * "key=value,key=value" sets named fields. */
tf_status tf_tol_apply_spec(const char* spec);
tf_status tf_tol_set(const char* key, double value);
void tf_tol_reset(void);

/* Opaque handles. */
typedef struct tf_model tf_model;                    /* shift or suspension flow */
typedef struct tf_potential tf_potential;            /* locally constant function */
typedef struct tf_fiber_potential tf_fiber_potential;
typedef struct tf_code tf_code;                      /* sliding block code */
typedef struct tf_measure tf_measure;                /* Markov measure */

tf_status tf_model_load(const char* path, tf_model** out);
tf_status tf_model_parse(const char* text, tf_model** out);
int tf_model_is_flow(const tf_model* m);
int tf_model_state_count(const tf_model* m);
void tf_model_free(tf_model* m);

tf_status tf_potential_load(const char* path, const tf_model* m, tf_potential** out);
void tf_potential_free(tf_potential* f);
tf_status tf_fiber_potential_load(const char* path, const tf_model* m,
                                  tf_fiber_potential** out);
void tf_fiber_potential_free(tf_fiber_potential* f);
tf_status tf_code_load(const char* path, const tf_model* source, tf_code** out);
void tf_code_free(tf_code* c);
void tf_measure_free(tf_measure* m);

/* Base-shift thermodynamics. The potential is scaled by q. Artifact paths may
 * be NULL to skip emission. */
tf_status tf_pressure(const tf_model* m, const tf_potential* f, double q, double* out,
                      const char* out_path);
tf_status tf_equilibrium(const tf_model* m, const tf_potential* f, double q,
                         tf_measure** out, const char* csv_path);
tf_status tf_measure_entropy(const tf_measure* m, double* out);
tf_status tf_measure_stationary(const tf_measure* m, int state, double* out);
tf_status tf_phase_curve(const tf_model* m, const tf_potential* f, double q_min,
                         double q_max, int steps, const char* csv_path);

/* Suspension flows. */
tf_status tf_flow_pressure(const tf_model* m, const tf_fiber_potential* f, double* out,
                           const char* out_path);
tf_status tf_flow_mme(const tf_model* m, double* h_top, tf_measure** base,
                      const char* csv_path);

typedef struct tf_hyperbolic_report {
  int hyperbolic;
  double pressure;
  double max_flow_average;
  double equilibrium_entropy;
} tf_hyperbolic_report;
tf_status tf_hyperbolic(const tf_model* m, const tf_fiber_potential* f,
                        tf_hyperbolic_report* rep, const char* report_path);

/* Writes the synchronized flow model (reusable as a model file). */
tf_status tf_synchronize(const tf_model* m, const tf_fiber_potential* f, double t_horizon,
                         int* window, double* pressure, const char* flow_out_path);

typedef struct tf_synchronization_report {
  double pressure;
  double horizon;
  int window;
  double h_top_synchronized;
  double max_cylinder_discrepancy;
  double density_check_max_error;
  int passed;
} tf_synchronization_report;
/* report_path ending in .csv emits the batch CSV row form. Returns
 * TF_ERR_TOLERANCE when a check exceeds its bound. */
tf_status tf_verify_synchronization(const tf_model* m, const tf_fiber_potential* f,
                              double t_horizon, tf_synchronization_report* rep,
                              const char* report_path);

typedef struct tf_dichotomy_result {
  int constant_suspension;
  double c;
} tf_dichotomy_result;
tf_status tf_dichotomy(const tf_model* m, tf_dichotomy_result* out,
                       const char* report_path);

/* Shadowing and closing. */
tf_status tf_shadow(const tf_model* m, const char* pseudo_orbit_path, double epsilon,
                    double* max_distance, const char* report_path);
tf_status tf_close_orbit(const tf_model* m, const char* point_path, double t,
                         double epsilon, double* period, double* max_distance,
                         const char* report_path);

/* Factor checks. f_target may be NULL (constant zero potential). */
typedef struct tf_factor_report {
  int finite_to_one;
  int has_degree;
  int degree;
  double pressure_source;
  double pressure_target;
  double max_cylinder_discrepancy;
  int passed;
} tf_factor_report;
tf_status tf_factor_check(const tf_model* source_flow, const tf_code* code,
                          const tf_fiber_potential* f_target, tf_factor_report* rep,
                          const char* report_path);

#ifdef __cplusplus
}
#endif

#endif /* THERMOFLOW_H */
