// Command-line front end; drives the library through the C API only.
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "thermoflow.h"

namespace {

struct ModelDeleter {
  void operator()(tf_model* m) const { tf_model_free(m); }
};
struct PotentialDeleter {
  void operator()(tf_potential* p) const { tf_potential_free(p); }
};
struct FiberDeleter {
  void operator()(tf_fiber_potential* p) const { tf_fiber_potential_free(p); }
};
struct CodeDeleter {
  void operator()(tf_code* c) const { tf_code_free(c); }
};
struct MeasureDeleter {
  void operator()(tf_measure* m) const { tf_measure_free(m); }
};

using ModelPtr = std::unique_ptr<tf_model, ModelDeleter>;
using PotentialPtr = std::unique_ptr<tf_potential, PotentialDeleter>;
using FiberPtr = std::unique_ptr<tf_fiber_potential, FiberDeleter>;
using CodePtr = std::unique_ptr<tf_code, CodeDeleter>;
using MeasurePtr = std::unique_ptr<tf_measure, MeasureDeleter>;

int fail_with(tf_status s) {
  std::fprintf(stderr, "error: %s: %s\n", tf_status_name(s), tf_last_error());
  return tf_exit_code(s);
}

std::string fmt(double v) {
  char buf[64];
  tf_format12(v, buf, sizeof(buf));
  return buf;
}

struct Options {
  std::string command;
  std::string model_path;
  std::string potential_path;
  std::string code_path;
  std::string orbit_path;
  std::string point_path;
  std::string output_path;
  double q = 1.0;
  double t_horizon = 1.0;
  double epsilon = 0.1;
  double q_min = 0.0;
  double q_max = 2.0;
  int steps = 41;
  int max_len = 0;  // reserved
  std::vector<std::string> tol;
};

int run(const Options& opt) {
  for (const std::string& spec : opt.tol) {
    tf_status s = tf_tol_apply_spec(spec.c_str());
    if (s != TF_OK) return fail_with(s);
  }

  tf_model* raw_model = nullptr;
  tf_status s = tf_model_load(opt.model_path.c_str(), &raw_model);
  if (s != TF_OK) return fail_with(s);
  ModelPtr model(raw_model);

  auto load_potential = [&](PotentialPtr& out) {
    tf_potential* p = nullptr;
    tf_status st = tf_potential_load(opt.potential_path.c_str(), model.get(), &p);
    out.reset(p);
    return st;
  };
  auto load_fiber = [&](FiberPtr& out) {
    if (opt.potential_path.empty()) return TF_OK;  // zero potential
    tf_fiber_potential* p = nullptr;
    tf_status st = tf_fiber_potential_load(opt.potential_path.c_str(), model.get(), &p);
    out.reset(p);
    return st;
  };
  std::string out_path = opt.output_path;
  auto default_out = [&](const char* name) {
    if (out_path.empty()) out_path = name;
  };

  const std::string& cmd = opt.command;
  if (cmd == "pressure") {
    PotentialPtr f;
    if ((s = load_potential(f)) != TF_OK) return fail_with(s);
    default_out("pressure.csv");
    double v = 0.0;
    if ((s = tf_pressure(model.get(), f.get(), opt.q, &v, out_path.c_str())) != TF_OK)
      return fail_with(s);
    std::printf("%s\n", fmt(v).c_str());
  } else if (cmd == "equilibrium") {
    PotentialPtr f;
    if ((s = load_potential(f)) != TF_OK) return fail_with(s);
    default_out("equilibrium.csv");
    tf_measure* raw = nullptr;
    if ((s = tf_equilibrium(model.get(), f.get(), opt.q, &raw, out_path.c_str())) != TF_OK)
      return fail_with(s);
    MeasurePtr eq(raw);
    double h = 0.0;
    if ((s = tf_measure_entropy(eq.get(), &h)) != TF_OK) return fail_with(s);
    std::printf("entropy %s\n", fmt(h).c_str());
  } else if (cmd == "flow-pressure") {
    FiberPtr f;
    if ((s = load_fiber(f)) != TF_OK) return fail_with(s);
    default_out("flow-pressure.csv");
    double v = 0.0;
    if ((s = tf_flow_pressure(model.get(), f.get(), &v, out_path.c_str())) != TF_OK)
      return fail_with(s);
    std::printf("%s\n", fmt(v).c_str());
  } else if (cmd == "mme") {
    default_out("mme.csv");
    double h = 0.0;
    if ((s = tf_flow_mme(model.get(), &h, nullptr, out_path.c_str())) != TF_OK)
      return fail_with(s);
    std::printf("%s\n", fmt(h).c_str());
  } else if (cmd == "synchronize") {
    FiberPtr f;
    if ((s = load_fiber(f)) != TF_OK) return fail_with(s);
    default_out("synchronize.json");
    int window = 0;
    double p = 0.0;
    if ((s = tf_synchronize(model.get(), f.get(), opt.t_horizon, &window, &p,
                            out_path.c_str())) != TF_OK)
      return fail_with(s);
    std::printf("pressure %s window %d\n", fmt(p).c_str(), window);
  } else if (cmd == "verify-b") {
    FiberPtr f;
    if ((s = load_fiber(f)) != TF_OK) return fail_with(s);
    default_out("verify-b.txt");
    tf_synchronization_report rep{};
    s = tf_verify_synchronization(model.get(), f.get(), opt.t_horizon, &rep, out_path.c_str());
    if (s != TF_OK && s != TF_ERR_TOLERANCE) return fail_with(s);
    std::printf("h_top_synchronized %s %s\n", fmt(rep.h_top_synchronized).c_str(),
                rep.passed ? "pass" : "FAIL");
    if (s != TF_OK) return fail_with(s);
  } else if (cmd == "hyperbolic") {
    FiberPtr f;
    if ((s = load_fiber(f)) != TF_OK) return fail_with(s);
    default_out("hyperbolic.txt");
    tf_hyperbolic_report rep{};
    if ((s = tf_hyperbolic(model.get(), f.get(), &rep, out_path.c_str())) != TF_OK)
      return fail_with(s);
    std::printf("%s P %s M %s\n", rep.hyperbolic ? "hyperbolic" : "not-hyperbolic",
                fmt(rep.pressure).c_str(), fmt(rep.max_flow_average).c_str());
  } else if (cmd == "phase-curve") {
    PotentialPtr f;
    if ((s = load_potential(f)) != TF_OK) return fail_with(s);
    default_out("phase-curve.csv");
    if ((s = tf_phase_curve(model.get(), f.get(), opt.q_min, opt.q_max, opt.steps,
                            out_path.c_str())) != TF_OK)
      return fail_with(s);
    std::printf("wrote %s\n", out_path.c_str());
  } else if (cmd == "shadow") {
    default_out("shadow.txt");
    double maxd = 0.0;
    if ((s = tf_shadow(model.get(), opt.orbit_path.c_str(), opt.epsilon, &maxd,
                       out_path.c_str())) != TF_OK)
      return fail_with(s);
    std::printf("max_distance %s\n", fmt(maxd).c_str());
  } else if (cmd == "close") {
    default_out("close.txt");
    double period = 0.0, maxd = 0.0;
    if ((s = tf_close_orbit(model.get(), opt.point_path.c_str(), opt.t_horizon, opt.epsilon,
                            &period, &maxd, out_path.c_str())) != TF_OK)
      return fail_with(s);
    std::printf("period %s max_distance %s\n", fmt(period).c_str(), fmt(maxd).c_str());
  } else if (cmd == "dichotomy") {
    default_out("dichotomy.txt");
    tf_dichotomy_result res{};
    if ((s = tf_dichotomy(model.get(), &res, out_path.c_str())) != TF_OK)
      return fail_with(s);
    if (res.constant_suspension)
      std::printf("ConstantSuspension %s\n", fmt(res.c).c_str());
    else
      std::printf("Mixing\n");
  } else if (cmd == "factor-check") {
    CodePtr code;
    tf_code* raw_code = nullptr;
    if ((s = tf_code_load(opt.code_path.c_str(), model.get(), &raw_code)) != TF_OK)
      return fail_with(s);
    code.reset(raw_code);
    FiberPtr f;
    if ((s = load_fiber(f)) != TF_OK) return fail_with(s);
    default_out("factor-check.txt");
    tf_factor_report rep{};
    s = tf_factor_check(model.get(), code.get(), f.get(), &rep, out_path.c_str());
    if (rep.finite_to_one)
      std::printf("finite-to-one degree %d %s\n", rep.degree, rep.passed ? "pass" : "FAIL");
    else
      std::printf("not finite-to-one\n");
    if (s != TF_OK) return fail_with(s);
  } else {
    std::fprintf(stderr, "error: unknown command '%s'\n", cmd.c_str());
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"thermodynamic formalism on finite symbolic models"};
  app.require_subcommand(1);

  Options opt;
  auto add_common = [&](CLI::App* sub, bool needs_potential) {
    sub->add_option("--model", opt.model_path, "model file (shift or suspension flow)")
        ->required();
    if (needs_potential)
      sub->add_option("--potential", opt.potential_path, "potential file");
    sub->add_option("--output", opt.output_path, "artifact file path");
    sub->add_option("--tol", opt.tol, "tolerance override (key=value or bare double)");
  };

  CLI::App* pressure = app.add_subcommand("pressure", "P_top(sigma, q f) on the base shift");
  add_common(pressure, true);
  pressure->get_option("--potential")->required();
  pressure->add_option("--q", opt.q, "scale factor for the potential");

  CLI::App* equilibrium = app.add_subcommand("equilibrium", "equilibrium Markov measure");
  add_common(equilibrium, true);
  equilibrium->get_option("--potential")->required();
  equilibrium->add_option("--q", opt.q, "scale factor for the potential");

  CLI::App* flowp = app.add_subcommand("flow-pressure", "Bowen-equation flow pressure");
  add_common(flowp, true);

  CLI::App* mme = app.add_subcommand("mme", "topological entropy and its measure");
  add_common(mme, false);

  CLI::App* sync = app.add_subcommand("synchronize", "synchronizing time-change");
  add_common(sync, true);
  sync->add_option("--t_horizon", opt.t_horizon, "horizon t in the rate definition");

  CLI::App* verify = app.add_subcommand("verify-b", "synchronization verification report");
  add_common(verify, true);
  verify->add_option("--t_horizon", opt.t_horizon, "horizon t in the rate definition");

  CLI::App* hyp = app.add_subcommand("hyperbolic", "hyperbolic-potential test");
  add_common(hyp, true);

  CLI::App* curve = app.add_subcommand("phase-curve", "pressure along q grid");
  add_common(curve, true);
  curve->get_option("--potential")->required();
  curve->add_option("--q_min", opt.q_min, "grid start");
  curve->add_option("--q_max", opt.q_max, "grid end");
  curve->add_option("--steps", opt.steps, "grid size (>= 2)");

  CLI::App* shadow = app.add_subcommand("shadow", "trace a pseudo-orbit");
  add_common(shadow, false);
  shadow->add_option("--orbit", opt.orbit_path, "pseudo-orbit file")->required();
  shadow->add_option("--epsilon", opt.epsilon, "tracing bound");

  CLI::App* close = app.add_subcommand("close", "close an almost-periodic orbit");
  add_common(close, false);
  close->add_option("--point", opt.point_path, "flow point file")->required();
  close->add_option("--t_horizon", opt.t_horizon, "return time t");
  close->add_option("--epsilon", opt.epsilon, "closing bound");

  CLI::App* dich = app.add_subcommand("dichotomy", "mixing vs constant suspension");
  add_common(dich, false);

  CLI::App* factor = app.add_subcommand("factor-check", "finite-to-one factor transport");
  add_common(factor, true);
  factor->add_option("--code", opt.code_path, "block code file")->required();

  // Reserved RunConfig parameter; accepted for interface stability.
  app.add_option("--max_len", opt.max_len, "reserved")->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  opt.command = app.get_subcommands().front()->get_name();
  return run(opt);
}
