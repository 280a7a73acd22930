#include "thermoflow.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
  std::filesystem::path dir = std::filesystem::temp_directory_path() / "tf_capi";
  std::filesystem::create_directories(dir);
  std::filesystem::path p = dir / name;
  std::ofstream(p) << content;
  return p.string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::string s((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return s;
}

const char* kGolden = R"({
  "states": ["0", "1"],
  "edges": [["0","0"], ["0","1"], ["1","0"]],
  "roof": {"window": 1, "table": {"0": 1.0, "1": 1.0}}
})";

const char* kPhaseToy = R"({
  "states": ["n", "s0", "s1"],
  "edges": [["n","n"], ["s0","s0"], ["s0","s1"], ["s1","s0"], ["s1","s1"]]
})";

}  // namespace

TEST_SUITE_BEGIN("capi");

TEST_CASE("status names and exit codes") {
  CHECK(std::string(tf_status_name(TF_OK)) == "OK");
  CHECK(std::string(tf_status_name(TF_ERR_NON_UNIQUE_EQUILIBRIUM)) == "NonUniqueEquilibrium");
  CHECK(tf_exit_code(TF_OK) == 0);
  CHECK(tf_exit_code(TF_ERR_PARSE) == 1);
  CHECK(tf_exit_code(TF_ERR_TOLERANCE) == 2);
}

TEST_CASE("model lifecycle and parse errors") {
  tf_model* m = nullptr;
  REQUIRE(tf_model_parse(kGolden, &m) == TF_OK);
  CHECK(tf_model_is_flow(m) == 1);
  CHECK(tf_model_state_count(m) == 2);
  tf_model_free(m);

  tf_model* bad = nullptr;
  tf_status s = tf_model_parse(R"({"states": ["a"], "edges": [["a","a"]], "wat": 0})", &bad);
  CHECK(s == TF_ERR_PARSE);
  CHECK(std::string(tf_last_error()).find("wat") != std::string::npos);
}

TEST_CASE("flow pressure and mme through the C surface") {
  tf_model* m = nullptr;
  REQUIRE(tf_model_parse(kGolden, &m) == TF_OK);
  double p = 0.0;
  REQUIRE(tf_flow_pressure(m, nullptr, &p, nullptr) == TF_OK);
  double phi = 0.5 * (1.0 + std::sqrt(5.0));
  CHECK(p == doctest::Approx(std::log(phi)).epsilon(1e-10));

  double h = 0.0;
  tf_measure* base = nullptr;
  std::string csv = write_temp("mme.csv", "");
  REQUIRE(tf_flow_mme(m, &h, &base, csv.c_str()) == TF_OK);
  CHECK(h == doctest::Approx(std::log(phi)).epsilon(1e-10));
  double st0 = 0.0;
  REQUIRE(tf_measure_stationary(base, 0, &st0) == TF_OK);
  CHECK(st0 == doctest::Approx(phi * phi / (1 + phi * phi)).epsilon(1e-9));
  double ent = 0.0;
  REQUIRE(tf_measure_entropy(base, &ent) == TF_OK);
  CHECK(ent == doctest::Approx(std::log(phi)).epsilon(1e-9));
  CHECK(slurp(csv).find("h_top") == 0);
  tf_measure_free(base);
  tf_model_free(m);
}

TEST_CASE("pressure, equilibrium, and the phase toy tie") {
  tf_model* m = nullptr;
  REQUIRE(tf_model_parse(kPhaseToy, &m) == TF_OK);
  CHECK(tf_model_is_flow(m) == 0);
  std::string pot = write_temp("phase_pot.json", R"({"window": 1, "table":
    {"n": 0.0, "s0": -0.6931471805599453, "s1": -0.6931471805599453}})");
  tf_potential* f = nullptr;
  REQUIRE(tf_potential_load(pot.c_str(), m, &f) == TF_OK);

  double v = 0.0;
  REQUIRE(tf_pressure(m, f, 0.5, &v, nullptr) == TF_OK);
  CHECK(v == doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-10));

  tf_measure* eq = nullptr;
  tf_status s = tf_equilibrium(m, f, 1.0, &eq, nullptr);
  CHECK(s == TF_ERR_NON_UNIQUE_EQUILIBRIUM);
  CHECK(tf_exit_code(s) == 1);

  std::string curve = write_temp("curve.csv", "");
  REQUIRE(tf_phase_curve(m, f, 0.0, 2.0, 41, curve.c_str()) == TF_OK);
  std::string text = slurp(curve);
  CHECK(text.find("q,pressure\n") == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 42);

  tf_potential_free(f);
  tf_model_free(m);
}

TEST_CASE("verify-b and synchronize artifacts") {
  tf_model* m = nullptr;
  REQUIRE(tf_model_parse(kGolden, &m) == TF_OK);
  std::string fib = write_temp("f01.json",
      R"([{"degree": 0, "potential": {"window": 1, "table": {"0": 0.0, "1": -1.0}}}])");
  tf_fiber_potential* f = nullptr;
  REQUIRE(tf_fiber_potential_load(fib.c_str(), m, &f) == TF_OK);

  int window = 0;
  double p = 0.0;
  std::string sync_path = write_temp("sync.json", "");
  REQUIRE(tf_synchronize(m, f, 1.0, &window, &p, sync_path.c_str()) == TF_OK);
  CHECK(window == 2);

  // The emitted synchronized flow is itself a loadable model with h_top 1.
  tf_model* sync = nullptr;
  REQUIRE(tf_model_load(sync_path.c_str(), &sync) == TF_OK);
  double h = 0.0;
  REQUIRE(tf_flow_mme(sync, &h, nullptr, nullptr) == TF_OK);
  CHECK(std::abs(h - 1.0) <= 1e-8);
  tf_model_free(sync);

  tf_synchronization_report rep{};
  std::string report = write_temp("vb.csv", "");
  REQUIRE(tf_verify_synchronization(m, f, 1.0, &rep, report.c_str()) == TF_OK);
  CHECK(rep.passed == 1);
  CHECK(std::abs(rep.h_top_synchronized - 1.0) <= 1e-8);
  CHECK(slurp(report).find("pressure,horizon,window") == 0);  // csv row form

  tf_fiber_potential_free(f);
  tf_model_free(m);
}

TEST_CASE("dichotomy and shadow through the C surface") {
  tf_model* m = nullptr;
  REQUIRE(tf_model_parse(kGolden, &m) == TF_OK);
  tf_dichotomy_result res{};
  REQUIRE(tf_dichotomy(m, &res, nullptr) == TF_OK);
  CHECK(res.constant_suspension == 1);
  CHECK(res.c == doctest::Approx(1.0));
  tf_model_free(m);

  tf_model* mixing = nullptr;
  REQUIRE(tf_model_parse(R"({
    "states": ["0", "1"],
    "edges": [["0","0"], ["0","1"], ["1","0"]],
    "roof": {"window": 1, "table": {"0": 1.0, "1": 2.0}}
  })", &mixing) == TF_OK);
  REQUIRE(tf_dichotomy(mixing, &res, nullptr) == TF_OK);
  CHECK(res.constant_suspension == 0);

  std::string orbit = write_temp("orbit.json", R"({
    "delta": 1e-9, "t_min": 3.0, "periodic": true,
    "entries": [{"point": {"past_cycle": ["0","1"], "core": [],
                 "future_cycle": ["0","1"], "origin": 0, "fiber": 0.0},
                 "duration": 3.0}]})");
  double maxd = 1.0;
  std::string report = write_temp("shadow.txt", "");
  REQUIRE(tf_shadow(mixing, orbit.c_str(), 0.5, &maxd, report.c_str()) == TF_OK);
  CHECK(maxd == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(slurp(report).find("metric:") == 0);
  tf_model_free(mixing);
}

TEST_CASE("factor check through the C surface") {
  tf_model* m = nullptr;
  REQUIRE(tf_model_parse(R"({
    "states": ["0", "1"],
    "edges": [["0","0"], ["0","1"], ["1","0"], ["1","1"]],
    "roof": {"window": 1, "table": {"0": 1.0, "1": 1.0}}
  })", &m) == TF_OK);
  std::string xor_path = write_temp("xor.json", R"({"window": 2, "map":
    {"0 0": "0", "0 1": "1", "1 0": "1", "1 1": "0"}})");
  tf_code* code = nullptr;
  REQUIRE(tf_code_load(xor_path.c_str(), m, &code) == TF_OK);
  tf_factor_report rep{};
  REQUIRE(tf_factor_check(m, code, nullptr, &rep, nullptr) == TF_OK);
  CHECK(rep.finite_to_one == 1);
  CHECK(rep.degree == 2);
  CHECK(rep.passed == 1);
  CHECK(std::abs(rep.pressure_source - rep.pressure_target) <= 1e-9);
  tf_code_free(code);

  std::string collapse = write_temp("collapse.json",
      R"({"window": 1, "map": {"0": "z", "1": "z"}})");
  tf_code* bad = nullptr;
  REQUIRE(tf_code_load(collapse.c_str(), m, &bad) == TF_OK);
  tf_factor_report rep2{};
  tf_status s = tf_factor_check(m, bad, nullptr, &rep2, nullptr);
  CHECK(s == TF_ERR_NOT_FINITE_TO_ONE);
  CHECK(rep2.finite_to_one == 0);
  tf_code_free(bad);
  tf_model_free(m);
}

TEST_CASE("tolerance record round trip") {
  CHECK(tf_tol_set("bowen_residual", 1e-7) == TF_OK);
  CHECK(tf_tol_apply_spec("pressure_abs=1e-9") == TF_OK);
  CHECK(tf_tol_set("nonsense", 1.0) == TF_ERR_VALIDATION);
  tf_tol_reset();
}

TEST_SUITE_END();
