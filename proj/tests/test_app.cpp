#include <doctest.h>

#include <cmath>

#include "momsep/app.hpp"
#include "momsep/errors.hpp"

using namespace momsep;
using app::Json;

namespace {

const char* kSingletConfig = R"({
  "schema": "momsep.config/1",
  "state": {"library": "singlet"},
  "criteria": [
    {"name": "pt_norm_test", "class": {"a": ["1", "a"], "b": ["1", "b"]}},
    "realign_norm_test"
  ]
})";

std::string error_path(const std::string& text) {
  try {
    app::parse_config(text);
  } catch (const app::ConfigError& e) {
    return e.path();
  }
  return "<none>";
}

}  // namespace

TEST_CASE("state library") {
  const auto vac = app::library_state("product_coherent", {{"alpha", 0.0}, {"beta", 0.0}});
  const auto rho = to_density(vac);
  CHECK(std::abs(rho.matrix()(0, 0) - 1.0) < 1e-15);
  const auto cat = std::get<StateVector>(app::library_state("cat_double_prime", {{"alpha", 0.3}, {"beta", 0.2}}));
  CHECK(cat.amplitudes().norm() == doctest::Approx(1.0));
  // odd total parity: |psi''> has no |0,0> component
  CHECK(std::abs(cat.amplitude(std::vector<int>{0, 0})) < 1e-15);
  const auto singlet = std::get<StateVector>(app::library_state("singlet"));
  CHECK(singlet.amplitude(std::vector<int>{0, 1}).real() == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK_THROWS_AS(app::library_state("nope"), app::ConfigError);
  CHECK_THROWS_AS(app::library_state("singlet", {{"alpha", 1.0}}), app::ConfigError);
  CHECK_THROWS_AS(app::library_state("fock", {{"n", {1, -1}}}), app::ConfigError);
  app::BuildOptions wide;
  wide.cutoff = 5;
  CHECK(cutoffs_of(app::library_state("singlet", Json::object(), wide))[0] == 5);
  app::BuildOptions tight;
  tight.cutoff = 2;
  CHECK_THROWS_AS(app::library_state("product_coherent", {{"alpha", 2.0}}, tight), InsufficientCutoffError);
  CHECK(app::library_catalog().size() == 9);
}

TEST_CASE("config round trip") {
  const auto cfg = app::parse_config(kSingletConfig);
  const auto once = app::config_to_json(cfg);
  const auto twice = app::config_to_json(app::parse_config(once.dump()));
  CHECK(once == twice);
  const std::string rich = R"({
    "states": [
      {"label": "m", "moments": {"1": 1, "a+ a": 0.5, "b+ b": 0.5, "a+ b": -0.5, "a+ a b+ b": 0,
                                  "a": 0, "b": 0, "a b": 0, "a+ b+ b": 0, "a+ a b": 0},
       "assumed_dims": [2, 2]},
      {"amplitudes": [0, [0.5, 0.5], 0, 0], "cutoffs": [2, 2]},
      {"density": [[0.5, 0], [0, 0.5]], "cutoffs": [2]}
    ],
    "criteria": [
      {"name": "map_test", "class": "stormer", "map": {"type": "choi", "alpha": 2, "beta": 0, "gamma": 1}, "r": [2, 3, 7]},
      {"name": "sylvester_scan", "r_list": [[1, 4]], "matrix": "pt", "side": "B", "tol": 1e-8},
      {"name": "generic_pt_test", "ops": ["1", "a b"]}
    ],
    "cutoff": 6, "epsilon": 1e-9, "tol": 1e-10, "format": "structured"
  })";
  const auto a = app::config_to_json(app::parse_config(rich));
  CHECK(a == app::config_to_json(app::parse_config(a.dump())));
  CHECK(a["states"][0]["moments"].size() == 10);
}

TEST_CASE("config errors carry the field path") {
  CHECK(error_path(R"({"criteria": [{"name": "nope"}]})") == "criteria[0].name");
  CHECK(error_path(R"({"criteria": ["pt_norm_test", {"name": "map_test", "class": "stormer", "map": {"type": "choi", "alpha": 0, "beta": 0, "gamma": 0}}]})") ==
        "criteria[1].map");
  CHECK(error_path(R"({"states": [{"library": "singlet"}, {"library": "x"}]})") == "states[1].library");
  CHECK(error_path(R"({"state": {"library": "singlet", "cutoffs": [2, 2]}})") == "state.cutoffs");
  CHECK(error_path(R"({"state": {"moments": {"a a+": 1}, "assumed_dims": [2]}})") == "state.moments.a a+");
  CHECK(error_path(R"({"criteria": [{"name": "pt_norm_test", "class": {"a": ["1", "b"], "b": ["1", "b"]}}]})") ==
        "criteria[0].class");
  CHECK(error_path(R"({"format": "xml"})") == "format");
  CHECK(error_path(R"({"bogus": 1})") == "bogus");
  try {
    app::parse_config("{\n  \"state\": {\"library\": \"singlet\"},\n  oops\n}");
    FAIL("expected a syntax error");
  } catch (const app::ConfigError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("run produces ordered verdicts") {
  const auto report = app::run(app::parse_config(kSingletConfig));
  REQUIRE(report.states.size() == 1);
  const auto& s = report.states[0];
  REQUIRE(s.results.size() == 2);
  CHECK(s.results[0].name == "pt_norm_test");
  CHECK(s.results[1].name == "realign_norm_test");
  const double nu = (1.0 + std::sqrt(2.0)) / 2.0;
  CHECK(std::abs(*s.results[0].verdicts[0].witness("nu_gamma") - nu) < 1e-9);
  CHECK(std::abs(*s.results[1].verdicts[0].witness("nu_realign") - nu) < 1e-9);
  CHECK(report.any_entangled());
  const auto j = app::report_to_json(report);
  CHECK(j["schema"] == app::kReportSchema);
  CHECK(j["states"][0]["results"][0]["verdicts"][0].contains("witness_matrix"));
  CHECK(j["states"][0]["results"][0]["verdicts"][0]["witness_matrix"][0][0].size() == 2);
  // deterministic
  CHECK(app::report_to_json(app::run(app::parse_config(kSingletConfig))).dump() == j.dump());
  CHECK(app::render_human(report).find("ENTANGLED") != std::string::npos);
}

TEST_CASE("cat states through the runner") {
  const auto report = app::run(app::parse_config(R"({
    "states": [{"library": "cat_prime"}, {"library": "cat_double_prime", "params": {"alpha": 0.3, "beta": 0.2}}],
    "criteria": ["sv_cat_state_test"]})"));
  for (const auto& s : report.states) CHECK(s.results[0].verdicts[0].entangled());
}

TEST_CASE("empty criteria give an empty report and errors stay local") {
  const auto empty = app::run(app::parse_config(R"({"state": {"library": "singlet"}})"));
  CHECK(empty.states.size() == 1);
  CHECK(empty.states[0].results.empty());
  CHECK_FALSE(empty.any_entangled());

  const auto mixed = app::run(app::parse_config(R"({
    "state": {"library": "singlet"},
    "criteria": ["hz_three_mode", "hz_two_mode", {"name": "map_test", "class": "first_order", "map": "stormer"}]})"));
  const auto& r = mixed.states[0].results;
  REQUIRE(r.size() == 3);
  CHECK_FALSE(r[0].error.empty());
  CHECK(r[1].error.empty());
  CHECK(r[1].verdicts[0].entangled());
  CHECK_FALSE(r[2].error.empty());
  CHECK(mixed.any_error());

  const auto bad_state = app::run(app::parse_config(R"({
    "state": {"amplitudes": [1, 0, 0], "cutoffs": [2, 2]}, "criteria": ["hz_two_mode"]})"));
  CHECK_FALSE(bad_state.states[0].error.empty());
}

TEST_CASE("moment tables are reconstructed before testing") {
  const auto report = app::run(app::parse_config(R"({
    "state": {"moments": {"a+ a": 0.5, "b+ b": 0.5, "a+ b": -0.5, "a+ a b+ b": 0, "a": 0, "b": 0, "a b": 0,
                          "a+ b+ b": 0, "a+ a b": 0, "a+ a b+": 0, "a b+ b": 0, "a+ b+": 0, "a b+": -0.5,
                          "a+": 0, "b+": 0},
              "assumed_dims": [2, 2]},
    "criteria": ["state_level_tests", "hz_two_mode"]})"));
  const auto& s = report.states[0];
  REQUIRE(s.error.empty());
  REQUIRE(s.results[0].verdicts.size() == 3);
  CHECK(*s.results[0].verdicts[0].witness("pt_norm") == doctest::Approx(2.0));
  CHECK(s.results[1].verdicts[0].entangled());
}

TEST_CASE("tolerance precedence") {
  const auto cfg = app::parse_config(R"({"state": {"library": "singlet"}, "tol": 0.3,
    "criteria": ["hz_two_mode", {"name": "hz_two_mode", "tol": 0.01}]})");
  const auto report = app::run(cfg);
  CHECK_FALSE(report.states[0].results[0].verdicts[0].entangled());  // 0 < 0.25 - 0.3 fails
  CHECK(report.states[0].results[1].verdicts[0].entangled());
}

TEST_CASE("regression suite") {
  const auto fixtures = app::regression_fixtures();
  const auto report = app::run_regression(fixtures);
  for (const auto& r : report.results) {
    INFO(r.name << " expected " << r.expected << " got " << r.actual << " " << r.error);
    CHECK(r.passed);
  }
  CHECK(report.seconds < 60.0);
  // harness self-test: one perturbed expectation, one failure
  for (std::size_t i = 0; i < fixtures.size(); ++i) {
    auto perturbed = fixtures;
    perturbed[i].expected += 1e-3;
    CHECK(app::run_regression(perturbed).failures() == 1);
  }
  const auto j = app::regression_to_json(report);
  CHECK(j["failed"] == 0);
}
