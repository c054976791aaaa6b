#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "momsep/criteria.hpp"
#include "momsep/errors.hpp"
#include "momsep/reconstruct.hpp"

namespace momsep::app {

using Json = nlohmann::ordered_json;

inline constexpr const char* kConfigSchema = "momsep.config/1";
inline constexpr const char* kReportSchema = "momsep.report/1";
inline constexpr const char* kRegressionSchema = "momsep.regression/1";

/// Config problems; the message starts with the offending field path.
class ConfigError : public ParseError {
public:
  ConfigError(const std::string& path, const std::string& message);
  const std::string& path() const { return path_; }

private:
  std::string path_;
};

// ---------------------------------------------------------------------------
// State library

struct LibraryParam {
  std::string name;
  std::string description;
  Json default_value;
};

struct LibraryEntry {
  std::string name;
  std::string description;
  std::vector<LibraryParam> params;
};

struct BuildOptions {
  std::optional<int> cutoff;  // overrides the per-mode cutoff of every library state
  double epsilon = kDefaultCoherentEpsilon;
};

const std::vector<LibraryEntry>& library_catalog();

/// Throws ConfigError for unknown names or ill-typed parameters.
State library_state(const std::string& name, const Json& params = Json::object(), const BuildOptions& options = {});

// ---------------------------------------------------------------------------
// Run configuration

enum class SourceKind { Library, Amplitudes, Density, Moments };

struct StateSpec {
  std::string label;
  SourceKind kind = SourceKind::Library;
  std::string name;                 // library
  Json params = Json::object();     // library
  std::vector<int> cutoffs;         // amplitudes, density
  Vector amplitudes;                // amplitudes
  Matrix density;                   // density
  MomentTable moments;              // moments
  std::vector<int> assumed_dims;    // moments
};

struct ClassSpec {
  std::string preset;               // first_order, stormer, breuer1..3; empty for explicit lists
  std::vector<std::string> side_a;
  std::vector<std::string> side_b;
  std::optional<int> isolate;       // multimode: this mode against the rest
};

struct CriterionSpec {
  std::string name;
  std::optional<ClassSpec> cls;
  std::vector<std::string> ops;               // generic_pt_test
  std::optional<std::vector<int>> r;
  std::vector<std::vector<int>> r_list;       // sylvester_scan
  std::optional<int> max_minor_size;
  std::string matrix = "pt";                  // sylvester_scan / min_eig_test: pt or moment
  std::optional<Json> map;                    // map_test
  std::string side = "A";
  std::optional<int> variant;
  std::optional<int> mode;
  std::optional<std::vector<std::size_t>> dims;  // state_level_tests
  std::optional<double> tol;
};

struct RunConfig {
  std::vector<StateSpec> states;
  std::vector<CriterionSpec> criteria;
  std::optional<int> cutoff;
  std::optional<double> epsilon;
  std::optional<double> tol;
  std::string format = "human";
};

struct CriterionInfo {
  std::string name;
  std::string summary;
  std::string fields;
};

const std::vector<CriterionInfo>& criteria_catalog();

/// Parses the structured-text config. Syntax errors report line and column;
/// semantic errors report the field path, e.g. "criteria[1].map.type".
RunConfig parse_config(const std::string& text);
Json config_to_json(const RunConfig& config);

/// Map from its config form: "stormer", or an object with "type" set to
/// stormer, choi, kossakowski, breuer, identity or transpose.
PositiveMap map_from_json(const Json& value, const std::string& path = "map");

/// Operator class of a criterion on a given state; defaults to (1, a) x (1, b).
OperatorClass class_from_spec(const std::optional<ClassSpec>& spec, const State& state);

/// Builds the state a spec describes. Moment tables are reconstructed with
/// their assumed_dims.
State build_state(const StateSpec& spec, const BuildOptions& options);

// ---------------------------------------------------------------------------
// Reports

struct CriterionResult {
  std::string name;
  std::vector<Verdict> verdicts;
  std::string error;  // empty on success
};

struct StateReport {
  std::string label;
  std::string source;
  std::string error;
  std::vector<CriterionResult> results;
  std::size_t entangled_count() const;
  std::string summary() const;
};

struct Report {
  std::vector<StateReport> states;
  bool any_entangled() const;
  bool any_error() const;
};

/// Criteria of one state run concurrently; results keep config order.
Report run(const RunConfig& config);

/// Runs one configured criterion; throws on numeric or configuration errors.
/// Tolerance precedence: the criterion's own tol, then `tol_override`, then
/// the criterion default.
std::vector<Verdict> run_criterion(const State& state, const CriterionSpec& spec,
                                   std::optional<double> tol_override = std::nullopt);

Json verdict_to_json(const Verdict& verdict);
Json report_to_json(const Report& report);
std::string render_human(const Report& report);
Json complex_to_json(Complex z);
Json matrix_to_json(const Matrix& m);

// ---------------------------------------------------------------------------
// Regression suite of published values

struct Fixture {
  std::string name;
  double expected;
  double tolerance;
  std::function<double()> compute;
};

struct FixtureResult {
  std::string name;
  double expected = 0.0;
  double actual = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string error;
};

struct RegressionReport {
  std::vector<FixtureResult> results;
  double seconds = 0.0;
  std::size_t failures() const;
};

std::vector<Fixture> regression_fixtures();
RegressionReport run_regression(const std::vector<Fixture>& fixtures);
Json regression_to_json(const RegressionReport& report);
std::string render_regression(const RegressionReport& report);

}  // namespace momsep::app
