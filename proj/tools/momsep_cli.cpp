// Batch front-end. Exit status: 0 ok, 1 error or regression failure,
// 3 when an analysis produced at least one ENTANGLED verdict.
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "momsep/app.hpp"
#include "momsep/errors.hpp"

namespace {

constexpr int kExitError = 1;
constexpr int kExitEntangled = 3;

struct Globals {
  std::optional<int> cutoff;
  std::optional<double> epsilon;
  std::optional<double> tol;
  std::string format;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw momsep::Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw momsep::Error("cannot write " + out_path);
  out << text;
}

int analyze(const std::string& config_path, const std::string& out_path, const Globals& g) {
  auto config = momsep::app::parse_config(read_file(config_path));
  if (g.cutoff) config.cutoff = g.cutoff;
  if (g.epsilon) config.epsilon = g.epsilon;
  if (g.tol) config.tol = g.tol;
  if (!g.format.empty()) config.format = g.format;
  const auto report = momsep::app::run(config);
  if (config.format == "structured") {
    emit(momsep::app::report_to_json(report).dump(2) + "\n", out_path);
  } else {
    emit(momsep::app::render_human(report), out_path);
  }
  return report.any_entangled() ? kExitEntangled : 0;
}

int regress(const std::string& out_path, const Globals& g) {
  const auto report = momsep::app::run_regression(momsep::app::regression_fixtures());
  if (g.format == "structured") {
    emit(momsep::app::regression_to_json(report).dump(2) + "\n", out_path);
  } else {
    emit(momsep::app::render_regression(report), out_path);
  }
  return report.failures() == 0 ? 0 : kExitError;
}

void list_states(const Globals& g) {
  const auto& catalog = momsep::app::library_catalog();
  if (g.format == "structured") {
    momsep::app::Json j = momsep::app::Json::array();
    for (const auto& e : catalog) {
      momsep::app::Json params = momsep::app::Json::object();
      for (const auto& p : e.params) params[p.name] = {{"description", p.description}, {"default", p.default_value}};
      j.push_back({{"name", e.name}, {"description", e.description}, {"params", params}});
    }
    std::cout << j.dump(2) << "\n";
    return;
  }
  for (const auto& e : catalog) {
    std::cout << e.name << "  " << e.description << "\n";
    for (const auto& p : e.params) {
      std::cout << "    " << p.name << " = " << p.default_value.dump() << "  " << p.description << "\n";
    }
  }
}

void list_criteria(const Globals& g) {
  const auto& catalog = momsep::app::criteria_catalog();
  if (g.format == "structured") {
    momsep::app::Json j = momsep::app::Json::array();
    for (const auto& c : catalog) j.push_back({{"name", c.name}, {"summary", c.summary}, {"fields", c.fields}});
    std::cout << j.dump(2) << "\n";
    return;
  }
  for (const auto& c : catalog) std::cout << c.name << "  " << c.summary << "\n    fields: " << c.fields << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entanglement tests built on matrices of moments"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--cutoff", g.cutoff, "Per-mode Fock cutoff for library states")->check(CLI::PositiveNumber);
  app.add_option("--epsilon", g.epsilon, "Allowed norm loss of truncated coherent states")
      ->check(CLI::Range(0.0, 1.0));
  app.add_option("--tol", g.tol, "Tolerance for every criterion")->check(CLI::NonNegativeNumber);
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"human", "structured"}));

  std::string config_path, out_path;
  auto* analyze_cmd = app.add_subcommand("analyze", "Run the criteria of a config file");
  analyze_cmd->add_option("config", config_path, "Config file")->required();
  analyze_cmd->add_option("--out", out_path, "Write the report here instead of standard output");
  auto* regress_cmd = app.add_subcommand("regress", "Check published values");
  regress_cmd->add_option("--out", out_path, "Write the results here instead of standard output");
  auto* states_cmd = app.add_subcommand("list-states", "Show the state library");
  auto* criteria_cmd = app.add_subcommand("list-criteria", "Show the available criteria");
  // Global flags are accepted after the subcommand as well.
  for (auto* sub : {analyze_cmd, regress_cmd, states_cmd, criteria_cmd}) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    if (analyze_cmd->parsed()) return analyze(config_path, out_path, g);
    if (regress_cmd->parsed()) return regress(out_path, g);
    if (states_cmd->parsed()) list_states(g);
    if (criteria_cmd->parsed()) list_criteria(g);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return 0;
}
