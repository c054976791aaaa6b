#include <future>

#include "momsep/app.hpp"
#include "momsep/errors.hpp"

namespace momsep::app {

namespace {

std::string source_description(const StateSpec& spec) {
  switch (spec.kind) {
    case SourceKind::Library:
      return spec.params.empty() ? "library " + spec.name : "library " + spec.name + " " + spec.params.dump();
    case SourceKind::Amplitudes:
      return "explicit amplitudes";
    case SourceKind::Density:
      return "explicit density matrix";
    case SourceKind::Moments:
      return "moment table (" + std::to_string(spec.moments.size()) + " entries), reconstructed";
  }
  return "?";
}

CriterionResult run_guarded(const State& state, const CriterionSpec& spec, std::optional<double> tol) {
  CriterionResult out;
  out.name = spec.name;
  try {
    out.verdicts = run_criterion(state, spec, tol);
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  return out;
}

}  // namespace

std::vector<Verdict> run_criterion(const State& state, const CriterionSpec& spec, std::optional<double> tol_override) {
  const double fallback = spec.name == "sv_cat_state_test" ? kTruncatedTolerance : kExactTolerance;
  const double tol = spec.tol.value_or(tol_override.value_or(fallback));
  const Side side = parse_side(spec.side);
  const auto& n = spec.name;

  if (n == "pt_norm_test") return {pt_norm_test(state, class_from_spec(spec.cls, state), tol)};
  if (n == "realign_norm_test") return {realign_norm_test(state, class_from_spec(spec.cls, state), tol)};
  if (n == "sylvester_scan" || n == "min_eig_test") {
    const auto cls = class_from_spec(spec.cls, state);
    auto m = build_moment_matrix(state, cls);
    if (spec.matrix == "pt") m = partial_transpose(m, side);
    Verdict v = n == "sylvester_scan" ? sylvester_scan(m.entries, spec.max_minor_size.value_or(4), spec.r_list, tol)
                                      : min_eig_test(m.entries, tol);
    v.operator_class = cls.to_string();
    if (spec.matrix == "pt") v.side = to_string(side);
    v.note = (v.note.empty() ? "" : v.note + "; ") + "matrix " + m.provenance;
    return {v};
  }
  if (n == "map_test") {
    if (!spec.map) throw ConfigError("map", "map_test needs a map");
    return {map_test(state, class_from_spec(spec.cls, state), map_from_json(*spec.map), side, spec.r, tol)};
  }
  if (n == "breuer_bell_test") return {breuer_bell_test(state, spec.variant.value_or(1), tol)};
  if (n == "hz_two_mode") return {hz_two_mode(state, Bipartition::two_mode(), tol)};
  if (n == "hz_three_mode") return {hz_three_mode(state, spec.variant.value_or(1), spec.mode.value_or(0), tol)};
  if (n == "breuer_inequality_test") return {breuer_inequality_test(state, tol)};
  if (n == "sv_cat_state_test") return {sv_cat_state_test(state, tol)};
  if (n == "generic_pt_test") {
    const auto bp = spec.mode ? multimode_bipartition(state, *spec.mode) : Bipartition::two_mode();
    return {generic_pt_test(state, GenericClass::parse(spec.ops), bp, tol)};
  }
  if (n == "state_level_tests") {
    const auto rho = to_density(state);
    std::size_t d_a = 0, d_b = 0;
    if (spec.dims) {
      d_a = (*spec.dims)[0];
      d_b = (*spec.dims)[1];
    } else if (rho.cutoffs().modes() == 2) {
      d_a = static_cast<std::size_t>(rho.cutoffs()[0]);
      d_b = static_cast<std::size_t>(rho.cutoffs()[1]);
    } else {
      throw DimensionError("state_level_tests needs dims for states with other than two modes");
    }
    return state_level_tests(rho, d_a, d_b, tol);
  }
  throw ConfigError("name", "unknown criterion '" + n + "'");
}

std::size_t StateReport::entangled_count() const {
  std::size_t count = 0;
  for (const auto& r : results) {
    for (const auto& v : r.verdicts) count += v.entangled() ? 1 : 0;
  }
  return count;
}

std::string StateReport::summary() const {
  if (!error.empty()) return label + ": state could not be built";
  std::size_t verdicts = 0, errors = 0;
  for (const auto& r : results) {
    verdicts += r.verdicts.size();
    errors += r.error.empty() ? 0 : 1;
  }
  const auto hits = entangled_count();
  std::string s = label + ": ";
  if (hits > 0) {
    s += "ENTANGLED by " + std::to_string(hits) + " of " + std::to_string(verdicts) + " verdicts";
  } else {
    s += "no entanglement detected in " + std::to_string(verdicts) + " verdicts";
  }
  if (errors > 0) s += ", " + std::to_string(errors) + " criteria failed";
  return s;
}

bool Report::any_entangled() const {
  for (const auto& s : states) {
    if (s.entangled_count() > 0) return true;
  }
  return false;
}

bool Report::any_error() const {
  for (const auto& s : states) {
    if (!s.error.empty()) return true;
    for (const auto& r : s.results) {
      if (!r.error.empty()) return true;
    }
  }
  return false;
}

Report run(const RunConfig& config) {
  BuildOptions options;
  options.cutoff = config.cutoff;
  if (config.epsilon) options.epsilon = *config.epsilon;

  Report report;
  for (std::size_t i = 0; i < config.states.size(); ++i) {
    const auto& spec = config.states[i];
    StateReport sr;
    sr.label = spec.label.empty() ? "state " + std::to_string(i + 1) : spec.label;
    sr.source = source_description(spec);
    std::optional<State> state;
    try {
      state = build_state(spec, options);
    } catch (const std::exception& e) {
      sr.error = e.what();
    }
    if (state) {
      std::vector<std::future<CriterionResult>> pending;
      for (const auto& c : config.criteria) {
        pending.push_back(std::async(std::launch::async, run_guarded, std::cref(*state), std::cref(c), config.tol));
      }
      for (auto& f : pending) sr.results.push_back(f.get());
    }
    report.states.push_back(std::move(sr));
  }
  return report;
}

}  // namespace momsep::app
