#include <algorithm>
#include <set>
#include <sstream>

#include "momsep/app.hpp"
#include "momsep/errors.hpp"

namespace momsep::app {

namespace {

std::string at(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

void allow_only(const Json& obj, const std::string& path, std::initializer_list<const char*> keys) {
  for (const auto& item : obj.items()) {
    if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return item.key() == k; })) {
      throw ConfigError(at(path, item.key()), "unknown field");
    }
  }
}

const Json& require(const Json& obj, const std::string& key, const std::string& path) {
  if (!obj.contains(key)) throw ConfigError(at(path, key), "required field is missing");
  return obj.at(key);
}

std::string get_string(const Json& v, const std::string& path) {
  if (!v.is_string()) throw ConfigError(path, "expected a string");
  return v.get<std::string>();
}

int get_int(const Json& v, const std::string& path) {
  if (!v.is_number_integer()) throw ConfigError(path, "expected an integer");
  return v.get<int>();
}

double get_double(const Json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path, "expected a number");
  return v.get<double>();
}

Complex get_complex(const Json& v, const std::string& path) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return {v[0].get<double>(), v[1].get<double>()};
  }
  throw ConfigError(path, "expected a number or a [re, im] pair");
}

std::vector<int> get_int_list(const Json& v, const std::string& path) {
  if (!v.is_array()) throw ConfigError(path, "expected a list of integers");
  std::vector<int> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(get_int(v[i], at(path, i)));
  return out;
}

std::vector<std::string> get_string_list(const Json& v, const std::string& path) {
  if (!v.is_array()) throw ConfigError(path, "expected a list of strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(get_string(v[i], at(path, i)));
  return out;
}

RealMatrix get_real_matrix(const Json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) throw ConfigError(path, "expected a non-empty list of rows");
  const auto n = v.size();
  RealMatrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(v[0].size()));
  for (std::size_t i = 0; i < n; ++i) {
    if (!v[i].is_array() || v[i].size() != v[0].size()) throw ConfigError(at(path, i), "rows differ in length");
    for (std::size_t j = 0; j < v[i].size(); ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = get_double(v[i][j], at(at(path, i), j));
    }
  }
  return m;
}

Matrix get_complex_matrix(const Json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) throw ConfigError(path, "expected a non-empty list of rows");
  const auto n = v.size();
  Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(v[0].size()));
  for (std::size_t i = 0; i < n; ++i) {
    if (!v[i].is_array() || v[i].size() != v[0].size()) throw ConfigError(at(path, i), "rows differ in length");
    for (std::size_t j = 0; j < v[i].size(); ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = get_complex(v[i][j], at(at(path, i), j));
    }
  }
  return m;
}

// Rethrows library errors with the field path attached.
template <typename F>
auto with_path(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(path, e.what());
  }
}

const std::set<std::string>& class_presets() {
  static const std::set<std::string> presets = {"first_order", "stormer", "breuer1", "breuer2", "breuer3"};
  return presets;
}

ClassSpec parse_class(const Json& v, const std::string& path) {
  ClassSpec c;
  if (v.is_string()) {
    c.preset = v.get<std::string>();
    if (!class_presets().count(c.preset)) throw ConfigError(path, "unknown class preset '" + c.preset + "'");
    return c;
  }
  if (!v.is_object()) throw ConfigError(path, "expected a preset name or an object with a and b lists");
  allow_only(v, path, {"a", "b", "isolate"});
  c.side_a = get_string_list(require(v, "a", path), at(path, "a"));
  c.side_b = get_string_list(require(v, "b", path), at(path, "b"));
  if (v.contains("isolate")) c.isolate = get_int(v.at("isolate"), at(path, "isolate"));
  // Syntax of each entry is checked now; mode ranges once the state is known.
  with_path(path, [&] {
    OperatorClass::parse(c.side_a, c.side_b,
                         c.isolate ? Bipartition::isolate(*c.isolate, std::max(*c.isolate + 1, 26))
                                   : Bipartition::two_mode());
    return 0;
  });
  return c;
}

Json class_to_json(const ClassSpec& c) {
  if (!c.preset.empty()) return c.preset;
  Json j = {{"a", c.side_a}, {"b", c.side_b}};
  if (c.isolate) j["isolate"] = *c.isolate;
  return j;
}

StateSpec parse_state(const Json& v, const std::string& path) {
  if (!v.is_object()) throw ConfigError(path, "expected an object");
  allow_only(v, path, {"label", "library", "params", "amplitudes", "density", "cutoffs", "moments", "assumed_dims"});
  StateSpec s;
  int kinds = 0;
  if (v.contains("library")) {
    ++kinds;
    s.kind = SourceKind::Library;
    s.name = get_string(v.at("library"), at(path, "library"));
    const auto& catalog = library_catalog();
    if (std::none_of(catalog.begin(), catalog.end(), [&](const LibraryEntry& e) { return e.name == s.name; })) {
      throw ConfigError(at(path, "library"), "unknown library state '" + s.name + "'");
    }
    if (v.contains("params")) {
      if (!v.at("params").is_object()) throw ConfigError(at(path, "params"), "expected an object");
      s.params = v.at("params");
    }
  }
  if (v.contains("amplitudes")) {
    ++kinds;
    s.kind = SourceKind::Amplitudes;
    const auto& a = v.at("amplitudes");
    if (!a.is_array() || a.empty()) throw ConfigError(at(path, "amplitudes"), "expected a non-empty list");
    s.amplitudes.resize(static_cast<Eigen::Index>(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i) {
      s.amplitudes(static_cast<Eigen::Index>(i)) = get_complex(a[i], at(at(path, "amplitudes"), i));
    }
  }
  if (v.contains("density")) {
    ++kinds;
    s.kind = SourceKind::Density;
    s.density = get_complex_matrix(v.at("density"), at(path, "density"));
  }
  if (v.contains("moments")) {
    ++kinds;
    s.kind = SourceKind::Moments;
    const auto& m = v.at("moments");
    if (!m.is_object()) throw ConfigError(at(path, "moments"), "expected an object mapping monomials to values");
    for (const auto& item : m.items()) {
      const auto p = at(at(path, "moments"), item.key());
      const auto spec = with_path(p, [&] { return Monomial::parse(item.key()); });
      const auto value = get_complex(item.value(), p);
      with_path(p, [&] {
        s.moments.set(spec, value);
        return 0;
      });
    }
    s.assumed_dims = get_int_list(require(v, "assumed_dims", path), at(path, "assumed_dims"));
  }
  if (kinds != 1) throw ConfigError(path, "give exactly one of library, amplitudes, density or moments");
  if (s.kind == SourceKind::Amplitudes || s.kind == SourceKind::Density) {
    s.cutoffs = get_int_list(require(v, "cutoffs", path), at(path, "cutoffs"));
  } else if (v.contains("cutoffs")) {
    throw ConfigError(at(path, "cutoffs"), "only used with amplitudes or density");
  }
  if (s.kind != SourceKind::Library && v.contains("params")) {
    throw ConfigError(at(path, "params"), "only used with library states");
  }
  if (s.kind != SourceKind::Moments && v.contains("assumed_dims")) {
    throw ConfigError(at(path, "assumed_dims"), "only used with moments");
  }
  s.label = v.contains("label") ? get_string(v.at("label"), at(path, "label"))
                                : (s.kind == SourceKind::Library ? s.name : std::string());
  return s;
}

Json state_to_json(const StateSpec& s) {
  Json j;
  if (!s.label.empty()) j["label"] = s.label;
  switch (s.kind) {
    case SourceKind::Library:
      j["library"] = s.name;
      if (!s.params.empty()) j["params"] = s.params;
      break;
    case SourceKind::Amplitudes: {
      Json a = Json::array();
      for (Eigen::Index i = 0; i < s.amplitudes.size(); ++i) a.push_back(complex_to_json(s.amplitudes(i)));
      j["amplitudes"] = a;
      j["cutoffs"] = s.cutoffs;
      break;
    }
    case SourceKind::Density:
      j["density"] = matrix_to_json(s.density);
      j["cutoffs"] = s.cutoffs;
      break;
    case SourceKind::Moments: {
      Json m = Json::object();
      for (const auto& [spec, value] : s.moments.values()) m[spec.to_string()] = complex_to_json(value);
      j["moments"] = m;
      j["assumed_dims"] = s.assumed_dims;
      break;
    }
  }
  return j;
}

const std::set<std::string>& criterion_names() {
  static const std::set<std::string> names = [] {
    std::set<std::string> out;
    for (const auto& c : criteria_catalog()) out.insert(c.name);
    return out;
  }();
  return names;
}

CriterionSpec parse_criterion(const Json& v, const std::string& path) {
  CriterionSpec c;
  Json obj = v;
  if (v.is_string()) obj = Json{{"name", v}};
  if (!obj.is_object()) throw ConfigError(path, "expected a criterion name or object");
  allow_only(obj, path,
             {"name", "class", "ops", "r", "r_list", "max_minor_size", "matrix", "map", "side", "variant", "mode",
              "dims", "tol"});
  c.name = get_string(require(obj, "name", path), at(path, "name"));
  if (!criterion_names().count(c.name)) throw ConfigError(at(path, "name"), "unknown criterion '" + c.name + "'");
  if (obj.contains("class")) c.cls = parse_class(obj.at("class"), at(path, "class"));
  if (obj.contains("ops")) {
    c.ops = get_string_list(obj.at("ops"), at(path, "ops"));
    with_path(at(path, "ops"), [&] { return GenericClass::parse(c.ops); });
  }
  if (obj.contains("r")) c.r = get_int_list(obj.at("r"), at(path, "r"));
  if (obj.contains("r_list")) {
    const auto& rl = obj.at("r_list");
    if (!rl.is_array()) throw ConfigError(at(path, "r_list"), "expected a list of index lists");
    for (std::size_t i = 0; i < rl.size(); ++i) c.r_list.push_back(get_int_list(rl[i], at(at(path, "r_list"), i)));
  }
  if (obj.contains("max_minor_size")) c.max_minor_size = get_int(obj.at("max_minor_size"), at(path, "max_minor_size"));
  if (obj.contains("matrix")) {
    c.matrix = get_string(obj.at("matrix"), at(path, "matrix"));
    if (c.matrix != "pt" && c.matrix != "moment") throw ConfigError(at(path, "matrix"), "expected pt or moment");
  }
  if (obj.contains("map")) {
    c.map = obj.at("map");
    map_from_json(*c.map, at(path, "map"));
  }
  if (obj.contains("side")) {
    c.side = get_string(obj.at("side"), at(path, "side"));
    with_path(at(path, "side"), [&] { return parse_side(c.side); });
  }
  if (obj.contains("variant")) c.variant = get_int(obj.at("variant"), at(path, "variant"));
  if (obj.contains("mode")) c.mode = get_int(obj.at("mode"), at(path, "mode"));
  if (obj.contains("dims")) {
    const auto d = get_int_list(obj.at("dims"), at(path, "dims"));
    if (d.size() != 2 || d[0] < 1 || d[1] < 1) throw ConfigError(at(path, "dims"), "expected two positive integers");
    c.dims = std::vector<std::size_t>{static_cast<std::size_t>(d[0]), static_cast<std::size_t>(d[1])};
  }
  if (obj.contains("tol")) c.tol = get_double(obj.at("tol"), at(path, "tol"));

  if (c.name == "map_test" && !c.map) throw ConfigError(at(path, "map"), "map_test needs a map");
  if (c.name == "map_test" && !c.cls) throw ConfigError(at(path, "class"), "map_test needs a class");
  if (c.name == "generic_pt_test" && c.ops.empty()) throw ConfigError(at(path, "ops"), "generic_pt_test needs ops");
  return c;
}

Json criterion_to_json(const CriterionSpec& c) {
  Json j = {{"name", c.name}};
  if (c.cls) j["class"] = class_to_json(*c.cls);
  if (!c.ops.empty()) j["ops"] = c.ops;
  if (c.r) j["r"] = *c.r;
  if (!c.r_list.empty()) j["r_list"] = c.r_list;
  if (c.max_minor_size) j["max_minor_size"] = *c.max_minor_size;
  if (c.matrix != "pt") j["matrix"] = c.matrix;
  if (c.map) j["map"] = *c.map;
  if (c.side != "A") j["side"] = c.side;
  if (c.variant) j["variant"] = *c.variant;
  if (c.mode) j["mode"] = *c.mode;
  if (c.dims) j["dims"] = *c.dims;
  if (c.tol) j["tol"] = *c.tol;
  return j;
}

std::string line_and_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace

const std::vector<CriterionInfo>& criteria_catalog() {
  static const std::vector<CriterionInfo> catalog = {
      {"pt_norm_test", "trace norm of the partially transposed moment matrix exceeds its trace", "class, tol"},
      {"realign_norm_test", "trace norm of the realigned moment matrix exceeds its trace", "class, tol"},
      {"sylvester_scan", "negative principal minor of the (PT) moment matrix",
       "class, matrix (pt|moment), side, r_list, max_minor_size, tol"},
      {"min_eig_test", "negative eigenvalue of the (PT) moment matrix", "class, matrix (pt|moment), side, tol"},
      {"map_test", "partial positive map on one side of the moment matrix", "class, map, side, r, tol"},
      {"breuer_bell_test", "closed-form Breuer submatrix r=(1,6,9)", "variant (1|2), tol"},
      {"hz_two_mode", "<Na Nb> < |<a b+>|^2", "tol"},
      {"hz_three_mode", "three-mode moment inequalities", "variant (1|2), mode, tol"},
      {"breuer_inequality_test", "2(<Na Nb> + <Na^2 Nb>) < |<Na b> + <a+ b>|^2", "tol"},
      {"sv_cat_state_test", "determinant for f = (1, b, a b) on the PT state", "tol"},
      {"generic_pt_test", "determinant of a generic class on the PT state", "ops, tol"},
      {"state_level_tests", "PT norm, realignment norm and PPT of the density matrix", "dims, tol"},
  };
  return catalog;
}

PositiveMap map_from_json(const Json& value, const std::string& path) {
  Json obj = value;
  if (value.is_string()) obj = Json{{"type", value}};
  if (!obj.is_object()) throw ConfigError(path, "expected a map name or object");
  const auto type = get_string(require(obj, "type", path), at(path, "type"));
  return with_path(path, [&]() -> PositiveMap {
    if (type == "stormer") {
      allow_only(obj, path, {"type"});
      return stormer();
    }
    if (type == "choi") {
      allow_only(obj, path, {"type", "alpha", "beta", "gamma"});
      return ChoiMap(get_double(require(obj, "alpha", path), at(path, "alpha")),
                     get_double(require(obj, "beta", path), at(path, "beta")),
                     get_double(require(obj, "gamma", path), at(path, "gamma")));
    }
    if (type == "kossakowski") {
      allow_only(obj, path, {"type", "n", "rotation"});
      const int n = get_int(require(obj, "n", path), at(path, "n"));
      if (n < 2) throw ConfigError(at(path, "n"), "expected n >= 2");
      RealMatrix rot = RealMatrix::Identity(n * n - 1, n * n - 1);
      if (obj.contains("rotation")) rot = get_real_matrix(obj.at("rotation"), at(path, "rotation"));
      return KossakowskiMap(n, rot);
    }
    if (type == "breuer") {
      allow_only(obj, path, {"type", "phases", "rotation"});
      if (!obj.contains("phases")) {
        if (obj.contains("rotation")) throw ConfigError(at(path, "rotation"), "rotation needs phases");
        return BreuerMap(antidiagonal_breuer_unitary());
      }
      const auto& ph = obj.at("phases");
      if (!ph.is_array()) throw ConfigError(at(path, "phases"), "expected a list of angles");
      std::vector<double> phases;
      for (std::size_t i = 0; i < ph.size(); ++i) phases.push_back(get_double(ph[i], at(at(path, "phases"), i)));
      const auto d = static_cast<Eigen::Index>(2 * phases.size());
      RealMatrix rot = RealMatrix::Identity(d, d);
      if (obj.contains("rotation")) rot = get_real_matrix(obj.at("rotation"), at(path, "rotation"));
      return BreuerMap(breuer_unitary(phases, rot));
    }
    if (type == "identity" || type == "transpose") {
      allow_only(obj, path, {"type", "dim"});
      const int d = get_int(require(obj, "dim", path), at(path, "dim"));
      if (d < 1) throw ConfigError(at(path, "dim"), "expected a positive dimension");
      if (type == "identity") return IdentityMap{d};
      return TransposeMap{d};
    }
    throw ConfigError(at(path, "type"), "unknown map type '" + type + "'");
  });
}

OperatorClass class_from_spec(const std::optional<ClassSpec>& spec, const State& state) {
  if (!spec) return classes::first_order();
  if (spec->preset == "first_order") return classes::first_order();
  if (spec->preset == "stormer") return classes::stormer_class();
  if (spec->preset == "breuer1") return classes::breuer_class(1);
  if (spec->preset == "breuer2") return classes::breuer_class(2);
  if (spec->preset == "breuer3") return classes::breuer_class(3);
  if (spec->isolate) return multimode_class(state, *spec->isolate, spec->side_a, spec->side_b);
  return OperatorClass::parse(spec->side_a, spec->side_b);
}

RunConfig parse_config(const std::string& text) {
  Json root;
  try {
    root = Json::parse(text, nullptr, true, true);
  } catch (const Json::parse_error& e) {
    throw ConfigError("", "syntax error at " + line_and_column(text, e.byte) + ": " + e.what());
  }
  if (!root.is_object()) throw ConfigError("", "config must be an object");
  allow_only(root, "", {"schema", "state", "states", "criteria", "cutoff", "epsilon", "tol", "format"});
  if (root.contains("schema") && get_string(root.at("schema"), "schema") != kConfigSchema) {
    throw ConfigError("schema", std::string("expected ") + kConfigSchema);
  }
  RunConfig cfg;
  if (root.contains("state") && root.contains("states")) throw ConfigError("states", "give state or states, not both");
  if (root.contains("state")) cfg.states.push_back(parse_state(root.at("state"), "state"));
  if (root.contains("states")) {
    const auto& list = root.at("states");
    if (!list.is_array()) throw ConfigError("states", "expected a list");
    for (std::size_t i = 0; i < list.size(); ++i) cfg.states.push_back(parse_state(list[i], at("states", i)));
  }
  if (root.contains("criteria")) {
    const auto& list = root.at("criteria");
    if (!list.is_array()) throw ConfigError("criteria", "expected a list");
    for (std::size_t i = 0; i < list.size(); ++i) cfg.criteria.push_back(parse_criterion(list[i], at("criteria", i)));
  }
  if (root.contains("cutoff")) {
    cfg.cutoff = get_int(root.at("cutoff"), "cutoff");
    if (*cfg.cutoff < 1) throw ConfigError("cutoff", "expected a positive integer");
  }
  if (root.contains("epsilon")) {
    cfg.epsilon = get_double(root.at("epsilon"), "epsilon");
    if (!(*cfg.epsilon > 0.0 && *cfg.epsilon < 1.0)) throw ConfigError("epsilon", "expected 0 < epsilon < 1");
  }
  if (root.contains("tol")) {
    cfg.tol = get_double(root.at("tol"), "tol");
    if (*cfg.tol < 0.0) throw ConfigError("tol", "expected a non-negative tolerance");
  }
  if (root.contains("format")) {
    cfg.format = get_string(root.at("format"), "format");
    if (cfg.format != "human" && cfg.format != "structured") throw ConfigError("format", "expected human or structured");
  }
  return cfg;
}

Json config_to_json(const RunConfig& config) {
  Json j = {{"schema", kConfigSchema}};
  Json states = Json::array();
  for (const auto& s : config.states) states.push_back(state_to_json(s));
  j["states"] = states;
  Json crit = Json::array();
  for (const auto& c : config.criteria) crit.push_back(criterion_to_json(c));
  j["criteria"] = crit;
  if (config.cutoff) j["cutoff"] = *config.cutoff;
  if (config.epsilon) j["epsilon"] = *config.epsilon;
  if (config.tol) j["tol"] = *config.tol;
  j["format"] = config.format;
  return j;
}

State build_state(const StateSpec& spec, const BuildOptions& options) {
  switch (spec.kind) {
    case SourceKind::Library:
      return library_state(spec.name, spec.params, options);
    case SourceKind::Amplitudes: {
      const ModeCutoffs cut(spec.cutoffs);
      if (static_cast<std::size_t>(spec.amplitudes.size()) != cut.total()) {
        throw DimensionError("amplitude count " + std::to_string(spec.amplitudes.size()) + " does not match cutoffs");
      }
      return StateVector(cut, spec.amplitudes);
    }
    case SourceKind::Density: {
      const ModeCutoffs cut(spec.cutoffs);
      if (static_cast<std::size_t>(spec.density.rows()) != cut.total() || spec.density.rows() != spec.density.cols()) {
        throw DimensionError("density shape does not match cutoffs");
      }
      return DensityMatrix(cut, spec.density);
    }
    case SourceKind::Moments:
      return reconstruct_density(MomentSource(spec.moments), spec.assumed_dims);
  }
  throw InvalidStateError("unknown state source");
}

}  // namespace momsep::app
