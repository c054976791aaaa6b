#include <algorithm>
#include <cmath>
#include <set>

#include "momsep/app.hpp"
#include "momsep/errors.hpp"

namespace momsep::app {

namespace {

Complex parse_complex(const Json& value, const std::string& path) {
  if (value.is_number()) return {value.get<double>(), 0.0};
  if (value.is_array() && value.size() == 2 && value[0].is_number() && value[1].is_number()) {
    return {value[0].get<double>(), value[1].get<double>()};
  }
  throw ConfigError(path, "expected a number or a [re, im] pair");
}

Complex complex_param(const Json& params, const std::string& key, Complex fallback) {
  if (!params.contains(key)) return fallback;
  return parse_complex(params.at(key), "params." + key);
}

void reject_unknown(const Json& params, const LibraryEntry& entry) {
  if (!params.is_object()) throw ConfigError("params", "expected an object");
  for (const auto& item : params.items()) {
    const bool known = std::any_of(entry.params.begin(), entry.params.end(),
                                   [&](const LibraryParam& p) { return p.name == item.key(); });
    if (!known) throw ConfigError("params." + item.key(), "unknown parameter for state '" + entry.name + "'");
  }
}

// Qubit-mode states: every mode has cutoff 2 unless overridden.
State qubit_state(int modes, const std::vector<std::pair<Complex, std::vector<int>>>& kets, const BuildOptions& opt) {
  const int cut = opt.cutoff.value_or(2);
  if (cut < 2) throw ConfigError("cutoff", "qubit-mode states need cutoff >= 2");
  const ModeCutoffs cutoffs(std::vector<int>(static_cast<std::size_t>(modes), cut));
  Vector amps = Vector::Zero(static_cast<Eigen::Index>(cutoffs.total()));
  for (const auto& [c, occ] : kets) amps(static_cast<Eigen::Index>(cutoffs.flat_index(occ))) += c;
  return StateVector(cutoffs, amps);
}

State coherent_state(const std::vector<CoherentTerm>& terms, const BuildOptions& opt) {
  const std::size_t modes = terms.front().amplitudes.size();
  std::vector<int> cut(modes, 1);
  for (const auto& t : terms) {
    for (std::size_t i = 0; i < modes; ++i) {
      const int need = opt.cutoff ? *opt.cutoff
                                  : required_coherent_cutoff(t.amplitudes[i], opt.epsilon / static_cast<double>(modes));
      cut[i] = std::max(cut[i], need);
    }
  }
  return make_coherent_superposition(terms, ModeCutoffs(cut), opt.epsilon);
}

}  // namespace

ConfigError::ConfigError(const std::string& path, const std::string& message)
    : ParseError(path.empty() ? message : path + ": " + message), path_(path) {}

const std::vector<LibraryEntry>& library_catalog() {
  static const std::vector<LibraryEntry> catalog = {
      {"singlet", "(|01> - |10>)/sqrt2 on two qubit modes", {}},
      {"bell_phi_plus", "(|00> + |11>)/sqrt2 on two qubit modes", {}},
      {"partial_example2", "(|00> + |01> + |10>)/sqrt3 on two qubit modes", {}},
      {"cat_prime",
       "N' (|alpha, -beta> - |-alpha, beta>), two-mode cat state",
       {{"alpha", "coherent amplitude of mode a", 0.3}, {"beta", "coherent amplitude of mode b", 0.2}}},
      {"cat_double_prime",
       "N'' (|alpha, beta> - |-alpha, -beta>), two-mode cat state",
       {{"alpha", "coherent amplitude of mode a", 0.3}, {"beta", "coherent amplitude of mode b", 0.2}}},
      {"ghz3", "(|000> + |111>)/sqrt2 on three qubit modes", {}},
      {"w3", "(|001> + |010> + |100>)/sqrt3 on three qubit modes", {}},
      {"product_coherent",
       "|alpha> (x) |beta>",
       {{"alpha", "coherent amplitude of mode a", 0.0}, {"beta", "coherent amplitude of mode b", 0.0}}},
      {"fock", "|n_1, n_2, ...>, one occupation per mode", {{"n", "occupation list", Json::array({0, 0})}}},
  };
  return catalog;
}

State library_state(const std::string& name, const Json& params, const BuildOptions& options) {
  const auto& catalog = library_catalog();
  const auto it = std::find_if(catalog.begin(), catalog.end(), [&](const LibraryEntry& e) { return e.name == name; });
  if (it == catalog.end()) throw ConfigError("name", "unknown library state '" + name + "'");
  const Json p = params.is_null() ? Json::object() : params;
  reject_unknown(p, *it);
  const double s2 = 1.0 / std::sqrt(2.0), s3 = 1.0 / std::sqrt(3.0);

  if (name == "singlet") return qubit_state(2, {{s2, {0, 1}}, {-s2, {1, 0}}}, options);
  if (name == "bell_phi_plus") return qubit_state(2, {{s2, {0, 0}}, {s2, {1, 1}}}, options);
  if (name == "partial_example2") return qubit_state(2, {{s3, {0, 0}}, {s3, {0, 1}}, {s3, {1, 0}}}, options);
  if (name == "ghz3") return qubit_state(3, {{s2, {0, 0, 0}}, {s2, {1, 1, 1}}}, options);
  if (name == "w3") return qubit_state(3, {{s3, {0, 0, 1}}, {s3, {0, 1, 0}}, {s3, {1, 0, 0}}}, options);

  if (name == "cat_prime" || name == "cat_double_prime" || name == "product_coherent") {
    const bool product = name == "product_coherent";
    const Complex alpha = complex_param(p, "alpha", product ? 0.0 : 0.3);
    const Complex beta = complex_param(p, "beta", product ? 0.0 : 0.2);
    if (product) return coherent_state({{1.0, {alpha, beta}}}, options);
    if (name == "cat_prime") return coherent_state({{1.0, {alpha, -beta}}, {-1.0, {-alpha, beta}}}, options);
    return coherent_state({{1.0, {alpha, beta}}, {-1.0, {-alpha, -beta}}}, options);
  }

  // fock
  std::vector<int> n = {0, 0};
  if (p.contains("n")) {
    const auto& v = p.at("n");
    if (!v.is_array() || v.empty()) throw ConfigError("params.n", "expected a non-empty list of occupations");
    n.clear();
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number_integer() || v[i].get<int>() < 0) {
        throw ConfigError("params.n[" + std::to_string(i) + "]", "expected a non-negative integer");
      }
      n.push_back(v[i].get<int>());
    }
  }
  std::vector<int> cut(n.size());
  for (std::size_t i = 0; i < n.size(); ++i) {
    cut[i] = options.cutoff.value_or(std::max(2, n[i] + 1));
    if (cut[i] <= n[i]) throw ConfigError("cutoff", "cutoff must exceed every occupation");
  }
  return make_fock_state(n, ModeCutoffs(cut));
}

}  // namespace momsep::app
