#include <chrono>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "momsep/app.hpp"

namespace momsep::app {

namespace {

State lib(const std::string& name) { return library_state(name); }

State three_mode_example() {
  // (|011> + |100>)/sqrt2
  const ModeCutoffs cut({2, 2, 2});
  Vector v = Vector::Zero(8);
  v(static_cast<Eigen::Index>(cut.flat_index(std::vector<int>{0, 1, 1}))) = 1.0;
  v(static_cast<Eigen::Index>(cut.flat_index(std::vector<int>{1, 0, 0}))) = 1.0;
  return StateVector(cut, v);
}

double entry(const Matrix& m, int i, int j) { return m(i - 1, j - 1).real(); }

double witness(const Verdict& v, const std::string& name) { return v.witness(name).value_or(std::nan("")); }

Matrix pt_matrix(const State& s, const OperatorClass& cls) {
  return partial_transpose(build_moment_matrix(s, cls)).entries;
}

double det(const Matrix& m) { return m.determinant().real(); }

Matrix stormer_sub(const State& s) {
  return *map_test(s, classes::stormer_class(), stormer(), Side::A, std::vector<int>{2, 3, 7}).witness_matrix;
}

Verdict breuer(const State& s, int variant, std::vector<int> r) {
  return map_test(s, classes::breuer_class(variant), BreuerMap(antidiagonal_breuer_unitary()), Side::A, r);
}

}  // namespace

std::vector<Fixture> regression_fixtures() {
  const double nu_singlet = (1.0 + std::sqrt(2.0)) / 2.0;
  const auto fo = classes::first_order();
  std::vector<Fixture> f;
  auto add = [&](std::string name, double expected, double tol, std::function<double()> fn) {
    f.push_back({std::move(name), expected, tol, std::move(fn)});
  };

  // Singlet, first-order class.
  add("singlet moment M22", 0.5, 1e-12, [=] { return entry(build_moment_matrix(lib("singlet"), fo).entries, 2, 2); });
  add("singlet moment M23", -0.5, 1e-12, [=] { return entry(build_moment_matrix(lib("singlet"), fo).entries, 2, 3); });
  add("singlet nu_gamma", nu_singlet, 1e-9, [=] { return nu_gamma(lib("singlet"), fo); });
  add("singlet nu_realign", nu_singlet, 1e-9, [=] { return nu_realign(lib("singlet"), fo); });
  add("singlet det PT", -1.0 / 16.0, 1e-12, [=] { return det(pt_matrix(lib("singlet"), fo)); });
  add("singlet min eig PT", (1.0 - std::sqrt(2.0)) / 2.0, 1e-9,
      [=] { return witness(min_eig_test(pt_matrix(lib("singlet"), fo)), "min_eig"); });
  add("singlet PT minor r=(1,4)", -0.25, 1e-12,
      [=] { return witness(sylvester_scan(pt_matrix(lib("singlet"), fo), 4, {{1, 4}}), "min_minor"); });
  add("singlet f=(1,ab) PT det", -0.25, 1e-12, [] {
    return witness(generic_pt_test(lib("singlet"), GenericClass::parse({"1", "a b"}), Bipartition::two_mode()), "det");
  });
  add("singlet hz_two_mode", -0.25, 1e-12, [] { return witness(hz_two_mode(lib("singlet")), "lhs_minus_rhs"); });

  // (|00> + |01> + |10>)/sqrt3
  add("partial superposition moment M12", 1.0 / 3.0, 1e-12,
      [=] { return entry(build_moment_matrix(lib("partial_example2"), fo).entries, 1, 2); });
  add("partial superposition moment M23", 1.0 / 3.0, 1e-12,
      [=] { return entry(build_moment_matrix(lib("partial_example2"), fo).entries, 2, 3); });
  add("partial superposition nu_gamma", 1.1891, 5e-5, [=] { return nu_gamma(lib("partial_example2"), fo); });
  add("partial superposition nu_realign", 1.1891, 5e-5, [=] { return nu_realign(lib("partial_example2"), fo); });
  add("partial superposition det PT", -1.0 / 81.0, 1e-12, [=] { return det(pt_matrix(lib("partial_example2"), fo)); });
  add("partial superposition PT minor r=(1,4)", -1.0 / 9.0, 1e-12,
      [=] { return witness(sylvester_scan(pt_matrix(lib("partial_example2"), fo), 4, {{1, 4}}), "min_minor"); });
  add("partial superposition PT r=(1,4) min eig", (3.0 - std::sqrt(13.0)) / 6.0, 1e-9, [=] {
    const Matrix pt = pt_matrix(lib("partial_example2"), fo);
    return witness(min_eig_test(principal_submatrix(pt, std::vector<int>{1, 4})), "min_eig");
  });
  add("partial superposition f=(1,ab) PT M12", 1.0 / 3.0, 1e-12, [] {
    return entry(build_generic_moment_matrix(lib("partial_example2"), GenericClass::parse({"1", "a b"}), true).entries,
                 1, 2);
  });

  // Two-mode cat states.
  for (const char* cat : {"cat_prime", "cat_double_prime"}) {
    const std::string n = cat;
    add(n + " nu_realign", 1.1666, 1e-4, [=] { return nu_realign(lib(n), fo); });
    add(n + " nu_gamma", 1.1783, 1e-4, [=] { return nu_gamma(lib(n), fo); });
    add(n + " sv_cat_state_test entangled", 1.0, 0.0, [=] { return sv_cat_state_test(lib(n)).entangled() ? 1.0 : 0.0; });
  }

  // Stormer map on (1,a,a) x (1,b,b), r = (2,3,7).
  add("stormer singlet entry (1,1)", 1.5, 1e-12, [] { return stormer_sub(lib("singlet"))(0, 0).real(); });
  add("stormer singlet entry (1,2)", -0.5, 1e-12, [] { return stormer_sub(lib("singlet"))(0, 1).real(); });
  add("stormer singlet det", -0.25, 1e-12, [] { return det(stormer_sub(lib("singlet"))); });
  add("stormer partial superposition entry (1,1)", 4.0 / 3.0, 1e-12, [] { return stormer_sub(lib("partial_example2"))(0, 0).real(); });
  add("stormer partial superposition det", -1.0 / 27.0, 1e-12, [] { return det(stormer_sub(lib("partial_example2"))); });

  // Breuer map with the anti-diagonal unitary.
  add("breuer f1 singlet r=(2,5) det", -0.25, 1e-12, [] { return witness(breuer(lib("singlet"), 1, {2, 5}), "det"); });
  add("breuer f2 singlet r=(2,5) det", -0.25, 1e-12, [] { return witness(breuer(lib("singlet"), 2, {2, 5}), "det"); });
  add("breuer f2 singlet r=(2,5) entry (1,1)", 2.0, 1e-12,
      [] { return breuer(lib("singlet"), 2, {2, 5}).witness_matrix->coeff(0, 0).real(); });
  add("breuer f3 singlet r=(2,5) min eig >= 0", 1.0, 0.0,
      [] { return witness(breuer(lib("singlet"), 3, {2, 5}), "min_eig") >= 0.0 ? 1.0 : 0.0; });
  add("breuer f3 singlet r=(2,5,7,8) det", -0.25, 1e-12,
      [] { return witness(breuer(lib("singlet"), 3, {2, 5, 7, 8}), "det"); });
  add("breuer f1 bell r=(1,6,9) det", -0.25, 1e-12, [] { return witness(breuer(lib("bell_phi_plus"), 1, {1, 6, 9}), "det"); });
  add("breuer f2 bell r=(1,6,9) det", -0.25, 1e-12, [] { return witness(breuer(lib("bell_phi_plus"), 2, {1, 6, 9}), "det"); });
  add("breuer_bell_test f1 bell det", -0.25, 1e-12, [] { return witness(breuer_bell_test(lib("bell_phi_plus"), 1), "det"); });
  add("breuer_inequality singlet", -0.25, 1e-12,
      [] { return witness(breuer_inequality_test(lib("singlet")), "lhs_minus_rhs"); });

  // Multimode inequalities.
  add("three-mode (|011>+|100>) lhs", 0.0, 1e-12, [] { return witness(hz_three_mode(three_mode_example(), 1), "lhs"); });
  add("three-mode (|011>+|100>) rhs", 0.25, 1e-12, [] { return witness(hz_three_mode(three_mode_example(), 1), "rhs"); });
  add("ghz3 variant-2 boundary", 1.0, 0.0, [] {
    const auto v = hz_three_mode(lib("ghz3"), 2);
    return v.boundary && v.outcome == Outcome::Inconclusive ? 1.0 : 0.0;
  });
  return f;
}

std::size_t RegressionReport::failures() const {
  std::size_t n = 0;
  for (const auto& r : results) n += r.passed ? 0 : 1;
  return n;
}

RegressionReport run_regression(const std::vector<Fixture>& fixtures) {
  const auto start = std::chrono::steady_clock::now();
  RegressionReport report;
  for (const auto& fx : fixtures) {
    FixtureResult r;
    r.name = fx.name;
    r.expected = fx.expected;
    r.tolerance = fx.tolerance;
    try {
      r.actual = fx.compute();
      r.passed = std::abs(r.actual - r.expected) <= r.tolerance;
    } catch (const std::exception& e) {
      r.actual = std::nan("");
      r.error = e.what();
    }
    report.results.push_back(std::move(r));
  }
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

Json regression_to_json(const RegressionReport& report) {
  Json items = Json::array();
  for (const auto& r : report.results) {
    Json j = {{"name", r.name}, {"expected", r.expected}, {"actual", r.actual}, {"tolerance", r.tolerance},
              {"passed", r.passed}};
    if (!r.error.empty()) j["error"] = r.error;
    items.push_back(j);
  }
  return {{"schema", kRegressionSchema},
          {"fixtures", items},
          {"passed", report.results.size() - report.failures()},
          {"failed", report.failures()},
          {"seconds", report.seconds}};
}

std::string render_regression(const RegressionReport& report) {
  std::ostringstream os;
  for (const auto& r : report.results) {
    os << (r.passed ? "pass  " : "FAIL  ") << std::left << std::setw(44) << r.name << std::setprecision(12)
       << " expected " << r.expected << "  got " << r.actual << "  tol " << std::setprecision(2) << r.tolerance;
    if (!r.error.empty()) os << "  error: " << r.error;
    os << "\n";
  }
  os << (report.results.size() - report.failures()) << " passed, " << report.failures() << " failed in "
     << std::setprecision(3) << report.seconds << " s\n";
  return os.str();
}

}  // namespace momsep::app
