#include "momsep/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "momsep/errors.hpp"

namespace momsep {

namespace {

double hermitian_det(const Matrix& m) { return m.determinant().real(); }

double min_eigenvalue(const Matrix& m) {
  const Matrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

std::string format_r(const std::vector<int>& r) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
  os << ')';
  return os.str();
}

// Every strictly increasing subset of {1..n} with size <= max_size.
void for_each_subset(int n, int max_size, const std::function<void(const std::vector<int>&)>& visit) {
  std::vector<int> current;
  std::function<void(int)> rec = [&](int start) {
    if (!current.empty()) visit(current);
    if (static_cast<int>(current.size()) == max_size) return;
    for (int i = start; i <= n; ++i) {
      current.push_back(i);
      rec(i + 1);
      current.pop_back();
    }
  };
  rec(1);
}

// lhs < rhs strictly beyond tolerance; a nontrivial tie is flagged as boundary.
void decide_inequality(Verdict& v, double lhs, double rhs) {
  v.witnesses.push_back({"lhs", lhs});
  v.witnesses.push_back({"rhs", rhs});
  v.witnesses.push_back({"lhs_minus_rhs", lhs - rhs});
  v.threshold = 0.0;
  if (lhs < rhs - v.tolerance) {
    v.outcome = Outcome::Entangled;
  } else {
    v.outcome = Outcome::Inconclusive;
    v.boundary = std::abs(lhs - rhs) <= v.tolerance && rhs > v.tolerance;
  }
}

Monomial product_of(const std::vector<Monomial>& factors) {
  Monomial out;
  for (const auto& f : factors) out = out * f;
  return out;
}

void require_modes(const State& state, std::size_t needed, const char* what) {
  if (cutoffs_of(state).modes() < needed) {
    throw DimensionError(std::string(what) + " needs at least " + std::to_string(needed) + " modes");
  }
}

}  // namespace

const char* to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::Entangled:
      return "ENTANGLED";
    case Outcome::Inconclusive:
      return "INCONCLUSIVE";
    case Outcome::Separable:
      return "SEPARABLE";
  }
  return "?";
}

std::optional<double> Verdict::witness(const std::string& name) const {
  for (const auto& w : witnesses) {
    if (w.name == name) return w.value;
  }
  return std::nullopt;
}

namespace classes {

OperatorClass first_order() { return OperatorClass::parse({"1", "a"}, {"1", "b"}); }

OperatorClass stormer_class() { return OperatorClass::parse({"1", "a", "a"}, {"1", "b", "b"}); }

OperatorClass breuer_class(int variant) {
  switch (variant) {
    case 1:
      return OperatorClass::parse({"1", "a", "Na", "a^2"}, {"1", "b", "Nb", "b^2"});
    case 2:
      return OperatorClass::parse({"1", "a", "Na", "1"}, {"1", "b", "Nb", "1"});
    case 3:
      return OperatorClass::parse({"1", "a", "1", "1"}, {"1", "b", "1", "1"});
    default:
      throw IndexError("Breuer class variant must be 1, 2 or 3");
  }
}

}  // namespace classes

// ---------------------------------------------------------------------------
// Matrix-level tests

Verdict sylvester_scan(const Matrix& m, int max_minor_size, const std::vector<std::vector<int>>& r_list,
                       double tol) {
  if (m.rows() != m.cols()) throw DimensionError("Sylvester scan needs a square matrix");
  Verdict v;
  v.criterion = "sylvester_scan";
  v.tolerance = tol;
  double worst = std::numeric_limits<double>::infinity();
  std::vector<int> worst_r;
  std::size_t checked = 0;
  auto visit = [&](const std::vector<int>& r) {
    const double det = hermitian_det(principal_submatrix(m, r));
    ++checked;
    if (det < worst) {
      worst = det;
      worst_r = r;
    }
  };
  if (!r_list.empty()) {
    for (const auto& r : r_list) visit(r);
  } else {
    for_each_subset(static_cast<int>(m.rows()), std::max(1, max_minor_size), visit);
  }
  v.witnesses.push_back({"min_minor", worst});
  v.witnesses.push_back({"minors_checked", static_cast<double>(checked)});
  v.r = worst_r;
  v.outcome = worst < -tol ? Outcome::Entangled : Outcome::Inconclusive;
  if (!worst_r.empty()) v.witness_matrix = principal_submatrix(m, worst_r);
  v.note = "most negative principal minor at r=" + format_r(worst_r);
  return v;
}

Verdict min_eig_test(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) throw DimensionError("eigenvalue test needs a square matrix");
  Verdict v;
  v.criterion = "min_eig_test";
  v.tolerance = tol;
  const double ev = min_eigenvalue(m);
  v.witnesses.push_back({"min_eig", ev});
  v.outcome = ev < -tol ? Outcome::Entangled : Outcome::Inconclusive;
  v.witness_matrix = m;
  return v;
}

// ---------------------------------------------------------------------------
// Reordering tests

Verdict pt_norm_test(const State& state, const OperatorClass& cls, double tol) {
  const auto m = build_moment_matrix(state, cls);
  const auto pt = partial_transpose(m, Side::A);
  const double tr = m.entries.trace().real();
  const double nu = nu_gamma(m);
  Verdict v;
  v.criterion = "pt_norm_test";
  v.tolerance = tol;
  v.threshold = 1.0;
  v.operator_class = cls.to_string();
  v.side = "A";
  v.witnesses = {{"nu_gamma", nu}, {"trace_norm", nu * tr}, {"trace", tr}};
  v.outcome = nu > 1.0 + tol ? Outcome::Entangled : Outcome::Inconclusive;
  v.witness_matrix = pt.entries;
  return v;
}

Verdict realign_norm_test(const State& state, const OperatorClass& cls, double tol) {
  const auto m = build_moment_matrix(state, cls);
  const double tr = m.entries.trace().real();
  const double nu = nu_realign(m);
  Verdict v;
  v.criterion = "realign_norm_test";
  v.tolerance = tol;
  v.threshold = 1.0;
  v.operator_class = cls.to_string();
  v.witnesses = {{"nu_realign", nu}, {"trace_norm", nu * tr}, {"trace", tr}};
  v.outcome = nu > 1.0 + tol ? Outcome::Entangled : Outcome::Inconclusive;
  v.witness_matrix = realign(m).entries;
  return v;
}

// ---------------------------------------------------------------------------
// Positive-map tests

Verdict map_test(const State& state, const OperatorClass& cls, const PositiveMap& map, Side side,
                 const std::optional<std::vector<int>>& r, double tol) {
  const auto m = build_moment_matrix(state, cls);
  const auto transformed = apply_partial(m, map, side);
  const Matrix target = r ? principal_submatrix(transformed.entries, *r) : transformed.entries;
  Verdict v;
  v.criterion = "map_test";
  v.tolerance = tol;
  v.operator_class = cls.to_string();
  v.map = map_name(map);
  v.side = to_string(side);
  if (r) v.r = *r;
  const double ev = min_eigenvalue(target);
  v.witnesses = {{"min_eig", ev}, {"det", hermitian_det(target)}};
  v.outcome = ev < -tol ? Outcome::Entangled : Outcome::Inconclusive;
  v.witness_matrix = target;
  return v;
}

Verdict breuer_bell_test(const State& state, int variant, double tol) {
  if (variant != 1 && variant != 2) throw IndexError("Breuer Bell test uses class 1 or 2");
  require_modes(state, 2, "Breuer Bell test");
  const auto cls = classes::breuer_class(variant);
  const Matrix& m = build_moment_matrix(state, cls).entries;
  auto e = [&](int i, int j) { return m(i - 1, j - 1); };
  Matrix sub(3, 3);
  sub << e(2, 2) + e(3, 3), -e(1, 6) - e(3, 8), e(2, 10) + e(3, 11),
         -e(6, 1) - e(8, 3), e(5, 5) + e(8, 8), -e(6, 9) - e(8, 11),
         e(10, 2) + e(11, 3), -e(9, 6) - e(11, 8), e(10, 10) + e(11, 11);
  Verdict v;
  v.criterion = "breuer_bell_test";
  v.tolerance = tol;
  v.operator_class = cls.to_string();
  v.map = "breuer(d=4)";
  v.side = "A";
  v.r = {1, 6, 9};
  const double det = hermitian_det(sub);
  v.witnesses = {{"det", det}, {"min_eig", min_eigenvalue(sub)}};
  v.outcome = det < -tol ? Outcome::Entangled : Outcome::Inconclusive;
  v.witness_matrix = sub;
  return v;
}

// ---------------------------------------------------------------------------
// Moment inequalities

Verdict hz_two_mode(const State& state, const Bipartition& modes, double tol) {
  if (modes.a_modes.size() != 1 || modes.b_modes.size() != 1) {
    throw DimensionError("two-mode HZ test needs one mode on each side");
  }
  const int a = modes.a_modes[0], b = modes.b_modes[0];
  require_modes(state, static_cast<std::size_t>(std::max(a, b) + 1), "two-mode HZ test");
  const double na_nb = moment(state, product_of({Monomial::number(a), Monomial::number(b)})).real();
  const Complex a_bdag = moment(state, product_of({Monomial::annihilation(a), Monomial::creation(b)}));
  const double na = moment(state, Monomial::number(a)).real();
  const double nb = moment(state, Monomial::number(b)).real();
  const Complex ab = moment(state, product_of({Monomial::annihilation(a), Monomial::annihilation(b)}));

  Verdict v;
  v.criterion = "hz_two_mode";
  v.tolerance = tol;
  decide_inequality(v, na_nb, std::norm(a_bdag));
  v.witnesses.push_back({"second_lhs", na * nb});
  v.witnesses.push_back({"second_rhs", std::norm(ab)});
  if (na * nb < std::norm(ab) - tol) v.note = "second condition <Na><Nb> < |<ab>|^2 is also violated";
  Matrix w(2, 2);
  w << 1.0, a_bdag, std::conj(a_bdag), na_nb;
  v.witness_matrix = w;
  v.operator_class = "(1, " + mode_name(a) + " " + mode_name(b) + ")";
  return v;
}

Verdict generic_pt_test(const State& state, const GenericClass& cls, const Bipartition& modes, double tol) {
  const auto g = build_generic_moment_matrix(state, cls, true, modes);
  Verdict v;
  v.criterion = "generic_pt_test";
  v.tolerance = tol;
  v.operator_class = cls.to_string();
  const double det = hermitian_det(g.entries);
  v.witnesses = {{"det", det}, {"min_eig", min_eigenvalue(g.entries)}};
  v.outcome = det < -tol ? Outcome::Entangled : Outcome::Inconclusive;
  v.witness_matrix = g.entries;
  return v;
}

Verdict hz_three_mode(const State& state, int variant, int mode, double tol) {
  if (variant != 1 && variant != 2) throw IndexError("three-mode HZ variant must be 1 or 2");
  require_modes(state, 3, "three-mode HZ test");
  const auto bp = Bipartition::isolate(mode, static_cast<int>(cutoffs_of(state).modes()));
  if (bp.b_modes.size() != 2) throw DimensionError("three-mode HZ test needs exactly three modes");
  const int b = bp.b_modes[0], c = bp.b_modes[1];
  GenericClass cls;
  if (variant == 1) {
    cls.ops = {Monomial(),
               product_of({Monomial::annihilation(mode), Monomial::annihilation(b), Monomial::annihilation(c)})};
  } else {
    cls.ops = {Monomial::annihilation(mode), product_of({Monomial::annihilation(b), Monomial::annihilation(c)})};
  }
  const auto g = build_generic_moment_matrix(state, cls, true, bp);
  Verdict v;
  v.criterion = variant == 1 ? "hz_three_mode_1" : "hz_three_mode_2";
  v.tolerance = tol;
  v.operator_class = cls.to_string();
  decide_inequality(v, (g.entries(0, 0) * g.entries(1, 1)).real(), std::norm(g.entries(0, 1)));
  v.witness_matrix = g.entries;
  return v;
}

Verdict breuer_inequality_test(const State& state, double tol) {
  require_modes(state, 2, "Breuer inequality");
  auto mom = [&](const char* text) { return moment(state, Monomial::parse(text)); };
  const double na_nb = mom("a+ a b+ b").real();
  // Na^2 = a+^2 a^2 + a+ a
  const double na2_nb = mom("a+^2 a^2 b+ b").real() + na_nb;
  const Complex off = mom("a+ a b") + mom("a+ b");
  Verdict v;
  v.criterion = "breuer_inequality_test";
  v.tolerance = tol;
  v.map = "breuer(d=4)";
  v.operator_class = classes::breuer_class(2).to_string();
  v.r = {2, 5};
  decide_inequality(v, 2.0 * (na_nb + na2_nb), std::norm(off));
  Matrix w(2, 2);
  w << 2.0, -off, -std::conj(off), na_nb + na2_nb;
  v.witness_matrix = w;
  return v;
}

Verdict sv_cat_state_test(const State& state, double tol) {
  require_modes(state, 2, "cat-state test");
  auto v = generic_pt_test(state, GenericClass::parse({"1", "b", "a b"}), Bipartition::two_mode(), tol);
  v.criterion = "sv_cat_state_test";
  return v;
}

Bipartition multimode_bipartition(const State& state, int mode) {
  return Bipartition::isolate(mode, static_cast<int>(cutoffs_of(state).modes()));
}

OperatorClass multimode_class(const State& state, int mode, const std::vector<std::string>& side_a,
                              const std::vector<std::string>& side_b) {
  return OperatorClass::parse(side_a, side_b, multimode_bipartition(state, mode));
}

}  // namespace momsep
