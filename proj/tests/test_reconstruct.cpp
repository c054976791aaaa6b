#include <doctest.h>

#include <cmath>

#include "momsep/app.hpp"
#include "momsep/errors.hpp"
#include "momsep/reconstruct.hpp"
#include "support/oracles.hpp"

using namespace momsep;

namespace {

MomentTable thermal_table(double nbar, int dim) {
  MomentTable t;
  double fact = 1.0;
  for (int j = 0; j < dim; ++j) {
    if (j > 0) fact *= j;
    t.set(Monomial::ladder(0, j, j), fact * std::pow(nbar, j));
  }
  return t;
}

std::vector<int> v(std::initializer_list<int> x) { return x; }

}  // namespace

TEST_CASE("single-mode elements") {
  const State one = make_fock_state(v({1}), ModeCutoffs({2}));
  CHECK(std::abs(density_element(one, v({1}), v({1}), v({2})) - 1.0) < 1e-15);
  CHECK(std::abs(density_element(one, v({0}), v({0}), v({2}))) < 1e-15);
  MomentTable t;
  t.set(Monomial::number(0), 1.0);
  t.set(Monomial::ladder(0, 2, 2), 0.0);
  CHECK(std::abs(density_element(t, v({1}), v({1}), v({3})) - 1.0) < 1e-15);
  const State vac = make_fock_state(v({0}), ModeCutoffs({4}));
  CHECK(std::abs(density_element(vac, v({0}), v({0}), v({4})) - 1.0) < 1e-15);
}

TEST_CASE("singlet reconstruction is exact") {
  const auto s = app::library_state("singlet");
  const auto rho = reconstruct_density(s, v({2, 2}));
  CHECK((rho.matrix() - to_density(s).matrix()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("general reconstruction matches exact states beyond qubits") {
  oracle::Rng rng(51);
  const auto rho = oracle::random_density(ModeCutoffs({3, 2}), rng);
  CHECK((reconstruct_density(rho, v({3, 2})).matrix() - rho.matrix()).cwiseAbs().maxCoeff() < 1e-11);
  // high Fock states: early series terms grow but the guard stays quiet
  const State f = make_fock_state(v({6}), ModeCutoffs({8}));
  CHECK(std::abs(density_element(f, v({6}), v({6}), v({8})) - 1.0) < 1e-9);
  CHECK(std::abs(density_element(f, v({0}), v({0}), v({8}))) < 1e-9);
}

TEST_CASE("two-qubit formula") {
  oracle::Rng rng(52);
  for (int t = 0; t < 20; ++t) {
    const auto rho = oracle::random_density(ModeCutoffs({2, 2}), rng);
    const auto q = two_qubit_density(rho);
    CHECK((q.matrix() - rho.matrix()).cwiseAbs().maxCoeff() < 1e-10);
    const auto general = reconstruct_density(rho, v({2, 2}));
    CHECK((q.matrix() - general.matrix()).cwiseAbs().maxCoeff() < 1e-12);
    // round trip through the moments
    for (const auto& spec : two_qubit_moment_specs()) {
      CHECK(std::abs(moment(q, spec) - moment(rho, spec)) < 1e-10);
    }
  }
  const auto singlet = two_qubit_density(app::library_state("singlet"));
  CHECK(singlet.matrix()(1, 1).real() == doctest::Approx(0.5));
  CHECK(singlet.matrix()(1, 2).real() == doctest::Approx(-0.5));
  const auto zero = two_qubit_density(app::library_state("fock", {{"n", {0, 0}}}));
  CHECK(zero.matrix()(0, 0).real() == doctest::Approx(1.0));
  CHECK(zero.matrix().cwiseAbs().sum() == doctest::Approx(1.0));
}

TEST_CASE("two-qubit formula from a table and its failure modes") {
  const auto s = app::library_state("partial_example2");
  MomentTable t;
  for (const auto& spec : two_qubit_moment_specs()) t.set(spec, moment(s, spec));
  CHECK((two_qubit_density(t).matrix() - to_density(s).matrix()).cwiseAbs().maxCoeff() < 1e-12);

  MomentTable bad = t;
  bad.set(Monomial::number(0), 2.0);  // <Na> = 2 is impossible for a qubit
  CHECK_THROWS_AS(two_qubit_density(bad), InconsistentMomentsError);

  MomentTable partial;
  partial.set(Monomial::number(0), 0.5);
  try {
    two_qubit_density(partial);
    FAIL("expected a missing-moment error");
  } catch (const MissingMomentError& e) {
    CHECK(e.missing().size() == 14);  // 16 specs minus the identity and <Na>
  }
  CHECK_THROWS_AS(two_qubit_density(app::library_state("fock", {{"n", {2, 0}}})), InvalidStateError);
  CHECK_THROWS_AS(two_qubit_density(app::library_state("ghz3")), DimensionError);
}

TEST_CASE("moment tables") {
  MomentTable t;
  t.set(Monomial::parse("a+ b"), Complex(0.1, 0.2));
  CHECK(*t.lookup(Monomial::parse("a b+")) == Complex(0.1, -0.2));
  CHECK(*t.lookup(Monomial()) == Complex(1.0));
  CHECK_FALSE(t.lookup(Monomial::parse("a")).has_value());
  CHECK_THROWS_AS(t.set(Monomial::parse("a b+"), Complex(0.1, 0.2)), InconsistentMomentsError);
  CHECK_NOTHROW(t.set(Monomial::parse("a b+"), Complex(0.1, -0.2 + 1e-12)));
  // Hermitian specs must be real; overwriting them is fine
  CHECK_THROWS_AS(t.set(Monomial::number(0), Complex(0.5, 0.1)), InconsistentMomentsError);
  t.set(Monomial::number(0), 0.5);
  t.set(Monomial::number(0), 0.25);
  CHECK(*t.lookup(Monomial::number(0)) == Complex(0.25));
  const auto from = MomentTable::from_state(app::library_state("singlet"), v({2, 2}));
  CHECK(from.size() == 16);
}

TEST_CASE("divergence guard") {
  CHECK_THROWS_AS(density_element(thermal_table(1.0, 30), v({0}), v({0}), v({30})), DivergenceError);
  CHECK_THROWS_AS(density_element(thermal_table(2.0, 30), v({0}), v({0}), v({30})), DivergenceError);
  // n = 0.5: terms (-0.5)^j decay and the series gives 1 / (1 + n)
  const Complex p0 = density_element(thermal_table(0.5, 30), v({0}), v({0}), v({30}));
  CHECK(std::abs(p0 - 1.0 / 1.5) < 1e-8);
}

TEST_CASE("missing moments are listed") {
  MomentTable t;
  t.set(Monomial::number(0), 0.3);
  try {
    density_element(t, v({0}), v({0}), v({4}));
    FAIL("expected a missing-moment error");
  } catch (const MissingMomentError& e) {
    CHECK(e.missing() == std::vector<std::string>{"a+^2 a^2", "a+^3 a^3"});
  }
  CHECK_THROWS_AS(density_element(t, v({4}), v({0}), v({4})), IndexError);
  CHECK_THROWS_AS(density_element(app::library_state("singlet"), v({0}), v({0}), v({2})), DimensionError);
}

TEST_CASE("state-level tests") {
  const auto rho = reconstruct_density(app::library_state("singlet"), v({2, 2}));
  const auto verdicts = state_level_tests(rho, 2, 2);
  REQUIRE(verdicts.size() == 3);
  CHECK(*verdicts[0].witness("pt_norm") == doctest::Approx(2.0));
  CHECK(*verdicts[1].witness("realign_norm") == doctest::Approx(2.0));
  CHECK(*verdicts[2].witness("min_eig") == doctest::Approx(-0.5));
  for (const auto& x : verdicts) CHECK(x.entangled());

  const Matrix mixed22 = Matrix::Identity(4, 4) / 4.0;
  CHECK(state_level_tests(mixed22, 2, 2)[2].outcome == Outcome::Separable);
  const Matrix mixed23 = Matrix::Identity(6, 6) / 6.0;
  CHECK(state_level_tests(mixed23, 3, 2)[2].outcome == Outcome::Separable);
  const Matrix mixed33 = Matrix::Identity(9, 9) / 9.0;
  const auto three = state_level_tests(mixed33, 3, 3);
  CHECK(three[2].outcome == Outcome::Inconclusive);
  CHECK(three[0].outcome == Outcome::Inconclusive);
  CHECK_THROWS_AS(state_level_tests(mixed33, 2, 4), DimensionError);
}
