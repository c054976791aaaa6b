#include <doctest.h>

#include <cmath>

#include "momsep/errors.hpp"
#include "momsep/reorder.hpp"
#include "support/oracles.hpp"

using namespace momsep;

namespace {

// Source index (row*10 + col, 1-based) for every output position.
using Pattern = std::array<std::array<int, 4>, 4>;

const Pattern kPtPattern = {{{11, 21, 13, 23}, {12, 22, 14, 24}, {31, 41, 33, 43}, {32, 42, 34, 44}}};
// Transposed relative to the printed realignment display; same singular values.
const Pattern kRealignPattern = {{{11, 13, 31, 33}, {12, 14, 32, 34}, {21, 23, 41, 43}, {22, 24, 42, 44}}};

void check_pattern(const std::function<Matrix(const Matrix&)>& f, const Pattern& p) {
  for (int i = 1; i <= 4; ++i) {
    for (int j = 1; j <= 4; ++j) {
      const auto coeffs = oracle::probe(f, 4, i, j);
      REQUIRE(coeffs.size() == 1);
      CHECK(coeffs[0].row * 10 + coeffs[0].col == p[i - 1][j - 1]);
      CHECK(coeffs[0].value == Complex(1.0));
    }
  }
}

}  // namespace

TEST_CASE("partial transpose follows the published index pattern") {
  check_pattern([](const Matrix& m) { return partial_transpose(m, BlockLayout::moment(2, 2), Side::A); }, kPtPattern);
}

TEST_CASE("realignment index pattern") {
  check_pattern([](const Matrix& m) { return realign(m, BlockLayout::moment(2, 2)); }, kRealignPattern);
}

TEST_CASE("reorderings are involutions or invertible") {
  oracle::Rng rng(21);
  std::normal_distribution<double> n(0, 1);
  Matrix m(6, 6);
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) m(i, j) = Complex(n(rng), n(rng));
  }
  for (auto layout : {BlockLayout::moment(2, 3), BlockLayout::fock(2, 3)}) {
    for (Side s : {Side::A, Side::B}) {
      CHECK((partial_transpose(partial_transpose(m, layout, s), layout, s) - m).norm() < 1e-14);
    }
    const Matrix r = realign(m, layout);
    CHECK(r.rows() == 4);
    CHECK(r.cols() == 9);
    CHECK((unrealign(r, layout) - m).norm() < 1e-14);
    // both partial transposes together give the full transpose
    CHECK((partial_transpose(partial_transpose(m, layout, Side::A), layout, Side::B) - m.transpose()).norm() < 1e-14);
  }
}

TEST_CASE("side B transpose is the conjugate of side A for Hermitian matrices") {
  oracle::Rng rng(22);
  const auto rho = oracle::random_density(ModeCutoffs({2, 3}), rng);
  const auto layout = BlockLayout::moment(2, 3);
  const Matrix a = partial_transpose(rho.matrix(), layout, Side::A);
  const Matrix b = partial_transpose(rho.matrix(), layout, Side::B);
  CHECK((a.conjugate() - b).norm() < 1e-14);
}

TEST_CASE("trace norm") {
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = -1.0;
  d(1, 1) = 2.0;
  CHECK(trace_norm(d) == doctest::Approx(3.0));
  oracle::Rng rng(23);
  const auto rho = oracle::random_density(ModeCutoffs({3, 3}), rng);
  const Matrix pt = partial_transpose(rho.matrix(), BlockLayout::fock(3, 3), Side::A);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(pt);
  CHECK(trace_norm(pt) == doctest::Approx(eig.eigenvalues().cwiseAbs().sum()).epsilon(1e-12));
  CHECK(trace_norm(Matrix::Zero(3, 3)) == 0.0);
}

TEST_CASE("normalized norms") {
  Vector v = Vector::Zero(4);
  v(1) = 1.0;
  v(2) = -1.0;
  const State singlet = StateVector(ModeCutoffs({2, 2}), v);
  const auto cls = OperatorClass::parse({"1", "a"}, {"1", "b"});
  const double expect = (1.0 + std::sqrt(2.0)) / 2.0;
  CHECK(std::abs(nu_gamma(singlet, cls) - expect) < 1e-12);
  CHECK(std::abs(nu_realign(singlet, cls) - expect) < 1e-12);
  // unnormalized realigned trace norm is 1 + sqrt 2
  CHECK(std::abs(trace_norm(realign(build_moment_matrix(singlet, cls)).entries) - 2.0 * expect) < 1e-12);
  // a class whose moments all vanish on the vacuum has zero trace
  const State vac = make_fock_state(std::vector<int>{0, 0}, ModeCutoffs({2, 2}));
  CHECK_THROWS_AS(nu_gamma(vac, OperatorClass::parse({"a"}, {"b"})), DegenerateStateError);
}

TEST_CASE("bad layouts") {
  CHECK_THROWS_AS(partial_transpose(Matrix::Identity(5, 5), BlockLayout::moment(2, 2), Side::A), DimensionError);
  CHECK_THROWS_AS(realign(Matrix::Identity(4, 4), BlockLayout::moment(2, 3)), DimensionError);
  CHECK(parse_side("b") == Side::B);
  CHECK_THROWS(parse_side("C"));
}
