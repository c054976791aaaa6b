#include <doctest.h>

#include <cmath>
#include <map>

#include "momsep/criteria.hpp"
#include "momsep/errors.hpp"
#include "momsep/posmaps.hpp"
#include "support/oracles.hpp"

using namespace momsep;

namespace {

// Coefficients of out(i, j) keyed by 1-based source (row, col).
std::map<std::pair<int, int>, double> coefficients(const PositiveMap& map, std::size_t d_a, std::size_t d_b, int i,
                                                   int j) {
  auto f = [&](const Matrix& m) { return apply_partial(MomentMatrix{m, d_a, d_b, ""}, map, Side::A).entries; };
  std::map<std::pair<int, int>, double> out;
  for (const auto& c : oracle::probe(f, static_cast<int>(d_a * d_b), i, j)) {
    CHECK(std::abs(c.value.imag()) < 1e-14);
    out[{c.row, c.col}] = c.value.real();
  }
  return out;
}

using Coeffs = std::map<std::pair<int, int>, double>;

}  // namespace

TEST_CASE("partial Stormer reproduces the published entry pattern") {
  const PositiveMap s = stormer();
  CHECK(coefficients(s, 3, 3, 2, 2) == Coeffs{{{1, 1}, 1.0}, {{2, 2}, 1.0}});
  CHECK(coefficients(s, 3, 3, 2, 3) == Coeffs{{{2, 3}, -1.0}});
  CHECK(coefficients(s, 3, 3, 2, 7) == Coeffs{{{2, 7}, -1.0}});
  CHECK(coefficients(s, 3, 3, 3, 2) == Coeffs{{{3, 2}, -1.0}});
  CHECK(coefficients(s, 3, 3, 3, 3) == Coeffs{{{2, 2}, 1.0}, {{3, 3}, 1.0}});
  CHECK(coefficients(s, 3, 3, 3, 7) == Coeffs{{{3, 7}, -1.0}});
  CHECK(coefficients(s, 3, 3, 7, 2) == Coeffs{{{7, 2}, -1.0}});
  CHECK(coefficients(s, 3, 3, 7, 3) == Coeffs{{{7, 3}, -1.0}});
  CHECK(coefficients(s, 3, 3, 7, 7) == Coeffs{{{7, 7}, 1.0}, {{9, 9}, 1.0}});
}

TEST_CASE("partial Breuer reproduces the published entry pattern") {
  const PositiveMap b = BreuerMap(antidiagonal_breuer_unitary());
  CHECK(coefficients(b, 4, 4, 2, 2) == Coeffs{{{1, 1}, 1.0}, {{4, 4}, 1.0}});
  CHECK(coefficients(b, 4, 4, 2, 5) == Coeffs{{{2, 5}, -1.0}, {{4, 7}, -1.0}});
  CHECK(coefficients(b, 4, 4, 5, 2) == Coeffs{{{5, 2}, -1.0}, {{7, 4}, -1.0}});
  CHECK(coefficients(b, 4, 4, 5, 5) == Coeffs{{{6, 6}, 1.0}, {{7, 7}, 1.0}});
}

TEST_CASE("anti-diagonal Breuer unitary") {
  Matrix expect = Matrix::Zero(4, 4);
  expect(0, 3) = 1.0;
  expect(1, 2) = 1.0;
  expect(2, 1) = -1.0;
  expect(3, 0) = -1.0;
  CHECK((antidiagonal_breuer_unitary() - expect).norm() < 1e-15);
}

TEST_CASE("Choi family parameters") {
  CHECK(ChoiMap::is_positive(2, 0, 1));
  CHECK_FALSE(ChoiMap::is_decomposable(2, 0, 1));
  CHECK(stormer().decomposable() == false);
  CHECK(ChoiMap(3, 0, 0).decomposable());
  CHECK_THROWS_AS(ChoiMap(0.5, 2, 2), InvalidMapError);
  CHECK_THROWS_AS(ChoiMap(1.5, 1, 0.1), InvalidMapError);
  CHECK_THROWS_AS(ChoiMap(2, 0, 0.5), InvalidMapError);
  Matrix a(3, 3);
  a << 1, 2, 3, 4, 5, 6, 7, 8, 9;
  const Matrix out = choi_apply(stormer(), a);
  CHECK(out(0, 0).real() == doctest::Approx(-1 + 2 * 1 + 9));
  CHECK(out(1, 1).real() == doctest::Approx(-5 + 1 + 2 * 5));
  CHECK(out(2, 2).real() == doctest::Approx(-9 + 5 + 2 * 9));
  CHECK(out(0, 1).real() == doctest::Approx(-2));
  CHECK(map_name(stormer()) == "stormer");
}

TEST_CASE("Gell-Mann generators are a complete orthonormal traceless set") {
  for (int n : {2, 3, 4}) {
    const auto g = gell_mann_generators(n);
    REQUIRE(g.size() == static_cast<std::size_t>(n * n - 1));
    for (std::size_t i = 0; i < g.size(); ++i) {
      CHECK(std::abs(g[i].trace()) < 1e-14);
      CHECK((g[i] - g[i].adjoint()).norm() < 1e-14);
      for (std::size_t j = 0; j < g.size(); ++j) {
        CHECK(std::abs((g[i] * g[j]).trace() - (i == j ? 1.0 : 0.0)) < 1e-14);
      }
    }
    // sum_i (g_i)_ab (g_i)_cd = delta_ad delta_bc - delta_ab delta_cd / n
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        for (int c = 0; c < n; ++c) {
          for (int d = 0; d < n; ++d) {
            Complex s = 0.0;
            for (const auto& gi : g) s += gi(a, b) * gi(c, d);
            const double expect = (a == d && b == c ? 1.0 : 0.0) - (a == b && c == d ? 1.0 / n : 0.0);
            CHECK(std::abs(s - expect) < 1e-14);
          }
        }
      }
    }
  }
}

TEST_CASE("Kossakowski maps") {
  const KossakowskiMap id3(3, RealMatrix::Identity(8, 8));
  oracle::Rng rng(31);
  const auto rho = oracle::random_density(ModeCutoffs({3}), rng).matrix();
  const Matrix mixed = Matrix::Identity(3, 3) / 3.0;
  CHECK((kossakowski_apply(id3, rho) - (mixed + (rho - mixed) / 2.0)).norm() < 1e-13);
  CHECK(std::abs(kossakowski_apply(id3, rho).trace() - 1.0) < 1e-13);
  const KossakowskiMap rotated(3, plane_rotation(8, 0, 7, 0.7));
  CHECK(map_dimension(rotated) == 3);
  RealMatrix improper = RealMatrix::Identity(8, 8);
  improper(0, 0) = -1.0;
  CHECK_THROWS_AS(KossakowskiMap(3, improper), InvalidMapError);
  CHECK_THROWS_AS(KossakowskiMap(3, RealMatrix::Identity(8, 8) * 2.0), InvalidMapError);
  CHECK_THROWS_AS(KossakowskiMap(3, RealMatrix::Identity(8, 8), Eigen::VectorXd::Ones(8)), InvalidMapError);
  CHECK_THROWS_AS(KossakowskiMap(3, RealMatrix::Identity(3, 3)), InvalidMapError);
}

TEST_CASE("Breuer map validation and formula") {
  CHECK_THROWS_AS(BreuerMap(Matrix::Identity(4, 4)), InvalidMapError);      // not skew
  CHECK_THROWS_AS(BreuerMap(Matrix::Zero(2, 2)), InvalidMapError);          // too small
  CHECK_THROWS_AS(breuer_unitary({0.0}, RealMatrix::Identity(4, 4)), DimensionError);
  const BreuerMap b(breuer_unitary({0.3, 1.1, -0.4}, plane_rotation(6, 1, 4, 0.9)));
  oracle::Rng rng(32);
  const Matrix a = oracle::random_density(ModeCutoffs({6}), rng).matrix();
  const Matrix& u = b.unitary();
  CHECK((breuer_apply(b, a) - (Matrix::Identity(6, 6) * a.trace() - a - u * a.transpose() * u.adjoint())).norm() <
        1e-13);
  // trace goes to (d - 2) Tr A
  CHECK(std::abs(breuer_apply(b, a).trace() - 4.0) < 1e-12);
}

TEST_CASE("partial maps on side B") {
  oracle::Rng rng(33);
  const auto rho = oracle::random_density(ModeCutoffs({2, 3}), rng);
  const auto m = build_moment_matrix(rho, OperatorClass::parse({"1", "a"}, {"1", "b", "Nb"}));
  const auto t = apply_partial(m, TransposeMap{3}, Side::B);
  CHECK((t.entries - partial_transpose(m, Side::B).entries).norm() < 1e-14);
  const auto i = apply_partial(m, IdentityMap{2}, Side::A);
  CHECK((i.entries - m.entries).norm() == 0.0);
  CHECK_THROWS_AS(apply_partial(m, stormer(), Side::A), DimensionError);
  // Stormer on side B of a 3x3-by-2 class equals the side-A image with the factors swapped
  const auto cls_b = OperatorClass::parse({"1", "a"}, {"1", "b", "b"});
  const auto mb = build_moment_matrix(rho, cls_b);
  CHECK_NOTHROW(apply_partial(mb, stormer(), Side::B));
}
