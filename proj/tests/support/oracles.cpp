#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>

namespace oracle {

namespace {

Matrix gaussian(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix g(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) g(i, j) = Complex(n(rng), n(rng));
  }
  return g;
}

int max_power(const momsep::Monomial& m) {
  int p = 0;
  for (const auto& mp : m.all_powers()) p = std::max(p, mp.creation + mp.annihilation);
  return p;
}

ModeCutoffs grow(const ModeCutoffs& c, int pad) {
  std::vector<int> out(c.dims().begin(), c.dims().end());
  for (auto& x : out) x += pad;
  return ModeCutoffs(out, 1 << 20);
}

}  // namespace

StateVector random_pure(const ModeCutoffs& cutoffs, Rng& rng) {
  return StateVector(cutoffs, gaussian(static_cast<Eigen::Index>(cutoffs.total()), 1, rng).col(0));
}

DensityMatrix random_density(const ModeCutoffs& cutoffs, Rng& rng, int rank) {
  const auto n = static_cast<Eigen::Index>(cutoffs.total());
  const Matrix g = gaussian(n, rank > 0 ? rank : n, rng);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix(cutoffs, 0.5 * (rho + rho.adjoint()));
}

DensityMatrix random_separable(int cutoff_a, int cutoff_b, int terms, Rng& rng) {
  std::uniform_real_distribution<double> w(0.05, 1.0);
  std::uniform_int_distribution<int> rank_a(1, cutoff_a), rank_b(1, cutoff_b);
  std::vector<std::pair<double, DensityMatrix>> parts;
  for (int t = 0; t < terms; ++t) {
    const auto a = random_density(ModeCutoffs({cutoff_a}), rng, rank_a(rng));
    const auto b = random_density(ModeCutoffs({cutoff_b}), rng, rank_b(rng));
    parts.emplace_back(w(rng), momsep::tensor_product(a, b));
  }
  return momsep::mixture(parts);
}

momsep::OperatorClass random_class(Rng& rng, int max_power, int max_entries) {
  std::uniform_int_distribution<int> pw(0, max_power), count(1, max_entries);
  auto side = [&](int mode) {
    std::vector<momsep::Monomial> out;
    const int n = count(rng);
    for (int i = 0; i < n; ++i) out.push_back(momsep::Monomial::ladder(mode, pw(rng), pw(rng)));
    return out;
  };
  auto a = side(0);
  auto b = side(1);
  return momsep::OperatorClass(a, b);
}

Complex dense_moment(const DensityMatrix& rho, const momsep::Monomial& spec) {
  const auto big = grow(rho.cutoffs(), max_power(spec) + 1);
  const Matrix r = momsep::embed(rho.matrix(), rho.cutoffs(), big);
  return (r * momsep::monomial_matrix(spec, big)).trace();
}

Matrix dense_moment_matrix(const DensityMatrix& rho, const momsep::OperatorClass& cls) {
  int pad = 0;
  for (const auto& m : cls.side_a()) pad = std::max(pad, max_power(m));
  int pad_b = 0;
  for (const auto& m : cls.side_b()) pad_b = std::max(pad_b, max_power(m));
  const auto big = grow(rho.cutoffs(), 2 * (pad + pad_b) + 1);
  const Matrix r = momsep::embed(rho.matrix(), rho.cutoffs(), big);
  const auto n = static_cast<Eigen::Index>(cls.size());
  std::vector<Matrix> f;
  for (std::size_t l = 0; l < cls.d_b(); ++l) {
    for (std::size_t k = 0; k < cls.d_a(); ++k) f.push_back(momsep::monomial_matrix(cls.element(k, l), big));
  }
  // Tr(r F_i^dag F_j) = sum(conj(F_i) .* (F_j r))
  std::vector<Matrix> fr;
  for (const auto& x : f) fr.push_back(x * r);
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      m(i, j) = f[static_cast<std::size_t>(i)].conjugate().cwiseProduct(fr[static_cast<std::size_t>(j)]).sum();
    }
  }
  return m;
}

Matrix dense_gram(const DensityMatrix& rho, const std::vector<momsep::Monomial>& ops, int mode) {
  int pad = 0;
  for (const auto& m : ops) pad = std::max(pad, max_power(m));
  const auto big = grow(rho.cutoffs(), 2 * pad + 1);
  const Matrix r = momsep::embed(rho.matrix(), rho.cutoffs(), big);
  std::vector<Matrix> f;
  for (const auto& m : ops) {
    const auto p = m.powers(mode);
    f.push_back(momsep::monomial_matrix(momsep::Monomial::ladder(0, p.creation, p.annihilation), big));
  }
  const auto n = static_cast<Eigen::Index>(ops.size());
  Matrix g(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      g(i, j) = (r * f[static_cast<std::size_t>(i)].adjoint() * f[static_cast<std::size_t>(j)]).trace();
    }
  }
  return g;
}

Complex coherent_moment(const std::vector<momsep::CoherentTerm>& terms, const momsep::Monomial& spec) {
  Complex num = 0.0, den = 0.0;
  for (const auto& bra : terms) {
    for (const auto& ket : terms) {
      Complex overlap = std::conj(bra.coefficient) * ket.coefficient;
      Complex value = overlap;
      for (std::size_t i = 0; i < ket.amplitudes.size(); ++i) {
        const Complex a = ket.amplitudes[i], b = bra.amplitudes[i];
        const Complex o = std::exp(-0.5 * std::norm(a) - 0.5 * std::norm(b) + std::conj(b) * a);
        const auto p = spec.powers(static_cast<int>(i));
        overlap *= o;
        value *= o * std::pow(std::conj(b), p.creation) * std::pow(a, p.annihilation);
      }
      num += value;
      den += overlap;
    }
  }
  return num / den;
}

std::vector<Coefficient> probe(const std::function<Matrix(const Matrix&)>& f, int n, int i, int j) {
  std::vector<Coefficient> out;
  for (int k = 0; k < n; ++k) {
    for (int l = 0; l < n; ++l) {
      Matrix e = Matrix::Zero(n, n);
      e(k, l) = 1.0;
      const Complex c = f(e)(i - 1, j - 1);
      if (std::abs(c) > 1e-12) out.push_back({k + 1, l + 1, c});
    }
  }
  return out;
}

}  // namespace oracle

namespace oracle {

std::vector<momsep::Verdict> criteria_battery(const momsep::State& state, double tol) {
  using namespace momsep;
  std::vector<Verdict> out;
  const auto fo = classes::first_order();
  const Matrix pt = partial_transpose(build_moment_matrix(state, fo)).entries;
  out.push_back(pt_norm_test(state, fo, tol));
  out.push_back(realign_norm_test(state, fo, tol));
  out.push_back(sylvester_scan(pt, 4, {}, tol));
  out.push_back(min_eig_test(pt, tol));
  const auto big = OperatorClass::parse({"1", "a", "Na"}, {"1", "b", "Nb"});
  out.push_back(pt_norm_test(state, big, tol));
  out.push_back(realign_norm_test(state, big, tol));
  out.push_back(min_eig_test(partial_transpose(build_moment_matrix(state, big)).entries, tol));
  out.push_back(map_test(state, classes::stormer_class(), stormer(), Side::A, std::vector<int>{2, 3, 7}, tol));
  out.push_back(map_test(state, classes::stormer_class(), stormer(), Side::A, std::nullopt, tol));
  out.push_back(map_test(state, big, stormer(), Side::B, std::nullopt, tol));
  const BreuerMap breuer(antidiagonal_breuer_unitary());
  for (int v : {1, 2, 3}) {
    out.push_back(map_test(state, classes::breuer_class(v), breuer, Side::A, std::vector<int>{2, 5}, tol));
    out.push_back(map_test(state, classes::breuer_class(v), breuer, Side::A, std::nullopt, tol));
  }
  out.push_back(map_test(state, classes::breuer_class(3), breuer, Side::A, std::vector<int>{2, 5, 7, 8}, tol));
  out.push_back(map_test(state, big, KossakowskiMap(3, plane_rotation(8, 2, 5, 1.1)), Side::A, std::nullopt, tol));
  out.push_back(breuer_bell_test(state, 1, tol));
  out.push_back(breuer_bell_test(state, 2, tol));
  out.push_back(hz_two_mode(state, Bipartition::two_mode(), tol));
  out.push_back(breuer_inequality_test(state, tol));
  out.push_back(sv_cat_state_test(state, tol));
  out.push_back(generic_pt_test(state, GenericClass::parse({"1", "a b"}), Bipartition::two_mode(), tol));
  out.push_back(generic_pt_test(state, GenericClass::parse({"a", "b+", "a b"}), Bipartition::two_mode(), tol));
  const auto& cut = cutoffs_of(state);
  if (cut.total() <= 36) {
    for (auto& v : state_level_tests(to_density(state), static_cast<std::size_t>(cut[0]),
                                     static_cast<std::size_t>(cut[1]), tol)) {
      out.push_back(std::move(v));
    }
  }
  return out;
}

momsep::DensityMatrix random_coherent_separable(int terms, double max_amp, Rng& rng) {
  using namespace momsep;
  std::uniform_real_distribution<double> r(0.0, max_amp), phase(0.0, 6.283185307179586), w(0.05, 1.0);
  std::vector<std::array<Complex, 2>> amps;
  for (int t = 0; t < terms; ++t) amps.push_back({std::polar(r(rng), phase(rng)), std::polar(r(rng), phase(rng))});
  int cut = 2;
  for (const auto& a : amps) {
    for (const auto& x : a) cut = std::max(cut, required_coherent_cutoff(x, 1e-10));
  }
  const ModeCutoffs cutoffs({cut, cut});
  // summed directly: one validation of the final matrix instead of one per term
  const auto n = static_cast<Eigen::Index>(cutoffs.total());
  Matrix rho = Matrix::Zero(n, n);
  for (const auto& a : amps) {
    const std::vector<CoherentTerm> one = {{1.0, {a[0], a[1]}}};
    const Vector v = make_coherent_superposition(one, cutoffs, 1e-8).amplitudes();
    rho += w(rng) * v * v.adjoint();
  }
  rho /= rho.trace().real();
  return DensityMatrix(cutoffs, rho);
}

}  // namespace oracle
