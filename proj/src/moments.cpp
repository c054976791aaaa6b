#include "momsep/moments.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "momsep/errors.hpp"

namespace momsep {

namespace {

// A state or Hermitian operator written as sum_k w_k |v_k><v_k|, embedded in
// cutoffs padded so that the monomials applied to each v_k never hit the
// truncation edge.
struct Ensemble {
  ModeCutoffs cutoffs;
  std::vector<double> weights;
  std::vector<Vector> vectors;
};

std::vector<int> padding_for(std::span<const Monomial> monomials, std::size_t modes) {
  std::vector<int> pad(modes, 0);
  for (const auto& m : monomials) {
    for (std::size_t i = 0; i < modes; ++i) {
      const auto p = m.powers(static_cast<int>(i));
      pad[i] = std::max(pad[i], p.creation + p.annihilation);
    }
  }
  return pad;
}

Ensemble ensemble_from_spectrum(const Eigen::VectorXd& values, const Matrix& vectors, const ModeCutoffs& cutoffs,
                                std::span<const int> padding) {
  ModeCutoffs padded = cutoffs.padded(padding);
  const double scale = values.cwiseAbs().maxCoeff();
  Ensemble out{padded, {}, {}};
  for (Eigen::Index k = 0; k < values.size(); ++k) {
    if (std::abs(values(k)) <= 1e-14 * scale) continue;  // rounding noise of the solver
    out.weights.push_back(values(k));
    out.vectors.push_back(embed(Vector(vectors.col(k)), cutoffs, padded));
  }
  return out;
}

Ensemble ensemble_from_hermitian(const Matrix& x, const ModeCutoffs& cutoffs,
                                 std::span<const int> padding) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(x);
  return ensemble_from_spectrum(solver.eigenvalues(), solver.eigenvectors(), cutoffs, padding);
}

Ensemble make_ensemble(const State& state, std::span<const int> padding) {
  if (const auto* pure = std::get_if<StateVector>(&state)) {
    ModeCutoffs padded = pure->cutoffs().padded(padding);
    return Ensemble{padded, {1.0}, {embed(pure->amplitudes(), pure->cutoffs(), padded)}};
  }
  const auto& rho = std::get<DensityMatrix>(state);
  return ensemble_from_spectrum(rho.eigenvalues(), rho.eigenvectors(), rho.cutoffs(), padding);
}

void check_span(const Monomial& m, const ModeCutoffs& cutoffs) {
  if (m.mode_span() > static_cast<int>(cutoffs.modes())) {
    throw DimensionError("monomial " + m.to_string() + " acts on a mode the state lacks");
  }
}

// Applies the monomial mode by mode: each factor acts along one tensor axis.
Vector apply_monomial(const Monomial& m, const Vector& v, const ModeCutoffs& cutoffs) {
  Vector out = v;
  const auto dims = cutoffs.dims();
  for (int mode = 0; mode < m.mode_span(); ++mode) {
    const auto powers = m.powers(mode);
    if (powers == ModePowers{}) continue;
    const int c = dims[mode];
    const Matrix op_t = single_mode_monomial(c, powers).transpose().cast<Complex>();
    Eigen::Index inner = 1;
    for (std::size_t j = static_cast<std::size_t>(mode) + 1; j < dims.size(); ++j) inner *= dims[j];
    const Eigen::Index block = inner * c;
    const Eigen::Index outer = out.size() / block;
    for (Eigen::Index o = 0; o < outer; ++o) {
      Eigen::Map<Matrix> slab(out.data() + o * block, inner, c);
      slab = (slab * op_t).eval();
    }
  }
  return out;
}

// Columns are monomial_j applied to vector.
Matrix apply_all(std::span<const Monomial> monomials, const Vector& v, const ModeCutoffs& cutoffs) {
  Matrix cols(v.size(), static_cast<Eigen::Index>(monomials.size()));
  for (std::size_t j = 0; j < monomials.size(); ++j) {
    cols.col(static_cast<Eigen::Index>(j)) = apply_monomial(monomials[j], v, cutoffs);
  }
  return cols;
}

// G_ij = sum_k w_k <bra_i v_k | ket_j v_k>.
Matrix gram(const Ensemble& ens, std::span<const Monomial> bra, std::span<const Monomial> ket) {
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(bra.size()), static_cast<Eigen::Index>(ket.size()));
  for (std::size_t k = 0; k < ens.vectors.size(); ++k) {
    const Matrix left = apply_all(bra, ens.vectors[k], ens.cutoffs);
    const Matrix right = apply_all(ket, ens.vectors[k], ens.cutoffs);
    out += ens.weights[k] * (left.adjoint() * right);
  }
  return out;
}

std::vector<Monomial> class_elements(const OperatorClass& cls) {
  std::vector<Monomial> out;
  out.reserve(cls.size());
  for (std::size_t l = 0; l < cls.d_b(); ++l) {
    for (std::size_t k = 0; k < cls.d_a(); ++k) out.push_back(cls.element(k, l));
  }
  return out;
}

MomentMatrix gram_moment_matrix(const Ensemble& ens, const OperatorClass& cls, std::string provenance) {
  const auto elements = class_elements(cls);
  return MomentMatrix{gram(ens, elements, elements), cls.d_a(), cls.d_b(), std::move(provenance)};
}

std::string provenance_of(const std::string& label, const std::string& what) {
  return label.empty() ? what : label + " | " + what;
}

void check_disjoint_cover(const Bipartition& bp) {
  std::set<int> seen;
  for (int m : bp.a_modes) {
    if (m < 0 || !seen.insert(m).second) throw DimensionError("invalid or repeated mode in bipartition");
  }
  for (int m : bp.b_modes) {
    if (m < 0 || !seen.insert(m).second) throw DimensionError("bipartition sides overlap");
  }
  if (bp.a_modes.empty() || bp.b_modes.empty()) throw DimensionError("bipartition side is empty");
}

bool within(const Monomial& m, const std::vector<int>& modes) {
  for (int mode : m.support()) {
    if (std::find(modes.begin(), modes.end(), mode) == modes.end()) return false;
  }
  return true;
}

}  // namespace

Bipartition Bipartition::isolate(int mode, int num_modes) {
  if (num_modes < 2) throw DimensionError("a bipartition needs at least two modes");
  if (mode < 0 || mode >= num_modes) throw IndexError("isolated mode out of range");
  Bipartition bp{{mode}, {}};
  for (int i = 0; i < num_modes; ++i) {
    if (i != mode) bp.b_modes.push_back(i);
  }
  return bp;
}

// ---------------------------------------------------------------------------
// OperatorClass

OperatorClass::OperatorClass(std::vector<Monomial> side_a, std::vector<Monomial> side_b,
                             Bipartition bipartition)
    : side_a_(std::move(side_a)), side_b_(std::move(side_b)), bipartition_(std::move(bipartition)) {
  if (side_a_.empty() || side_b_.empty()) throw DimensionError("operator class sides must be non-empty");
  check_disjoint_cover(bipartition_);
  for (const auto& m : side_a_) {
    if (!within(m, bipartition_.a_modes)) {
      throw DimensionError("A-side entry " + m.to_string() + " acts outside the A modes");
    }
  }
  for (const auto& m : side_b_) {
    if (!within(m, bipartition_.b_modes)) {
      throw DimensionError("B-side entry " + m.to_string() + " acts outside the B modes");
    }
  }
}

OperatorClass OperatorClass::parse(const std::vector<std::string>& side_a,
                                   const std::vector<std::string>& side_b, Bipartition bipartition) {
  std::vector<Monomial> a, b;
  for (const auto& s : side_a) a.push_back(Monomial::parse(s));
  for (const auto& s : side_b) b.push_back(Monomial::parse(s));
  return OperatorClass(std::move(a), std::move(b), std::move(bipartition));
}

Monomial OperatorClass::element(std::size_t k, std::size_t l) const {
  return side_a_.at(k) * side_b_.at(l);
}

void OperatorClass::check_modes(const ModeCutoffs& cutoffs) const {
  const int modes = static_cast<int>(cutoffs.modes());
  for (int m : bipartition_.a_modes) {
    if (m >= modes) throw DimensionError("operator class refers to mode " + mode_name(m) + " the state lacks");
  }
  for (int m : bipartition_.b_modes) {
    if (m >= modes) throw DimensionError("operator class refers to mode " + mode_name(m) + " the state lacks");
  }
}

std::string OperatorClass::to_string() const {
  std::ostringstream os;
  auto side = [&](const std::vector<Monomial>& ops) {
    os << '(';
    for (std::size_t i = 0; i < ops.size(); ++i) os << (i ? ", " : "") << ops[i].to_string();
    os << ')';
  };
  side(side_a_);
  os << " x ";
  side(side_b_);
  return os.str();
}

GenericClass GenericClass::parse(const std::vector<std::string>& ops) {
  GenericClass cls;
  for (const auto& s : ops) cls.ops.push_back(Monomial::parse(s));
  if (cls.ops.empty()) throw DimensionError("generic class must be non-empty");
  return cls;
}

std::string GenericClass::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < ops.size(); ++i) os << (i ? ", " : "") << ops[i].to_string();
  os << ')';
  return os.str();
}

// ---------------------------------------------------------------------------
// Moments

std::size_t flatten_index(std::size_t k, std::size_t l, std::size_t d_a, std::size_t d_b) {
  if (k < 1 || k > d_a || l < 1 || l > d_b) {
    throw IndexError("index pair (" + std::to_string(k) + ", " + std::to_string(l) +
                     ") outside " + std::to_string(d_a) + " x " + std::to_string(d_b));
  }
  return (l - 1) * d_a + k;
}

Complex moment(const State& state, const Monomial& spec) {
  const auto& cutoffs = cutoffs_of(state);
  check_span(spec, cutoffs);
  // <a^dag^n a^m> = <a^n psi | a^m psi>: only lowering operators are applied.
  std::vector<ModePowers> bra_powers, ket_powers;
  for (int i = 0; i < spec.mode_span(); ++i) {
    bra_powers.push_back({0, spec.powers(i).creation});
    ket_powers.push_back({0, spec.powers(i).annihilation});
  }
  const Monomial bra[] = {Monomial(bra_powers)};
  const Monomial ket[] = {Monomial(ket_powers)};
  const std::vector<int> none(cutoffs.modes(), 0);
  return gram(make_ensemble(state, none), bra, ket)(0, 0);
}

MomentMatrix build_moment_matrix(const State& state, const OperatorClass& cls, const std::string& label) {
  const auto& cutoffs = cutoffs_of(state);
  cls.check_modes(cutoffs);
  const auto elements = class_elements(cls);
  const auto ens = make_ensemble(state, padding_for(elements, cutoffs.modes()));
  return gram_moment_matrix(ens, cls, provenance_of(label, cls.to_string()));
}

MomentMatrix build_moment_matrix_of_pt_state(const State& state, const OperatorClass& cls,
                                             const std::string& label) {
  const auto& cutoffs = cutoffs_of(state);
  cls.check_modes(cutoffs);
  const auto elements = class_elements(cls);
  const auto ens = make_ensemble(state, padding_for(elements, cutoffs.modes()));
  const std::size_t da = cls.d_a(), db = cls.d_b(), n = cls.size();
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t w = 0; w < ens.vectors.size(); ++w) {
    const Matrix u = apply_all(elements, ens.vectors[w], ens.cutoffs);
    for (std::size_t l = 0; l < db; ++l) {
      for (std::size_t k = 0; k < da; ++k) {
        for (std::size_t lp = 0; lp < db; ++lp) {
          for (std::size_t kp = 0; kp < da; ++kp) {
            // bra f^A_k f^B_l', ket f^A_k' f^B_l
            const auto bra = static_cast<Eigen::Index>(lp * da + k);
            const auto ket = static_cast<Eigen::Index>(l * da + kp);
            out(static_cast<Eigen::Index>(l * da + k), static_cast<Eigen::Index>(lp * da + kp)) +=
                ens.weights[w] * u.col(bra).dot(u.col(ket));
          }
        }
      }
    }
  }
  return MomentMatrix{std::move(out), da, db, provenance_of(label, "PT state, " + cls.to_string())};
}

GenericMomentMatrix build_generic_moment_matrix(const State& state, const GenericClass& cls,
                                                bool conjugate_b, const Bipartition& bipartition) {
  if (cls.ops.empty()) throw DimensionError("generic class must be non-empty");
  const auto& cutoffs = cutoffs_of(state);
  for (const auto& m : cls.ops) check_span(m, cutoffs);
  const std::string what = cls.to_string() + (conjugate_b ? " on PT state" : "");
  if (!conjugate_b) {
    const auto ens = make_ensemble(state, padding_for(cls.ops, cutoffs.modes()));
    return {gram(ens, cls.ops, cls.ops), what};
  }
  check_disjoint_cover(bipartition);
  std::vector<int> all_modes = bipartition.a_modes;
  all_modes.insert(all_modes.end(), bipartition.b_modes.begin(), bipartition.b_modes.end());
  for (const auto& m : cls.ops) {
    if (!within(m, all_modes)) throw DimensionError("monomial " + m.to_string() + " outside the bipartition");
  }
  // Products A(f_p) B(f_q) for all p, q; entry (i, j) pairs (i, j) with (j, i).
  const std::size_t n = cls.ops.size();
  std::vector<Monomial> mixed;
  mixed.reserve(n * n);
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = 0; q < n; ++q) {
      mixed.push_back(cls.ops[p].restricted_to(bipartition.a_modes) *
                      cls.ops[q].restricted_to(bipartition.b_modes));
    }
  }
  const auto ens = make_ensemble(state, padding_for(mixed, cutoffs.modes()));
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t w = 0; w < ens.vectors.size(); ++w) {
    const Matrix u = apply_all(mixed, ens.vectors[w], ens.cutoffs);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) +=
            ens.weights[w] * u.col(static_cast<Eigen::Index>(i * n + j)).dot(u.col(static_cast<Eigen::Index>(j * n + i)));
      }
    }
  }
  return {std::move(out), what};
}

MomentMatrix moment_matrix_of_operator(const Matrix& hermitian, const ModeCutoffs& cutoffs,
                                       const OperatorClass& cls) {
  const auto n = static_cast<Eigen::Index>(cutoffs.total());
  if (hermitian.rows() != n || hermitian.cols() != n) throw DimensionError("operator does not match cutoffs");
  if ((hermitian - hermitian.adjoint()).cwiseAbs().maxCoeff() > 1e-10) {
    throw InvalidStateError("operator is not Hermitian");
  }
  cls.check_modes(cutoffs);
  const auto elements = class_elements(cls);
  const auto ens = ensemble_from_hermitian(hermitian, cutoffs, padding_for(elements, cutoffs.modes()));
  return gram_moment_matrix(ens, cls, "operator | " + cls.to_string());
}

Matrix principal_submatrix(const Matrix& matrix, std::span<const int> r) {
  if (r.empty()) throw IndexError("empty index list");
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (r[i] < 1 || r[i] > matrix.rows() || r[i] > matrix.cols()) {
      throw IndexError("index " + std::to_string(r[i]) + " outside matrix of size " +
                       std::to_string(matrix.rows()));
    }
    if (i > 0 && r[i] <= r[i - 1]) throw IndexError("indices must be strictly increasing");
  }
  const auto n = static_cast<Eigen::Index>(r.size());
  Matrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) out(i, j) = matrix(r[i] - 1, r[j] - 1);
  }
  return out;
}

}  // namespace momsep
