#include "momsep/fock.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "momsep/errors.hpp"

namespace momsep {

namespace {

constexpr double kNormTolerance = 1e-12;
constexpr double kHermitianTolerance = 1e-12;
constexpr double kTraceTolerance = 1e-12;
constexpr double kMinEigenvalue = -1e-10;

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Vector kron(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

std::vector<int> concat(std::span<const int> a, std::span<const int> b) {
  std::vector<int> out(a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// ModeCutoffs

ModeCutoffs::ModeCutoffs(std::vector<int> cutoffs, std::size_t max_total)
    : cutoffs_(std::move(cutoffs)) {
  if (cutoffs_.empty()) throw DimensionError("at least one mode is required");
  for (int c : cutoffs_) {
    if (c < 1) throw DimensionError("every mode cutoff must be >= 1");
    if (total_ > max_total / static_cast<std::size_t>(c)) {
      throw DimensionError("total Fock dimension exceeds cap of " + std::to_string(max_total));
    }
    total_ *= static_cast<std::size_t>(c);
  }
  if (total_ > max_total) {
    throw DimensionError("total Fock dimension " + std::to_string(total_) + " exceeds cap of " +
                         std::to_string(max_total));
  }
}

std::size_t ModeCutoffs::flat_index(std::span<const int> occupations) const {
  if (occupations.size() != cutoffs_.size()) {
    throw DimensionError("expected " + std::to_string(cutoffs_.size()) + " occupations, got " +
                         std::to_string(occupations.size()));
  }
  std::size_t index = 0;
  for (std::size_t i = 0; i < cutoffs_.size(); ++i) {
    if (occupations[i] < 0 || occupations[i] >= cutoffs_[i]) {
      throw DimensionError("occupation " + std::to_string(occupations[i]) + " on mode " +
                           std::to_string(i) + " outside cutoff " + std::to_string(cutoffs_[i]));
    }
    index = index * static_cast<std::size_t>(cutoffs_[i]) + static_cast<std::size_t>(occupations[i]);
  }
  return index;
}

std::vector<int> ModeCutoffs::occupations(std::size_t flat) const {
  if (flat >= total_) throw IndexError("flat index out of range");
  std::vector<int> occ(cutoffs_.size());
  for (std::size_t i = cutoffs_.size(); i-- > 0;) {
    const auto c = static_cast<std::size_t>(cutoffs_[i]);
    occ[i] = static_cast<int>(flat % c);
    flat /= c;
  }
  return occ;
}

ModeCutoffs ModeCutoffs::padded(std::span<const int> padding, std::size_t max_total) const {
  auto grown = cutoffs_;
  for (std::size_t i = 0; i < grown.size() && i < padding.size(); ++i) {
    grown[i] += std::max(padding[i], 0);
  }
  return ModeCutoffs(std::move(grown), max_total);
}

// ---------------------------------------------------------------------------
// States

StateVector::StateVector(ModeCutoffs cutoffs, Vector amplitudes)
    : cutoffs_(std::move(cutoffs)), amplitudes_(std::move(amplitudes)) {
  if (static_cast<std::size_t>(amplitudes_.size()) != cutoffs_.total()) {
    throw DimensionError("amplitude vector length " + std::to_string(amplitudes_.size()) +
                         " does not match Fock dimension " + std::to_string(cutoffs_.total()));
  }
  const double norm = amplitudes_.norm();
  if (!(norm > kNormTolerance)) throw DegenerateStateError("state has zero norm");
  amplitudes_ /= norm;
}

Complex StateVector::amplitude(std::span<const int> occupations) const {
  return amplitudes_(static_cast<Eigen::Index>(cutoffs_.flat_index(occupations)));
}

DensityMatrix::DensityMatrix(ModeCutoffs cutoffs, Matrix matrix)
    : cutoffs_(std::move(cutoffs)), matrix_(std::move(matrix)) {
  const auto n = static_cast<Eigen::Index>(cutoffs_.total());
  if (matrix_.rows() != n || matrix_.cols() != n) {
    throw DimensionError("density matrix must be " + std::to_string(n) + "x" + std::to_string(n));
  }
  const double asym = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
  if (asym > kHermitianTolerance) {
    throw InvalidStateError("density matrix is not Hermitian (deviation " + std::to_string(asym) + ")");
  }
  matrix_ = (0.5 * (matrix_ + matrix_.adjoint())).eval();
  const Complex tr = matrix_.trace();
  if (std::abs(tr - Complex(1.0)) > kTraceTolerance) {
    std::ostringstream os;
    os << "density matrix trace is " << tr.real() << ", expected 1";
    throw InvalidStateError(os.str());
  }
  // the vectors are kept: moments of mixed states are sums over eigenvectors
  Eigen::SelfAdjointEigenSolver<Matrix> solver(matrix_);
  if (solver.eigenvalues().minCoeff() < kMinEigenvalue) {
    throw InvalidStateError("density matrix has negative eigenvalue " +
                            std::to_string(solver.eigenvalues().minCoeff()));
  }
  spectrum_ = std::make_shared<const Spectrum>(Spectrum{solver.eigenvalues(), solver.eigenvectors()});
}

DensityMatrix DensityMatrix::from_pure(const StateVector& state) {
  const Vector& v = state.amplitudes();
  return DensityMatrix(state.cutoffs(), v * v.adjoint());
}

const ModeCutoffs& cutoffs_of(const State& state) {
  return std::visit([](const auto& s) -> const ModeCutoffs& { return s.cutoffs(); }, state);
}

DensityMatrix to_density(const State& state) {
  if (const auto* pure = std::get_if<StateVector>(&state)) return DensityMatrix::from_pure(*pure);
  return std::get<DensityMatrix>(state);
}

StateVector make_fock_state(std::span<const int> occupations, const ModeCutoffs& cutoffs) {
  Vector amps = Vector::Zero(static_cast<Eigen::Index>(cutoffs.total()));
  amps(static_cast<Eigen::Index>(cutoffs.flat_index(occupations))) = 1.0;
  return StateVector(cutoffs, std::move(amps));
}

StateVector superpose(std::span<const std::pair<Complex, StateVector>> terms) {
  if (terms.empty()) throw DegenerateStateError("superposition of no terms");
  const ModeCutoffs& cutoffs = terms.front().second.cutoffs();
  Vector sum = Vector::Zero(static_cast<Eigen::Index>(cutoffs.total()));
  for (const auto& [coeff, state] : terms) {
    if (!(state.cutoffs() == cutoffs)) throw DimensionError("superposed states differ in cutoffs");
    sum += coeff * state.amplitudes();
  }
  return StateVector(cutoffs, std::move(sum));
}

// ---------------------------------------------------------------------------
// Coherent states

Vector coherent_amplitudes(Complex alpha, int cutoff) {
  if (cutoff < 1) throw DimensionError("cutoff must be >= 1");
  Vector amps(cutoff);
  Complex term = std::exp(-0.5 * std::norm(alpha));
  for (int n = 0; n < cutoff; ++n) {
    amps(n) = term;
    term *= alpha / std::sqrt(static_cast<double>(n + 1));
  }
  return amps;
}

double coherent_norm_deficit(Complex alpha, int cutoff) {
  const double x = std::norm(alpha);
  if (x == 0.0) return 0.0;
  // Tail of the Poisson distribution, summed from n = cutoff upward.
  double log_term = -x + cutoff * std::log(x) - std::lgamma(cutoff + 1.0);
  double term = std::exp(log_term);
  double tail = 0.0;
  for (int n = cutoff; n < cutoff + 10000; ++n) {
    tail += term;
    term *= x / (n + 1.0);
    if (term < 1e-20 * tail && n > x) break;
  }
  return tail;
}

int required_coherent_cutoff(Complex alpha, double epsilon) {
  int cutoff = 1;
  while (coherent_norm_deficit(alpha, cutoff) >= epsilon) ++cutoff;
  return cutoff;
}

StateVector make_coherent_superposition(std::span<const CoherentTerm> terms,
                                        const ModeCutoffs& cutoffs, double epsilon) {
  if (terms.empty()) throw DegenerateStateError("superposition of no coherent states");
  Vector sum = Vector::Zero(static_cast<Eigen::Index>(cutoffs.total()));
  const std::size_t modes = cutoffs.modes();
  for (const auto& term : terms) {
    if (term.amplitudes.size() != modes) {
      throw DimensionError("coherent term has " + std::to_string(term.amplitudes.size()) +
                           " amplitudes for " + std::to_string(modes) + " modes");
    }
    double kept = 1.0;
    std::size_t worst = 0;
    double worst_deficit = -1.0;
    for (std::size_t i = 0; i < modes; ++i) {
      const double d = coherent_norm_deficit(term.amplitudes[i], cutoffs[i]);
      kept *= 1.0 - d;
      if (d > worst_deficit) {
        worst_deficit = d;
        worst = i;
      }
    }
    const double deficit = 1.0 - kept;
    if (deficit >= epsilon) {
      const int required =
          required_coherent_cutoff(term.amplitudes[worst], epsilon / static_cast<double>(modes));
      throw InsufficientCutoffError(worst, cutoffs[worst], required, deficit);
    }
    Vector product = coherent_amplitudes(term.amplitudes[0], cutoffs[0]);
    for (std::size_t i = 1; i < modes; ++i) {
      product = kron(product, coherent_amplitudes(term.amplitudes[i], cutoffs[i]));
    }
    sum += term.coefficient * product;
  }
  return StateVector(cutoffs, std::move(sum));
}

// ---------------------------------------------------------------------------
// Operators

LadderPair ladder_matrices(int cutoff) {
  if (cutoff < 1) throw DimensionError("cutoff must be >= 1");
  RealMatrix a = RealMatrix::Zero(cutoff, cutoff);
  for (int n = 1; n < cutoff; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  RealMatrix adag = a.transpose();
  return {std::move(a), std::move(adag)};
}

RealMatrix single_mode_monomial(int cutoff, ModePowers powers) {
  const auto [a, adag] = ladder_matrices(cutoff);
  RealMatrix out = RealMatrix::Identity(cutoff, cutoff);
  for (int i = 0; i < powers.annihilation; ++i) out = a * out;
  for (int i = 0; i < powers.creation; ++i) out = adag * out;
  return out;
}

Matrix monomial_matrix(const Monomial& spec, const ModeCutoffs& cutoffs) {
  if (spec.mode_span() > static_cast<int>(cutoffs.modes())) {
    throw DimensionError("monomial " + spec.to_string() + " acts on modes the space lacks");
  }
  Matrix out = single_mode_monomial(cutoffs[0], spec.powers(0)).cast<Complex>();
  for (std::size_t i = 1; i < cutoffs.modes(); ++i) {
    out = kron(out, single_mode_monomial(cutoffs[i], spec.powers(static_cast<int>(i))).cast<Complex>());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Composition and embedding

StateVector tensor_product(const StateVector& a, const StateVector& b) {
  ModeCutoffs joint(concat(a.cutoffs().dims(), b.cutoffs().dims()));
  return StateVector(std::move(joint), kron(a.amplitudes(), b.amplitudes()));
}

DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b) {
  ModeCutoffs joint(concat(a.cutoffs().dims(), b.cutoffs().dims()));
  return DensityMatrix(std::move(joint), kron(a.matrix(), b.matrix()));
}

DensityMatrix mixture(std::span<const std::pair<double, DensityMatrix>> terms) {
  if (terms.empty()) throw DegenerateStateError("mixture of no states");
  const ModeCutoffs& cutoffs = terms.front().second.cutoffs();
  double total = 0.0;
  for (const auto& [w, rho] : terms) {
    if (w < 0.0) throw InvalidStateError("mixture weights must be nonnegative");
    if (!(rho.cutoffs() == cutoffs)) throw DimensionError("mixed states differ in cutoffs");
    total += w;
  }
  if (!(total > 0.0)) throw DegenerateStateError("mixture weights sum to zero");
  const auto n = static_cast<Eigen::Index>(cutoffs.total());
  Matrix sum = Matrix::Zero(n, n);
  for (const auto& [w, rho] : terms) sum += (w / total) * rho.matrix();
  // Rescale so accumulated rounding cannot push the trace past the validator.
  sum /= sum.trace().real();
  return DensityMatrix(cutoffs, std::move(sum));
}

namespace {

std::vector<Eigen::Index> embedding_map(const ModeCutoffs& from, const ModeCutoffs& to) {
  if (from.modes() != to.modes()) throw DimensionError("embedding changes the number of modes");
  for (std::size_t i = 0; i < from.modes(); ++i) {
    if (to[i] < from[i]) throw DimensionError("embedding cannot shrink a cutoff");
  }
  std::vector<Eigen::Index> map(from.total());
  for (std::size_t flat = 0; flat < from.total(); ++flat) {
    map[flat] = static_cast<Eigen::Index>(to.flat_index(from.occupations(flat)));
  }
  return map;
}

}  // namespace

Vector embed(const Vector& amplitudes, const ModeCutoffs& from, const ModeCutoffs& to) {
  const auto map = embedding_map(from, to);
  Vector out = Vector::Zero(static_cast<Eigen::Index>(to.total()));
  for (std::size_t i = 0; i < map.size(); ++i) out(map[i]) = amplitudes(static_cast<Eigen::Index>(i));
  return out;
}

Matrix embed(const Matrix& matrix, const ModeCutoffs& from, const ModeCutoffs& to) {
  const auto map = embedding_map(from, to);
  const auto n = static_cast<Eigen::Index>(to.total());
  Matrix out = Matrix::Zero(n, n);
  for (std::size_t i = 0; i < map.size(); ++i) {
    for (std::size_t j = 0; j < map.size(); ++j) {
      out(map[i], map[j]) = matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  }
  return out;
}

StateVector embed(const StateVector& state, const ModeCutoffs& to) {
  return StateVector(to, embed(state.amplitudes(), state.cutoffs(), to));
}

DensityMatrix embed(const DensityMatrix& state, const ModeCutoffs& to) {
  return DensityMatrix(to, embed(state.matrix(), state.cutoffs(), to));
}

}  // namespace momsep
