#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "momsep/monomial.hpp"

namespace momsep {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;

inline constexpr std::size_t kDefaultMaxDimension = 4096;
inline constexpr double kDefaultCoherentEpsilon = 1e-10;

/// Per-mode Fock dimensions; mode i spans |0>..|cutoff_i - 1>.
class ModeCutoffs {
public:
  explicit ModeCutoffs(std::vector<int> cutoffs, std::size_t max_total = kDefaultMaxDimension);

  std::size_t modes() const { return cutoffs_.size(); }
  int operator[](std::size_t mode) const { return cutoffs_.at(mode); }
  std::span<const int> dims() const { return cutoffs_; }
  std::size_t total() const { return total_; }

  /// Mode-major flat index, last mode fastest.
  std::size_t flat_index(std::span<const int> occupations) const;
  std::vector<int> occupations(std::size_t flat) const;

  /// Cutoffs grown per mode by `padding` (which may be shorter than modes()).
  ModeCutoffs padded(std::span<const int> padding,
                     std::size_t max_total = kDefaultMaxDimension * 64) const;

  bool operator==(const ModeCutoffs& other) const { return cutoffs_ == other.cutoffs_; }

private:
  std::vector<int> cutoffs_;
  std::size_t total_ = 1;
};

/// Normalized pure state on a truncated multi-mode Fock space.
class StateVector {
public:
  /// Normalizes the amplitudes; throws DegenerateStateError on zero norm.
  StateVector(ModeCutoffs cutoffs, Vector amplitudes);

  const ModeCutoffs& cutoffs() const { return cutoffs_; }
  const Vector& amplitudes() const { return amplitudes_; }
  Complex amplitude(std::span<const int> occupations) const;

private:
  ModeCutoffs cutoffs_;
  Vector amplitudes_;
};

/// Hermitian, unit-trace, positive semidefinite density matrix.
class DensityMatrix {
public:
  DensityMatrix(ModeCutoffs cutoffs, Matrix matrix);

  static DensityMatrix from_pure(const StateVector& state);

  const ModeCutoffs& cutoffs() const { return cutoffs_; }
  const Matrix& matrix() const { return matrix_; }

  /// Eigen-decomposition from the validation step, ascending eigenvalues.
  const Eigen::VectorXd& eigenvalues() const { return spectrum_->values; }
  const Matrix& eigenvectors() const { return spectrum_->vectors; }

private:
  struct Spectrum {
    Eigen::VectorXd values;
    Matrix vectors;
  };
  ModeCutoffs cutoffs_;
  Matrix matrix_;
  std::shared_ptr<const Spectrum> spectrum_;
};

using State = std::variant<StateVector, DensityMatrix>;

const ModeCutoffs& cutoffs_of(const State& state);
DensityMatrix to_density(const State& state);

StateVector make_fock_state(std::span<const int> occupations, const ModeCutoffs& cutoffs);

/// Normalized linear combination; all terms must share cutoffs.
StateVector superpose(std::span<const std::pair<Complex, StateVector>> terms);

/// Truncated coherent-state amplitudes e^{-|alpha|^2/2} alpha^n / sqrt(n!), n < cutoff.
Vector coherent_amplitudes(Complex alpha, int cutoff);

/// 1 - sum_{n<cutoff} |<n|alpha>|^2, computed as the tail sum.
double coherent_norm_deficit(Complex alpha, int cutoff);

/// Smallest cutoff whose norm deficit is below epsilon.
int required_coherent_cutoff(Complex alpha, double epsilon);

struct CoherentTerm {
  Complex coefficient;
  std::vector<Complex> amplitudes;  // one per mode
};

/// Normalized superposition of truncated multi-mode coherent states. Throws
/// InsufficientCutoffError when any term loses more than `epsilon` of norm.
StateVector make_coherent_superposition(std::span<const CoherentTerm> terms,
                                        const ModeCutoffs& cutoffs,
                                        double epsilon = kDefaultCoherentEpsilon);

struct LadderPair {
  RealMatrix annihilation;
  RealMatrix creation;
};

LadderPair ladder_matrices(int cutoff);

/// (a^dag)^n a^m on a single mode of the given cutoff.
RealMatrix single_mode_monomial(int cutoff, ModePowers powers);

/// Dense matrix of the monomial on the full truncated space (Kronecker product
/// of per-mode factors).
Matrix monomial_matrix(const Monomial& spec, const ModeCutoffs& cutoffs);

StateVector tensor_product(const StateVector& a, const StateVector& b);
DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b);

/// Convex combination; weights are renormalized and all states must share cutoffs.
DensityMatrix mixture(std::span<const std::pair<double, DensityMatrix>> terms);

/// Zero-pads a vector or matrix into larger per-mode cutoffs.
Vector embed(const Vector& amplitudes, const ModeCutoffs& from, const ModeCutoffs& to);
Matrix embed(const Matrix& matrix, const ModeCutoffs& from, const ModeCutoffs& to);

StateVector embed(const StateVector& state, const ModeCutoffs& to);
DensityMatrix embed(const DensityMatrix& state, const ModeCutoffs& to);

}  // namespace momsep
