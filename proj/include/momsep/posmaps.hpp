#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "momsep/fock.hpp"
#include "momsep/moments.hpp"
#include "momsep/reorder.hpp"

namespace momsep {

/// Choi map on 3x3 matrices:
///   A -> -A + diag(aA11 + bA22 + cA33, cA11 + aA22 + bA33, bA11 + cA22 + aA33).
/// Construction rejects parameters for which the map is not positive.
class ChoiMap {
public:
  ChoiMap(double alpha, double beta, double gamma);

  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  double gamma() const { return gamma_; }
  bool decomposable() const { return decomposable_; }

  static bool is_positive(double alpha, double beta, double gamma);
  static bool is_decomposable(double alpha, double beta, double gamma);

private:
  double alpha_, beta_, gamma_;
  bool decomposable_;
};

/// The (2, 0, 1) member of the Choi family; indecomposable.
ChoiMap stormer();

Matrix choi_apply(const ChoiMap& map, const Matrix& a);

/// Generalized Gell-Mann basis of su(N), normalized to Tr(g_i g_j) = delta_ij.
std::vector<Matrix> gell_mann_generators(int n);

/// Rotation by `angle` in the (i, j) coordinate plane of R^dim.
RealMatrix plane_rotation(int dim, int i, int j, double angle);

/// A -> I Tr(A)/N + (1/(N-1)) sum_i g_i (R x)_i with x_i = Tr(A g_i).
///
/// Only y = 0 is accepted. R must lie in SO(N^2 - 1). Positivity is checked
/// empirically at construction on random PSD inputs.
class KossakowskiMap {
public:
  KossakowskiMap(int n, RealMatrix rotation, Eigen::VectorXd y = {});

  int dimension() const { return n_; }
  const RealMatrix& rotation() const { return rotation_; }
  const std::vector<Matrix>& generators() const { return generators_; }

private:
  int n_;
  RealMatrix rotation_;
  std::vector<Matrix> generators_;
};

Matrix kossakowski_apply(const KossakowskiMap& map, const Matrix& a);

/// A -> I Tr(A) - A - U A^T U^dag with U skew-symmetric unitary, d even >= 4.
class BreuerMap {
public:
  explicit BreuerMap(Matrix unitary);

  int dimension() const { return static_cast<int>(unitary_.rows()); }
  const Matrix& unitary() const { return unitary_; }

private:
  Matrix unitary_;
};

/// U = R D R^T, D = sum_k e^{i phi_k} (|2k><2k+1| - |2k+1><2k|).
Matrix breuer_unitary(const std::vector<double>& phases, const RealMatrix& rotation);

/// The 4x4 anti-diagonal skew-symmetric unitary [[0,0,0,1],[0,0,1,0],[0,-1,0,0],[-1,0,0,0]].
Matrix antidiagonal_breuer_unitary();

Matrix breuer_apply(const BreuerMap& map, const Matrix& a);

struct IdentityMap {
  int dimension = 0;
};

struct TransposeMap {
  int dimension = 0;
};

using PositiveMap = std::variant<ChoiMap, KossakowskiMap, BreuerMap, IdentityMap, TransposeMap>;

int map_dimension(const PositiveMap& map);
std::string map_name(const PositiveMap& map);
Matrix apply_map(const PositiveMap& map, const Matrix& a);

/// Applies the map to the chosen tensor factor of a moment matrix: for side A
/// each d_A x d_A block (fixed l, l') is replaced by its image.
MomentMatrix apply_partial(const MomentMatrix& m, const PositiveMap& map, Side side = Side::A);

/// Random PSD matrices (G G^dag with complex Gaussian G of random rank).
std::vector<Matrix> random_psd_matrices(int dim, int count, std::uint64_t seed);

}  // namespace momsep
