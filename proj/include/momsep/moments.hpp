#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "momsep/fock.hpp"
#include "momsep/monomial.hpp"

namespace momsep {

/// Split of the modes into subsystem A and subsystem B.
struct Bipartition {
  std::vector<int> a_modes;
  std::vector<int> b_modes;

  /// Mode 0 against mode 1.
  static Bipartition two_mode() { return {{0}, {1}}; }

  /// Mode j alone against every other mode of an m-mode system.
  static Bipartition isolate(int mode, int num_modes);

  bool operator==(const Bipartition&) const = default;
};

/// Tensor-product class f^A (x) f^B. Element (k, l) is f^A_k f^B_l and sits at
/// flat position l * d_A + k (A index fastest). Duplicate entries are kept.
class OperatorClass {
public:
  OperatorClass(std::vector<Monomial> side_a, std::vector<Monomial> side_b,
                Bipartition bipartition = Bipartition::two_mode());

  /// Parses the text form of each entry, e.g. {"1", "a"} and {"1", "b"}.
  static OperatorClass parse(const std::vector<std::string>& side_a,
                             const std::vector<std::string>& side_b,
                             Bipartition bipartition = Bipartition::two_mode());

  std::size_t d_a() const { return side_a_.size(); }
  std::size_t d_b() const { return side_b_.size(); }
  std::size_t size() const { return d_a() * d_b(); }

  const std::vector<Monomial>& side_a() const { return side_a_; }
  const std::vector<Monomial>& side_b() const { return side_b_; }
  const Bipartition& bipartition() const { return bipartition_; }

  /// f^A_k f^B_l, 0-based.
  Monomial element(std::size_t k, std::size_t l) const;

  /// Throws DimensionError if the class uses modes the space does not have.
  void check_modes(const ModeCutoffs& cutoffs) const;

  std::string to_string() const;

private:
  std::vector<Monomial> side_a_;
  std::vector<Monomial> side_b_;
  Bipartition bipartition_;
};

/// Ordered list of monomials with no tensor structure.
struct GenericClass {
  std::vector<Monomial> ops;

  static GenericClass parse(const std::vector<std::string>& ops);
  std::string to_string() const;
};

struct MomentMatrix {
  Matrix entries;
  std::size_t d_a = 0;
  std::size_t d_b = 0;
  std::string provenance;
};

struct GenericMomentMatrix {
  Matrix entries;
  std::string provenance;
};

/// 1-based flat position of (k, l): (l - 1) * d_a + k.
std::size_t flatten_index(std::size_t k, std::size_t l, std::size_t d_a, std::size_t d_b);

/// <spec> = Tr(rho spec).
Complex moment(const State& state, const Monomial& spec);

/// M_ij = <f_i^dag f_j> for the tensor-product class.
MomentMatrix build_moment_matrix(const State& state, const OperatorClass& cls,
                                 const std::string& label = {});

/// Moment matrix of the partially transposed state, from moments of the state
/// itself: M_{kl,k'l'}(rho^PT) = <(f^A_k f^B_l')^dag f^A_k' f^B_l>.
MomentMatrix build_moment_matrix_of_pt_state(const State& state, const OperatorClass& cls,
                                             const std::string& label = {});

/// Generic-class matrix. With `conjugate_b` the B factor of every product
/// f_i^dag f_j is Hermitian-conjugated, which yields the matrix on rho^PT.
GenericMomentMatrix build_generic_moment_matrix(const State& state, const GenericClass& cls,
                                                bool conjugate_b,
                                                const Bipartition& bipartition = Bipartition::two_mode());

/// Matrix of moments of an arbitrary Hermitian operator X given in the Fock
/// basis, M_ij = Tr(f_i^dag f_j X). X need not be positive.
MomentMatrix moment_matrix_of_operator(const Matrix& hermitian, const ModeCutoffs& cutoffs,
                                       const OperatorClass& cls);

/// Keeps rows and columns r (1-based, strictly increasing).
Matrix principal_submatrix(const Matrix& matrix, std::span<const int> r);

}  // namespace momsep
