#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "momsep/fock.hpp"
#include "momsep/moments.hpp"
#include "momsep/posmaps.hpp"
#include "momsep/reorder.hpp"

namespace momsep {

/// Default tolerance for states with finite excitation.
inline constexpr double kExactTolerance = 1e-9;
/// Default tolerance for truncated coherent-state inputs.
inline constexpr double kTruncatedTolerance = 1e-6;

enum class Outcome {
  Entangled,
  Inconclusive,
  // Reported only by the state-level PPT test on 2x2 and 2x3 systems.
  Separable,
};

const char* to_string(Outcome outcome);

struct Witness {
  std::string name;
  double value = 0.0;
};

struct Verdict {
  std::string criterion;
  std::vector<Witness> witnesses;
  double threshold = 0.0;
  double tolerance = kExactTolerance;
  Outcome outcome = Outcome::Inconclusive;
  // Witness sits on its threshold within tolerance (strict inequality not met).
  bool boundary = false;

  // Provenance.
  std::string operator_class;
  std::vector<int> r;
  std::string map;
  std::string side;
  std::string note;

  std::optional<Matrix> witness_matrix;

  bool entangled() const { return outcome == Outcome::Entangled; }
  std::optional<double> witness(const std::string& name) const;
};

namespace classes {

/// (1, a) x (1, b).
OperatorClass first_order();
/// (1, a, a) x (1, b, b), the 9x9 class used with the Stormer map.
OperatorClass stormer_class();
/// Breuer classes: 1 -> (1,a,Na,a^2)x(1,b,Nb,b^2), 2 -> (1,a,Na,1)x(1,b,Nb,1), 3 -> (1,a,1,1)x(1,b,1,1).
OperatorClass breuer_class(int variant);

}  // namespace classes

/// Checks principal minors of a Hermitian matrix: the listed index sets when
/// r_list is non-empty, otherwise every subset of size <= max_minor_size.
/// Records the most negative minor found.
Verdict sylvester_scan(const Matrix& m, int max_minor_size = 4, const std::vector<std::vector<int>>& r_list = {},
                       double tol = kExactTolerance);

Verdict min_eig_test(const Matrix& m, double tol = kExactTolerance);

Verdict pt_norm_test(const State& state, const OperatorClass& cls, double tol = kExactTolerance);
Verdict realign_norm_test(const State& state, const OperatorClass& cls, double tol = kExactTolerance);

/// Builds M, applies the map to one side and tests positivity of the result
/// (or of its principal submatrix r).
Verdict map_test(const State& state, const OperatorClass& cls, const PositiveMap& map, Side side = Side::A,
                 const std::optional<std::vector<int>>& r = std::nullopt, double tol = kExactTolerance);

/// r = (1, 6, 9) submatrix assembled from the closed-form entries of the
/// Breuer-transformed matrix (anti-diagonal U) for Breuer class 1 or 2.
Verdict breuer_bell_test(const State& state, int variant = 1, double tol = kExactTolerance);

/// <Na Nb> < |<a b^dag>|^2. The second condition <Na><Nb> < |<a b>|^2 is
/// reported as witnesses but does not change the outcome.
Verdict hz_two_mode(const State& state, const Bipartition& modes = Bipartition::two_mode(),
                    double tol = kExactTolerance);

/// variant 1: <Na Nb Nc> < |<a^dag b c>|^2; variant 2: <Na><Nb Nc> < |<a b c>|^2.
/// `mode` is the isolated mode a; the other two play b and c.
Verdict hz_three_mode(const State& state, int variant, int mode = 0, double tol = kExactTolerance);

/// 2(<Na Nb> + <Na^2 Nb>) < |<Na b> + <a^dag b>|^2, the determinant condition
/// of the Breuer r = (2, 5) submatrix for class 2.
Verdict breuer_inequality_test(const State& state, double tol = kExactTolerance);

/// det of the generic moment matrix on rho^PT for f = (1, b, a b).
Verdict sv_cat_state_test(const State& state, double tol = kTruncatedTolerance);

/// Generic-class PT determinant test; the building block of the HZ-type tests.
Verdict generic_pt_test(const State& state, const GenericClass& cls, const Bipartition& modes,
                        double tol = kExactTolerance);

/// Bipartition isolating mode j of an m-mode state.
Bipartition multimode_bipartition(const State& state, int mode);

/// Tensor-product class on a multimode bipartition; B-side monomials may span
/// all the non-isolated modes.
OperatorClass multimode_class(const State& state, int mode, const std::vector<std::string>& side_a,
                              const std::vector<std::string>& side_b);

}  // namespace momsep
