#pragma once

#include <cstddef>
#include <string>

#include "momsep/fock.hpp"
#include "momsep/moments.hpp"

namespace momsep {

enum class Side { A, B };

const char* to_string(Side side);
Side parse_side(const std::string& text);

/// Index layout of a bipartite matrix. Moment matrices put the A index
/// fastest; Fock-basis density matrices put the B index fastest.
struct BlockLayout {
  std::size_t d_a = 0;
  std::size_t d_b = 0;
  bool a_fast = true;

  std::size_t index(std::size_t k, std::size_t l) const { return a_fast ? l * d_a + k : k * d_b + l; }

  static BlockLayout moment(std::size_t d_a, std::size_t d_b) { return {d_a, d_b, true}; }
  static BlockLayout fock(std::size_t d_a, std::size_t d_b) { return {d_a, d_b, false}; }
};

struct RealignedMatrix {
  Matrix entries;  // d_a^2 x d_b^2
  std::string provenance;
};

/// Side A swaps k <-> k'; side B swaps l <-> l'.
Matrix partial_transpose(const Matrix& matrix, const BlockLayout& layout, Side side);
MomentMatrix partial_transpose(const MomentMatrix& m, Side side = Side::A);

/// Row (k, k') = k * d_a + k', column (l, l') = l * d_b + l', value M_{kl,k'l'}.
Matrix realign(const Matrix& matrix, const BlockLayout& layout);
RealignedMatrix realign(const MomentMatrix& m);

/// Inverse of realign for the same layout.
Matrix unrealign(const Matrix& realigned, const BlockLayout& layout);

/// Sum of singular values, ignoring those below 1e-13 of the largest.
double trace_norm(const Matrix& matrix);

/// ||M^PT|| / Tr M and ||M^R|| / Tr M; DegenerateStateError when Tr M <= 0.
double nu_gamma(const MomentMatrix& m);
double nu_realign(const MomentMatrix& m);
double nu_gamma(const State& state, const OperatorClass& cls);
double nu_realign(const State& state, const OperatorClass& cls);

}  // namespace momsep
