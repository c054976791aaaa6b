#include "momsep/reorder.hpp"

#include "momsep/errors.hpp"

namespace momsep {

namespace {

constexpr double kSingularFloor = 1e-13;
constexpr double kMinTrace = 1e-14;

void check_layout(const Matrix& matrix, const BlockLayout& layout) {
  const auto n = static_cast<Eigen::Index>(layout.d_a * layout.d_b);
  if (layout.d_a == 0 || layout.d_b == 0 || matrix.rows() != n || matrix.cols() != n) {
    throw DimensionError("matrix is not " + std::to_string(layout.d_a) + " x " +
                         std::to_string(layout.d_b) + " blocked");
  }
}

double normalized_trace(const MomentMatrix& m) {
  const double tr = m.entries.trace().real();
  if (!(tr > kMinTrace)) throw DegenerateStateError("moment matrix has zero trace");
  return tr;
}

}  // namespace

const char* to_string(Side side) { return side == Side::A ? "A" : "B"; }

Side parse_side(const std::string& text) {
  if (text == "A" || text == "a") return Side::A;
  if (text == "B" || text == "b") return Side::B;
  throw ParseError("side must be A or B, got '" + text + "'");
}

Matrix partial_transpose(const Matrix& matrix, const BlockLayout& layout, Side side) {
  check_layout(matrix, layout);
  Matrix out(matrix.rows(), matrix.cols());
  for (std::size_t k = 0; k < layout.d_a; ++k) {
    for (std::size_t l = 0; l < layout.d_b; ++l) {
      for (std::size_t kp = 0; kp < layout.d_a; ++kp) {
        for (std::size_t lp = 0; lp < layout.d_b; ++lp) {
          const auto row = static_cast<Eigen::Index>(layout.index(k, l));
          const auto col = static_cast<Eigen::Index>(layout.index(kp, lp));
          out(row, col) = side == Side::A
                              ? matrix(static_cast<Eigen::Index>(layout.index(kp, l)),
                                       static_cast<Eigen::Index>(layout.index(k, lp)))
                              : matrix(static_cast<Eigen::Index>(layout.index(k, lp)),
                                       static_cast<Eigen::Index>(layout.index(kp, l)));
        }
      }
    }
  }
  return out;
}

MomentMatrix partial_transpose(const MomentMatrix& m, Side side) {
  return MomentMatrix{partial_transpose(m.entries, BlockLayout::moment(m.d_a, m.d_b), side), m.d_a, m.d_b,
                      m.provenance + " | PT_" + to_string(side)};
}

Matrix realign(const Matrix& matrix, const BlockLayout& layout) {
  check_layout(matrix, layout);
  const auto da = layout.d_a, db = layout.d_b;
  Matrix out(static_cast<Eigen::Index>(da * da), static_cast<Eigen::Index>(db * db));
  for (std::size_t k = 0; k < da; ++k) {
    for (std::size_t kp = 0; kp < da; ++kp) {
      for (std::size_t l = 0; l < db; ++l) {
        for (std::size_t lp = 0; lp < db; ++lp) {
          out(static_cast<Eigen::Index>(k * da + kp), static_cast<Eigen::Index>(l * db + lp)) =
              matrix(static_cast<Eigen::Index>(layout.index(k, l)), static_cast<Eigen::Index>(layout.index(kp, lp)));
        }
      }
    }
  }
  return out;
}

RealignedMatrix realign(const MomentMatrix& m) {
  return {realign(m.entries, BlockLayout::moment(m.d_a, m.d_b)), m.provenance + " | R"};
}

Matrix unrealign(const Matrix& realigned, const BlockLayout& layout) {
  const auto da = layout.d_a, db = layout.d_b;
  if (realigned.rows() != static_cast<Eigen::Index>(da * da) ||
      realigned.cols() != static_cast<Eigen::Index>(db * db)) {
    throw DimensionError("realigned matrix has the wrong shape");
  }
  const auto n = static_cast<Eigen::Index>(da * db);
  Matrix out(n, n);
  for (std::size_t k = 0; k < da; ++k) {
    for (std::size_t kp = 0; kp < da; ++kp) {
      for (std::size_t l = 0; l < db; ++l) {
        for (std::size_t lp = 0; lp < db; ++lp) {
          out(static_cast<Eigen::Index>(layout.index(k, l)), static_cast<Eigen::Index>(layout.index(kp, lp))) =
              realigned(static_cast<Eigen::Index>(k * da + kp), static_cast<Eigen::Index>(l * db + lp));
        }
      }
    }
  }
  return out;
}

double trace_norm(const Matrix& matrix) {
  if (matrix.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(matrix);
  const auto& s = svd.singularValues();
  const double floor = kSingularFloor * s(0);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > floor) sum += s(i);
  }
  return sum;
}

double nu_gamma(const MomentMatrix& m) {
  const double tr = normalized_trace(m);
  return trace_norm(partial_transpose(m, Side::A).entries) / tr;
}

double nu_realign(const MomentMatrix& m) {
  const double tr = normalized_trace(m);
  return trace_norm(realign(m).entries) / tr;
}

double nu_gamma(const State& state, const OperatorClass& cls) { return nu_gamma(build_moment_matrix(state, cls)); }

double nu_realign(const State& state, const OperatorClass& cls) {
  return nu_realign(build_moment_matrix(state, cls));
}

}  // namespace momsep
