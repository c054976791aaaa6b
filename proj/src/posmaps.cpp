#include "momsep/posmaps.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "momsep/errors.hpp"

namespace momsep {

namespace {

constexpr double kMapTolerance = 1e-10;
constexpr int kPositivitySamples = 200;
constexpr std::uint64_t kPositivitySeed = 0x5eed5eedULL;

void check_square(const Matrix& a, int dim, const char* what) {
  if (a.rows() != dim || a.cols() != dim) {
    std::ostringstream os;
    os << what << " acts on " << dim << "x" << dim << " matrices, got " << a.rows() << "x" << a.cols();
    throw DimensionError(os.str());
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Choi family

bool ChoiMap::is_positive(double alpha, double beta, double gamma) {
  if (alpha < 1.0 || alpha + beta + gamma < 3.0) return false;
  if (alpha <= 2.0 && beta * gamma < (2.0 - alpha) * (2.0 - alpha)) return false;
  return true;
}

bool ChoiMap::is_decomposable(double alpha, double beta, double gamma) {
  if (alpha < 1.0) return false;
  if (alpha <= 3.0 && beta * gamma < (3.0 - alpha) * (3.0 - alpha) / 4.0) return false;
  return true;
}

ChoiMap::ChoiMap(double alpha, double beta, double gamma) : alpha_(alpha), beta_(beta), gamma_(gamma) {
  if (alpha < 0.0 || beta < 0.0 || gamma < 0.0) throw InvalidMapError("Choi parameters must be nonnegative");
  if (!is_positive(alpha, beta, gamma)) {
    std::ostringstream os;
    os << "Choi map (" << alpha << ", " << beta << ", " << gamma << ") is not positive";
    throw InvalidMapError(os.str());
  }
  decomposable_ = is_decomposable(alpha, beta, gamma);
}

ChoiMap stormer() { return ChoiMap(2.0, 0.0, 1.0); }

Matrix choi_apply(const ChoiMap& map, const Matrix& a) {
  check_square(a, 3, "Choi map");
  const double al = map.alpha(), be = map.beta(), ga = map.gamma();
  Matrix out = -a;
  out(0, 0) += al * a(0, 0) + be * a(1, 1) + ga * a(2, 2);
  out(1, 1) += ga * a(0, 0) + al * a(1, 1) + be * a(2, 2);
  out(2, 2) += be * a(0, 0) + ga * a(1, 1) + al * a(2, 2);
  return out;
}

// ---------------------------------------------------------------------------
// Kossakowski family

std::vector<Matrix> gell_mann_generators(int n) {
  if (n < 2) throw DimensionError("SU(N) generators need N >= 2");
  std::vector<Matrix> gens;
  const double s = 1.0 / std::sqrt(2.0);
  const Complex i_unit(0.0, 1.0);
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      Matrix sym = Matrix::Zero(n, n);
      sym(j, k) = s;
      sym(k, j) = s;
      gens.push_back(std::move(sym));
      Matrix anti = Matrix::Zero(n, n);
      anti(j, k) = -i_unit * s;
      anti(k, j) = i_unit * s;
      gens.push_back(std::move(anti));
    }
  }
  for (int l = 1; l < n; ++l) {
    Matrix diag = Matrix::Zero(n, n);
    const double norm = 1.0 / std::sqrt(static_cast<double>(l) * (l + 1));
    for (int j = 0; j < l; ++j) diag(j, j) = norm;
    diag(l, l) = -static_cast<double>(l) * norm;
    gens.push_back(std::move(diag));
  }
  return gens;
}

RealMatrix plane_rotation(int dim, int i, int j, double angle) {
  if (i < 0 || j < 0 || i >= dim || j >= dim || i == j) throw IndexError("invalid rotation plane");
  RealMatrix r = RealMatrix::Identity(dim, dim);
  r(i, i) = std::cos(angle);
  r(j, j) = std::cos(angle);
  r(i, j) = -std::sin(angle);
  r(j, i) = std::sin(angle);
  return r;
}

KossakowskiMap::KossakowskiMap(int n, RealMatrix rotation, Eigen::VectorXd y)
    : n_(n), rotation_(std::move(rotation)), generators_(gell_mann_generators(n)) {
  const int m = n * n - 1;
  if (rotation_.rows() != m || rotation_.cols() != m) {
    throw InvalidMapError("Kossakowski rotation must be " + std::to_string(m) + "x" + std::to_string(m));
  }
  if ((rotation_ * rotation_.transpose() - RealMatrix::Identity(m, m)).cwiseAbs().maxCoeff() > kMapTolerance) {
    throw InvalidMapError("Kossakowski rotation is not orthogonal");
  }
  if (std::abs(rotation_.determinant() - 1.0) > kMapTolerance) {
    throw InvalidMapError("Kossakowski rotation must have determinant +1");
  }
  if (y.size() != 0 && y.cwiseAbs().maxCoeff() > 0.0) {
    throw InvalidMapError("only y = 0 Kossakowski maps are supported");
  }
  for (std::size_t i = 0; i < generators_.size(); ++i) {
    if (std::abs(generators_[i].trace()) > kMapTolerance) throw InvalidMapError("generator is not traceless");
    for (std::size_t j = 0; j < generators_.size(); ++j) {
      const Complex g = (generators_[i] * generators_[j]).trace();
      if (std::abs(g - (i == j ? 1.0 : 0.0)) > kMapTolerance) {
        throw InvalidMapError("generators are not orthonormal");
      }
    }
  }
  for (const auto& sample : random_psd_matrices(n, kPositivitySamples, kPositivitySeed)) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(kossakowski_apply(*this, sample), Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -kMapTolerance) {
      throw InvalidMapError("Kossakowski map failed the empirical positivity check");
    }
  }
}

Matrix kossakowski_apply(const KossakowskiMap& map, const Matrix& a) {
  const int n = map.dimension();
  check_square(a, n, "Kossakowski map");
  const auto& gens = map.generators();
  const auto m = static_cast<Eigen::Index>(gens.size());
  Eigen::VectorXcd x(m);
  for (Eigen::Index i = 0; i < m; ++i) x(i) = (a * gens[static_cast<std::size_t>(i)]).trace();
  const Eigen::VectorXcd rx = map.rotation().cast<Complex>() * x;
  Matrix out = Matrix::Identity(n, n) * (a.trace() / static_cast<double>(n));
  for (Eigen::Index i = 0; i < m; ++i) out += gens[static_cast<std::size_t>(i)] * (rx(i) / static_cast<double>(n - 1));
  return out;
}

// ---------------------------------------------------------------------------
// Breuer family

BreuerMap::BreuerMap(Matrix unitary) : unitary_(std::move(unitary)) {
  const auto d = unitary_.rows();
  if (unitary_.cols() != d || d < 4 || d % 2 != 0) {
    throw InvalidMapError("Breuer map needs an even dimension >= 4");
  }
  if ((unitary_.adjoint() * unitary_ - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() > kMapTolerance) {
    throw InvalidMapError("Breuer matrix is not unitary");
  }
  if ((unitary_.transpose() + unitary_).cwiseAbs().maxCoeff() > kMapTolerance) {
    throw InvalidMapError("Breuer matrix is not skew-symmetric");
  }
}

Matrix breuer_unitary(const std::vector<double>& phases, const RealMatrix& rotation) {
  const auto d = rotation.rows();
  if (rotation.cols() != d || d % 2 != 0) throw DimensionError("Breuer unitary needs an even dimension");
  if (static_cast<Eigen::Index>(phases.size()) != d / 2) {
    throw DimensionError("Breuer unitary needs d/2 phases");
  }
  if ((rotation * rotation.transpose() - RealMatrix::Identity(d, d)).cwiseAbs().maxCoeff() > kMapTolerance) {
    throw InvalidMapError("Breuer rotation is not orthogonal");
  }
  Matrix diag = Matrix::Zero(d, d);
  for (Eigen::Index k = 0; k < d / 2; ++k) {
    const Complex phase = std::polar(1.0, phases[static_cast<std::size_t>(k)]);
    diag(2 * k, 2 * k + 1) = phase;
    diag(2 * k + 1, 2 * k) = -phase;
  }
  const Matrix r = rotation.cast<Complex>();
  return r * diag * r.transpose();
}

Matrix antidiagonal_breuer_unitary() {
  // R sends e0->e0, e1->e3, e2->e1, e3->e2.
  RealMatrix r = RealMatrix::Zero(4, 4);
  r(0, 0) = 1.0;
  r(3, 1) = 1.0;
  r(1, 2) = 1.0;
  r(2, 3) = 1.0;
  return breuer_unitary({0.0, 0.0}, r);
}

Matrix breuer_apply(const BreuerMap& map, const Matrix& a) {
  const int d = map.dimension();
  check_square(a, d, "Breuer map");
  const Matrix& u = map.unitary();
  return Matrix::Identity(d, d) * a.trace() - a - u * a.transpose() * u.adjoint();
}

// ---------------------------------------------------------------------------
// Dispatch

int map_dimension(const PositiveMap& map) {
  struct Visitor {
    int operator()(const ChoiMap&) const { return 3; }
    int operator()(const KossakowskiMap& m) const { return m.dimension(); }
    int operator()(const BreuerMap& m) const { return m.dimension(); }
    int operator()(const IdentityMap& m) const { return m.dimension; }
    int operator()(const TransposeMap& m) const { return m.dimension; }
  };
  return std::visit(Visitor{}, map);
}

std::string map_name(const PositiveMap& map) {
  struct Visitor {
    std::string operator()(const ChoiMap& m) const {
      if (m.alpha() == 2.0 && m.beta() == 0.0 && m.gamma() == 1.0) return "stormer";
      std::ostringstream os;
      os << "choi(" << m.alpha() << ", " << m.beta() << ", " << m.gamma() << ")";
      return os.str();
    }
    std::string operator()(const KossakowskiMap& m) const { return "kossakowski(N=" + std::to_string(m.dimension()) + ")"; }
    std::string operator()(const BreuerMap& m) const { return "breuer(d=" + std::to_string(m.dimension()) + ")"; }
    std::string operator()(const IdentityMap&) const { return "identity"; }
    std::string operator()(const TransposeMap&) const { return "transpose"; }
  };
  return std::visit(Visitor{}, map);
}

Matrix apply_map(const PositiveMap& map, const Matrix& a) {
  struct Visitor {
    const Matrix& a;
    Matrix operator()(const ChoiMap& m) const { return choi_apply(m, a); }
    Matrix operator()(const KossakowskiMap& m) const { return kossakowski_apply(m, a); }
    Matrix operator()(const BreuerMap& m) const { return breuer_apply(m, a); }
    Matrix operator()(const IdentityMap& m) const {
      check_square(a, m.dimension, "identity map");
      return a;
    }
    Matrix operator()(const TransposeMap& m) const {
      check_square(a, m.dimension, "transpose map");
      return a.transpose();
    }
  };
  return std::visit(Visitor{a}, map);
}

MomentMatrix apply_partial(const MomentMatrix& m, const PositiveMap& map, Side side) {
  const auto da = static_cast<Eigen::Index>(m.d_a), db = static_cast<Eigen::Index>(m.d_b);
  const int dim = map_dimension(map);
  if (dim != (side == Side::A ? da : db)) {
    throw DimensionError(map_name(map) + " has dimension " + std::to_string(dim) + " but side " +
                         to_string(side) + " has dimension " + std::to_string(side == Side::A ? da : db));
  }
  const BlockLayout layout = BlockLayout::moment(m.d_a, m.d_b);
  Matrix out(m.entries.rows(), m.entries.cols());
  if (side == Side::A) {
    // A index fastest: the (l, l') blocks are contiguous d_A x d_A tiles.
    for (Eigen::Index l = 0; l < db; ++l) {
      for (Eigen::Index lp = 0; lp < db; ++lp) {
        out.block(l * da, lp * da, da, da) = apply_map(map, m.entries.block(l * da, lp * da, da, da));
      }
    }
  } else {
    Matrix block(db, db);
    for (std::size_t k = 0; k < m.d_a; ++k) {
      for (std::size_t kp = 0; kp < m.d_a; ++kp) {
        for (std::size_t l = 0; l < m.d_b; ++l) {
          for (std::size_t lp = 0; lp < m.d_b; ++lp) {
            block(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(lp)) =
                m.entries(static_cast<Eigen::Index>(layout.index(k, l)), static_cast<Eigen::Index>(layout.index(kp, lp)));
          }
        }
        const Matrix image = apply_map(map, block);
        for (std::size_t l = 0; l < m.d_b; ++l) {
          for (std::size_t lp = 0; lp < m.d_b; ++lp) {
            out(static_cast<Eigen::Index>(layout.index(k, l)), static_cast<Eigen::Index>(layout.index(kp, lp))) =
                image(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(lp));
          }
        }
      }
    }
  }
  return MomentMatrix{std::move(out), m.d_a, m.d_b, m.provenance + " | " + map_name(map) + " on " + to_string(side)};
}

std::vector<Matrix> random_psd_matrices(int dim, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_int_distribution<int> rank_dist(1, dim);
  std::vector<Matrix> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int s = 0; s < count; ++s) {
    const int rank = rank_dist(rng);
    Matrix g(dim, rank);
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < rank; ++j) g(i, j) = Complex(normal(rng), normal(rng));
    }
    Matrix p = g * g.adjoint();
    p /= p.trace().real();
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace momsep
