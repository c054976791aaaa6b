#include "momsep/reconstruct.hpp"

#include <cmath>
#include <set>
#include <string>

#include "momsep/errors.hpp"
#include "momsep/reorder.hpp"

namespace momsep {

namespace {

constexpr double kConjugateTolerance = 1e-10;
constexpr double kConsistencyTolerance = 1e-8;
constexpr int kDivergenceWindow = 5;

double factorial(int n) { return std::tgamma(static_cast<double>(n) + 1.0); }

std::size_t source_modes(const MomentSource& source) {
  if (const auto* s = std::get_if<State>(&source)) return cutoffs_of(*s).modes();
  return 0;  // tables carry no mode count
}

void check_dims(const MomentSource& source, std::span<const int> dims) {
  if (dims.empty()) throw DimensionError("assumed_dims must name at least one mode");
  for (int d : dims) {
    if (d < 1) throw DimensionError("assumed dimension must be positive");
  }
  const auto modes = source_modes(source);
  if (modes != 0 && modes != dims.size()) {
    throw DimensionError("state has " + std::to_string(modes) + " modes but " + std::to_string(dims.size()) +
                         " assumed dimensions were given");
  }
}

// Moments fetched once per reconstruction; tables report every missing spec together.
class MomentCache {
public:
  explicit MomentCache(const MomentSource& source) : source_(source) {}

  void require(const std::set<Monomial>& specs) {
    std::vector<std::string> missing;
    for (const auto& spec : specs) {
      if (cache_.count(spec)) continue;
      if (const auto* s = std::get_if<State>(&source_)) {
        cache_[spec] = moment(*s, spec);
      } else if (auto v = std::get<MomentTable>(source_).lookup(spec)) {
        cache_[spec] = *v;
      } else {
        missing.push_back(spec.to_string());
      }
    }
    if (!missing.empty()) throw MissingMomentError(std::move(missing));
  }

  Complex at(const Monomial& spec) const { return cache_.at(spec); }

private:
  const MomentSource& source_;
  std::map<Monomial, Complex> cache_;
};

struct SeriesTerm {
  double coefficient;
  Monomial spec;
  int order;
};

std::vector<SeriesTerm> series_terms(std::span<const int> m1, std::span<const int> m2, std::span<const int> dims) {
  const std::size_t modes = dims.size();
  if (m1.size() != modes || m2.size() != modes) throw DimensionError("occupation length differs from assumed_dims");
  std::vector<int> limit(modes);
  double norm = 1.0;
  for (std::size_t i = 0; i < modes; ++i) {
    if (m1[i] < 0 || m2[i] < 0 || m1[i] >= dims[i] || m2[i] >= dims[i]) {
      throw IndexError("occupation outside assumed dimension on mode " + mode_name(static_cast<int>(i)));
    }
    limit[i] = dims[i] - std::max(m1[i], m2[i]);
    norm *= std::sqrt(factorial(m1[i]) * factorial(m2[i]));
  }
  std::vector<SeriesTerm> out;
  std::vector<int> j(modes, 0);
  while (true) {
    double c = 1.0 / norm;
    int order = 0;
    std::vector<ModePowers> powers(modes);
    for (std::size_t i = 0; i < modes; ++i) {
      c *= ((j[i] % 2) ? -1.0 : 1.0) / factorial(j[i]);
      powers[i] = {m2[i] + j[i], m1[i] + j[i]};
      order += j[i];
    }
    out.push_back({c, Monomial(std::move(powers)), order});
    std::size_t i = modes;
    while (i > 0) {
      --i;
      if (++j[i] < limit[i]) break;
      j[i] = 0;
      if (i == 0) return out;
    }
    if (modes == 0) return out;
  }
}

// Tail-anchored: high Fock states have growing terms early in the series
// that decay before the truncation, so only the last orders are examined.
void check_divergence(const std::vector<SeriesTerm>& terms, const MomentCache& cache) {
  int max_order = 0;
  for (const auto& t : terms) max_order = std::max(max_order, t.order);
  if (max_order < kDivergenceWindow) return;
  std::vector<double> by_order(static_cast<std::size_t>(max_order) + 1, 0.0);
  for (const auto& t : terms) by_order[static_cast<std::size_t>(t.order)] += std::abs(t.coefficient * cache.at(t.spec));
  for (int s = max_order - kDivergenceWindow; s < max_order; ++s) {
    const double now = by_order[static_cast<std::size_t>(s)];
    const double next = by_order[static_cast<std::size_t>(s) + 1];
    // ratios of exactly 1 (thermal n = 1) come out a few ulps short
    const bool growing = now == 0.0 ? next > 0.0 : next / now >= 1.0 - 1e-9;
    if (!growing) return;
  }
  throw DivergenceError("moment series terms do not decay over the last " + std::to_string(kDivergenceWindow) +
                        " orders before the assumed dimension; the reconstruction is not trustworthy");
}

Complex sum_series(const std::vector<SeriesTerm>& terms, const MomentCache& cache) {
  Complex sum = 0.0;
  for (const auto& t : terms) sum += t.coefficient * cache.at(t.spec);
  return sum;
}

std::set<Monomial> specs_of(const std::vector<SeriesTerm>& terms) {
  std::set<Monomial> out;
  for (const auto& t : terms) out.insert(t.spec);
  return out;
}

// Hermitian, unit trace and PSD within kConsistencyTolerance; small violations are cleaned up.
DensityMatrix validated(const ModeCutoffs& cutoffs, const Matrix& raw) {
  const double herm = (raw - raw.adjoint()).cwiseAbs().maxCoeff();
  if (herm > kConsistencyTolerance) {
    throw InconsistentMomentsError("reconstructed matrix is not Hermitian (deviation " + std::to_string(herm) + ")");
  }
  Matrix h = 0.5 * (raw + raw.adjoint());
  const double tr = h.trace().real();
  if (std::abs(tr - 1.0) > kConsistencyTolerance) {
    throw InconsistentMomentsError("reconstructed trace is " + std::to_string(tr));
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(h);
  const double min_ev = eig.eigenvalues().minCoeff();
  if (min_ev < -kConsistencyTolerance) {
    throw InconsistentMomentsError("reconstructed matrix has eigenvalue " + std::to_string(min_ev));
  }
  if (min_ev < 0.0) {
    const Eigen::VectorXd clipped = eig.eigenvalues().cwiseMax(0.0);
    h = eig.eigenvectors() * clipped.cast<Complex>().asDiagonal() * eig.eigenvectors().adjoint();
  }
  h /= h.trace().real();
  return DensityMatrix(cutoffs, h);
}

// Per-mode expansion of |c><r| for a qubit: (coefficient, powers) pairs.
std::vector<std::pair<double, ModePowers>> qubit_operator(int r, int c) {
  if (r == 0 && c == 0) return {{1.0, {0, 0}}, {-1.0, {1, 1}}};  // 1 - N
  if (r == 1 && c == 0) return {{1.0, {0, 1}}};                   // a
  if (r == 0 && c == 1) return {{1.0, {1, 0}}};                   // a^dag
  return {{1.0, {1, 1}}};                                          // N
}

}  // namespace

MomentTable::MomentTable(std::map<Monomial, Complex> values) {
  for (const auto& [spec, value] : values) set(spec, value);
}

void MomentTable::set(const Monomial& spec, Complex value) {
  const auto adj = spec.adjoint();
  const auto it = values_.find(adj);
  const bool clash = adj == spec ? std::abs(value.imag()) > kConjugateTolerance
                                 : it != values_.end() && std::abs(it->second - std::conj(value)) > kConjugateTolerance;
  if (clash) {
    throw InconsistentMomentsError("moment table values for " + spec.to_string() + " and " + adj.to_string() +
                                   " are not complex conjugates");
  }
  values_[spec] = value;
}

std::optional<Complex> MomentTable::lookup(const Monomial& spec) const {
  if (auto it = values_.find(spec); it != values_.end()) return it->second;
  if (auto it = values_.find(spec.adjoint()); it != values_.end()) return std::conj(it->second);
  if (spec.is_identity()) return Complex(1.0, 0.0);
  return std::nullopt;
}

MomentTable MomentTable::from_state(const State& state, std::span<const int> assumed_dims) {
  check_dims(MomentSource(state), assumed_dims);
  const ModeCutoffs grid(std::vector<int>(assumed_dims.begin(), assumed_dims.end()), kDefaultMaxDimension * 64);
  MomentTable table;
  for (std::size_t p = 0; p < grid.total(); ++p) {
    for (std::size_t q = 0; q < grid.total(); ++q) {
      const auto cre = grid.occupations(p), ann = grid.occupations(q);
      std::vector<ModePowers> powers(cre.size());
      for (std::size_t i = 0; i < cre.size(); ++i) powers[i] = {cre[i], ann[i]};
      const Monomial spec(std::move(powers));
      if (!table.values_.count(spec)) table.values_[spec] = moment(state, spec);
    }
  }
  return table;
}

Complex density_element(const MomentSource& source, std::span<const int> m1, std::span<const int> m2,
                        std::span<const int> assumed_dims) {
  check_dims(source, assumed_dims);
  const auto terms = series_terms(m1, m2, assumed_dims);
  MomentCache cache(source);
  cache.require(specs_of(terms));
  check_divergence(terms, cache);
  return sum_series(terms, cache);
}

DensityMatrix reconstruct_density(const MomentSource& source, std::span<const int> assumed_dims) {
  check_dims(source, assumed_dims);
  const ModeCutoffs grid(std::vector<int>(assumed_dims.begin(), assumed_dims.end()));
  const auto n = static_cast<Eigen::Index>(grid.total());
  std::vector<std::vector<SeriesTerm>> all_terms;
  std::set<Monomial> needed;
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) {
      const auto o1 = grid.occupations(static_cast<std::size_t>(r));
      const auto o2 = grid.occupations(static_cast<std::size_t>(c));
      all_terms.push_back(series_terms(o1, o2, assumed_dims));
      const auto s = specs_of(all_terms.back());
      needed.insert(s.begin(), s.end());
    }
  }
  MomentCache cache(source);
  cache.require(needed);
  Matrix raw(n, n);
  std::size_t idx = 0;
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c, ++idx) {
      check_divergence(all_terms[idx], cache);
      raw(r, c) = sum_series(all_terms[idx], cache);
    }
  }
  return validated(grid, raw);
}

std::vector<Monomial> two_qubit_moment_specs() {
  const ModePowers per_mode[] = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
  std::vector<Monomial> out;
  for (const auto& pa : per_mode) {
    for (const auto& pb : per_mode) out.emplace_back(std::vector<ModePowers>{pa, pb});
  }
  return out;
}

DensityMatrix two_qubit_density(const MomentSource& source) {
  if (const auto* s = std::get_if<State>(&source)) {
    const auto& cut = cutoffs_of(*s);
    if (cut.modes() != 2) throw DimensionError("two-qubit reconstruction needs a two-mode state");
    const auto rho = to_density(*s);
    double outside = 0.0;
    for (std::size_t i = 0; i < cut.total(); ++i) {
      const auto occ = cut.occupations(i);
      if (occ[0] > 1 || occ[1] > 1) outside += rho.matrix()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real();
    }
    if (outside > kConsistencyTolerance) {
      throw InvalidStateError("state has weight " + std::to_string(outside) + " outside {0,1} x {0,1}");
    }
  }
  const auto specs = two_qubit_moment_specs();
  MomentCache cache(source);
  cache.require(std::set<Monomial>(specs.begin(), specs.end()));

  Matrix raw(4, 4);
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      // rho_rc = <r|rho|c> = Tr(rho |c><r|), factor by factor.
      Complex value = 0.0;
      for (const auto& [ca, pa] : qubit_operator(r / 2, c / 2)) {
        for (const auto& [cb, pb] : qubit_operator(r % 2, c % 2)) {
          value += ca * cb * cache.at(Monomial(std::vector<ModePowers>{pa, pb}));
        }
      }
      raw(r, c) = value;
    }
  }
  return validated(ModeCutoffs({2, 2}), raw);
}

std::vector<Verdict> state_level_tests(const Matrix& rho, std::size_t d_a, std::size_t d_b, double tol) {
  if (d_a == 0 || d_b == 0 || rho.rows() != rho.cols() || static_cast<std::size_t>(rho.rows()) != d_a * d_b) {
    throw DimensionError("dims " + std::to_string(d_a) + " x " + std::to_string(d_b) +
                         " do not factorize a matrix of size " + std::to_string(rho.rows()));
  }
  const auto layout = BlockLayout::fock(d_a, d_b);
  const std::string split = std::to_string(d_a) + "x" + std::to_string(d_b);
  const double tr = rho.trace().real();
  if (!(tr > 1e-14)) throw DegenerateStateError("density matrix has zero trace");

  const Matrix pt = partial_transpose(rho, layout, Side::A);
  const Matrix re = realign(rho, layout);
  std::vector<Verdict> out;

  Verdict gamma;
  gamma.criterion = "state_pt_norm";
  gamma.tolerance = tol;
  gamma.threshold = 1.0;
  gamma.operator_class = split;
  gamma.side = "A";
  const double nu_g = trace_norm(pt) / tr;
  gamma.witnesses = {{"pt_norm", nu_g}};
  gamma.outcome = nu_g > 1.0 + tol ? Outcome::Entangled : Outcome::Inconclusive;
  gamma.witness_matrix = pt;
  out.push_back(gamma);

  Verdict realigned;
  realigned.criterion = "state_realign_norm";
  realigned.tolerance = tol;
  realigned.threshold = 1.0;
  realigned.operator_class = split;
  const double nu_r = trace_norm(re) / tr;
  realigned.witnesses = {{"realign_norm", nu_r}};
  realigned.outcome = nu_r > 1.0 + tol ? Outcome::Entangled : Outcome::Inconclusive;
  realigned.witness_matrix = re;
  out.push_back(realigned);

  Verdict ppt;
  ppt.criterion = "state_ppt";
  ppt.tolerance = tol;
  ppt.operator_class = split;
  ppt.side = "A";
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (pt + pt.adjoint()), Eigen::EigenvaluesOnly);
  const double ev = eig.eigenvalues().minCoeff();
  ppt.witnesses = {{"min_eig", ev}};
  const bool small = std::min(d_a, d_b) == 2 && std::max(d_a, d_b) <= 3;
  if (ev < -tol) {
    ppt.outcome = Outcome::Entangled;
  } else if (small) {
    ppt.outcome = Outcome::Separable;
    ppt.note = "PPT is sufficient for separability at " + split;
  } else {
    ppt.outcome = Outcome::Inconclusive;
  }
  ppt.witness_matrix = pt;
  out.push_back(ppt);
  return out;
}

std::vector<Verdict> state_level_tests(const DensityMatrix& rho, std::size_t d_a, std::size_t d_b, double tol) {
  return state_level_tests(rho.matrix(), d_a, d_b, tol);
}

}  // namespace momsep
