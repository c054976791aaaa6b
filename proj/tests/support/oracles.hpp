#pragma once

// Independent reference computations and random inputs for the tests.

#include <array>
#include <functional>
#include <random>
#include <vector>

#include "momsep/criteria.hpp"
#include "momsep/fock.hpp"
#include "momsep/posmaps.hpp"
#include "momsep/reconstruct.hpp"
#include "momsep/reorder.hpp"

namespace oracle {

using momsep::Complex;
using momsep::DensityMatrix;
using momsep::Matrix;
using momsep::ModeCutoffs;
using momsep::StateVector;

using Rng = std::mt19937_64;

StateVector random_pure(const ModeCutoffs& cutoffs, Rng& rng);
/// rho = G G^dag / Tr with G of the given rank (0 = full).
DensityMatrix random_density(const ModeCutoffs& cutoffs, Rng& rng, int rank = 0);
/// Convex mixture of `terms` products rho_a (x) rho_b of single-mode states.
DensityMatrix random_separable(int cutoff_a, int cutoff_b, int terms, Rng& rng);
/// A random class whose entries are monomials on a single mode per side.
momsep::OperatorClass random_class(Rng& rng, int max_power = 2, int max_entries = 3);

/// <spec> as Tr(rho X) with X built from dense ladder matrices on a space
/// padded far enough that truncation cannot touch the result.
Complex dense_moment(const DensityMatrix& rho, const momsep::Monomial& spec);

/// Closed-form moments of a normalized superposition of product coherent
/// states, from <beta|alpha> = exp(-|alpha|^2/2 - |beta|^2/2 + conj(beta) alpha).
Complex coherent_moment(const std::vector<momsep::CoherentTerm>& terms, const momsep::Monomial& spec);

/// out(i, j) as a linear combination of the inputs: coefficient of M(k, l)
/// obtained by feeding elementary matrices E_kl through `f`.
struct Coefficient {
  int row;  // 1-based source index
  int col;
  Complex value;
};
std::vector<Coefficient> probe(const std::function<Matrix(const Matrix&)>& f, int n, int i, int j);

/// Tensor-product Gram structure: M_ij = <f_i psi | f_j psi> written out
/// from monomial_matrix, used as a second route to the moment matrix.
Matrix dense_moment_matrix(const DensityMatrix& rho, const momsep::OperatorClass& cls);

/// Tr(rho F_i^dag F_j) for a single-mode rho; `mode` says which mode the
/// monomials in `ops` act on.
Matrix dense_gram(const DensityMatrix& rho, const std::vector<momsep::Monomial>& ops, int mode);

}  // namespace oracle

namespace oracle {

/// Every two-mode criterion with the published classes, maps and index sets,
/// plus the state-level tests when the state is small enough.
std::vector<momsep::Verdict> criteria_battery(const momsep::State& state, double tol);

/// Mixture of product coherent states with random amplitudes (|alpha| <= max_amp).
momsep::DensityMatrix random_coherent_separable(int terms, double max_amp, Rng& rng);

}  // namespace oracle
