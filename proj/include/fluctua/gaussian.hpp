#pragma once

#include "fluctua/linalg.hpp"

#include <string>
#include <utility>
#include <vector>

namespace fluctua {

/// A finite set of real field components together with the antisymmetric
/// form sigma that encodes their commutators ([F_mu, F_nu] = i sigma_mu_nu).
struct ModeSpace {
  int n = 0;
  Mat sigma;

  ModeSpace() = default;
  ModeSpace(int n_, Mat sigma_);
};

/// Gaussian state over a ModeSpace, fully described by its covariance matrix.
struct GaussianState {
  ModeSpace space;
  Mat Sigma;

  GaussianState() = default;
  GaussianState(ModeSpace space_, Mat Sigma_);

  int n() const { return space.n; }
};

struct ValidityReport {
  bool valid = false;
  double min_eigenvalue = 0.0;  // of Sigma + (i/2) sigma
};

/// Checks Sigma + (i/2) sigma >= 0 (up to the shared PSD tolerance).
ValidityReport validate_gaussian(const GaussianState& state);

/// Correlation matrix C = Sigma + (i/2) sigma of a state.
CMat correlation_matrix(const GaussianState& state);

struct WeylProduct {
  Vec r_sum;
  double phase;  // coefficient of i in the exponent: -(1/2) r1.sigma.r2
};

/// Composition data for W(r1) W(r2) = W(r1 + r2) exp(i * phase).
WeylProduct weyl_product(const Vec& r1, const Vec& r2, const ModeSpace& space);

/// Gaussian characteristic function exp(-(1/2) r.Sigma.r); in (0, 1].
double char_function(const GaussianState& state, const Vec& r);

/// Marginal state on the kept components (0-based indices).
GaussianState reduce_modes(const GaussianState& state, const std::vector<int>& keep);

/// Canonical (q, p) pair with a bipartition label.
struct ModePair {
  int q = 0;
  int p = 0;
  char side = 'A';  // 'A' or 'B'
};

/// Partition of all components into canonical pairs, each assigned to
/// subsystem A or B.
struct ModePartition {
  std::vector<ModePair> pairs;

  void validate(const GaussianState& state) const;
};

/// Flips the sign of the momentum rows/columns of every B pair in Sigma.
/// The result need not be a valid state.
GaussianState partial_transpose(const GaussianState& state, const ModePartition& partition);

/// Symplectic spectrum: sorted moduli of the eigenvalues of sigma^{-1} Sigma,
/// one per canonical pair. The sigma^{-1} factor absorbs any positive scalar
/// carried by the pair blocks, so the vacuum value is 1/2.
std::vector<double> symplectic_spectrum(const GaussianState& state);

/// E = sum of -log2(2 nu) over all symplectic eigenvalues with 2 nu < 1
/// (entries within 1e-12 of the boundary count as unentangled).
double negativity_from_spectrum(const std::vector<double>& nus);

/// Logarithmic negativity across the partition: partial transpose, then
/// negativity_from_spectrum of the resulting symplectic eigenvalues.
double log_negativity(const GaussianState& state, const ModePartition& partition);

/// Squeezes the listed canonical pairs: Sigma -> S Sigma S^T with
/// S = diag(e^{-r}, e^{+r}) on each pair, identity elsewhere.
GaussianState squeeze(const GaussianState& state,
                      const std::vector<std::pair<int, int>>& pairs, double r);

}  // namespace fluctua
