#pragma once

#include "fluctua/gaussian.hpp"

namespace fluctua {

/// Quasi-free dissipative model: drift matrix L acting on the field span,
/// together with the reference covariance of the invariant Gaussian state.
struct QuasiFreeModel {
  ModeSpace space;  // carries sigma^(omega)
  Mat drift;        // L, units 1/time
  Mat Sigma_ref;    // Sigma^(omega)

  QuasiFreeModel() = default;
  QuasiFreeModel(ModeSpace space_, Mat drift_, Mat Sigma_ref_);

  int n() const { return space.n; }
  GaussianState reference_state() const { return GaussianState(space, Sigma_ref); }
};

/// M_t = exp(t L). Rejects t < 0 (the semigroup is forward-only).
Mat propagator(const QuasiFreeModel& model, double t);

/// K_t = Sigma_ref - M_t Sigma_ref M_t^T (symmetric; PSD for invariant states).
Mat noise_matrix(const QuasiFreeModel& model, double t);

/// Sigma(t) = Sigma_ref - M_t Sigma_ref M_t^T + M_t Sigma0 M_t^T.
Mat evolve_covariance(const Mat& Sigma0, const QuasiFreeModel& model, double t);

struct WeylAction {
  double log_prefactor = 0.0;  // -(1/2) r.K_t.r, <= 0 for invariant states
  Vec r_t;                     // M_t^T r
};

/// Action of the semigroup on a Weyl operator label r.
WeylAction apply_to_weyl(const QuasiFreeModel& model, const Vec& r, double t);

struct CpReport {
  bool pass = false;
  double margin = 0.0;  // min eigenvalue of C_ref - M_t C_ref M_t^T
};

/// Complete-positivity condition at time t:
/// Sigma + (i/2) sigma - M_t (Sigma + (i/2) sigma) M_t^T >= 0.
CpReport check_cp(const QuasiFreeModel& model, double t);

struct GeneratorMatrices {
  CMat H_frak;  // Hermitian
  CMat D_frak;  // positive semidefinite
};

/// Quadratic generator matrices recovered from the drift and the reference
/// correlation matrix:
///   H = -i s^{-1} (L C - C L^T) s^{-1},  D = s^{-1} (L C + C L^T) s^{-1}.
GeneratorMatrices generator_matrices(const QuasiFreeModel& model, const CMat& C_ref);

}  // namespace fluctua
