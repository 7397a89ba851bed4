#pragma once

#include "fluctua/gaussian.hpp"

#include <vector>

namespace fluctua {

/// Real structure constants of a Hermitian operator basis:
/// [v_alpha, v_beta] = i sum_gamma f[gamma](alpha, beta) v_gamma.
struct StructureConstants {
  std::vector<Mat> f;

  int dim() const { return static_cast<int>(f.size()); }
  void validate() const;
};

/// su(2) structure constants (epsilon symbol), dimension 3.
StructureConstants su2_structure();

/// Block direct sum of two structure-constant sets.
StructureConstants direct_sum(const StructureConstants& a, const StructureConstants& b);

/// Mean-field model: Kossakowski matrix split into symmetric/antisymmetric
/// parts plus optional Hamiltonian coefficients, over a basis with known
/// structure constants.
struct MeanFieldModel {
  StructureConstants f;
  CMat C;        // Kossakowski matrix, Hermitian PSD
  Mat A;         // (C + C^T)/2, real symmetric; drives the fluctuation noise
  CMat Btilde;   // (C - C^T)/2 + 2i h, purely imaginary entries
  Mat h;         // real (symmetric) part of the mean-field Hamiltonian coefficients
  Mat kappa;     // imaginary (antisymmetric) part

  /// Double-commutator weight of the generator decomposition, A - 2 kappa.
  Mat A_tilde() const { return A - 2.0 * kappa; }

  double fluct_rescale = 1.0;  // fluctuation fields carry a 1/sqrt(rescale) factor
  std::vector<int> reduced;    // field components retained for fluctuations
  std::vector<CMat> site_basis;  // single-site representations of the v's

  int dim() const { return f.dim(); }

  /// sigma^(omega)_{mu nu} = sum_gamma f[gamma](mu, nu) omega_gamma (unrescaled).
  Mat sigma_of(const Vec& omega) const;

  /// Submatrix on the retained components.
  Mat reduce(const Mat& full) const;

  /// Rescaled symplectic form of the fluctuation fields on the retained
  /// components: reduce(sigma_of(omega)) / fluct_rescale.
  ModeSpace fluct_space(const Vec& omega) const;
};

MeanFieldModel make_meanfield_model(StructureConstants f, CMat C, Mat h, Mat kappa);

/// Purely dissipative single-spin mean-field model (pumping dissipator).
MeanFieldModel single_spin_meanfield_model();

/// D^(omega)_{mu gamma} = i sum_{alpha beta} f[gamma](alpha, mu) Btilde_{alpha beta} omega_beta;
/// real and antisymmetric.
Mat drift_matrix(const MeanFieldModel& model, const Vec& omega);

struct MacroTrajectory {
  double dt = 0.0;
  std::vector<double> t;
  std::vector<Vec> omega;

  const Vec& back() const { return omega.back(); }
};

/// Fixed-step RK4 on d omega/dt = D^(omega) omega, storing every step.
MacroTrajectory integrate_macro(const MeanFieldModel& model, const Vec& omega0, double T,
                                double dt);

/// Time-dependent emergent Hamiltonian -i sum_{k<=S} Btilde_{mu nu} omega_nu v_mu^(k)
/// on S sites, as a dense Hermitian matrix.
CMat emergent_hamiltonian(const MeanFieldModel& model, const Vec& omega_t, int sites);

struct SpinRotation {
  Mat M;                   // 3x3 orthogonal, det 1
  double gamma = 0.0;      // accumulated rotation phase
  bool degenerate = false; // omega_12 = 0: rotation axis undefined, M = identity
};

/// Emergent single-spin unitary as a rotation acting on the spin vector.
/// gamma(t) is obtained by quadrature of omega_1(t), omega_2(t) along the
/// co-integrated macroscopic trajectory.
SpinRotation emergent_unitary_spin(const Vec& omega0, double t, double dt = 1e-3);

/// Rotation matrix for a given phase gamma (shared shape of the closed form).
Mat spin_rotation_from_gamma(const Vec& omega0, double gamma);

struct FluctState {
  double t = 0.0;
  Vec omega;  // full macroscopic vector
  Mat X;      // propagator on the retained components
  Mat Y;      // accumulated noise on the retained components
};

/// Co-integrates (omega, X, Y) with one RK4 grid:
///   dX/dt = Q^(omega_t) X,      Q = -i sigma^(omega) Btilde + D^(omega),
///   dY/dt = Q Y + Y Q^T + sigma^(omega) A sigma^(omega)^T / rescale.
/// All matrices live on the retained components (classical directions enter
/// only through omega).
FluctState integrate_fluct(const MeanFieldModel& model, const Vec& omega0, double t, double dt);

/// As integrate_fluct, sampling every `stride` steps (t = 0 included).
std::vector<FluctState> integrate_fluct_trajectory(const MeanFieldModel& model, const Vec& omega0,
                                                   double t, double dt, int stride);

Mat fluct_propagator(const MeanFieldModel& model, const Vec& omega0, double t, double dt = 1e-3);
Mat fluct_noise(const MeanFieldModel& model, const Vec& omega0, double t, double dt = 1e-3);

/// Sigma_t = X_t Sigma0 X_t^T + Y_t on the retained components.
Mat evolve_fluct_covariance(const Mat& Sigma0, const MeanFieldModel& model, const Vec& omega0,
                            double t, double dt = 1e-3);

/// Two coupled spin chains with a purely dissipative mean-field generator.
struct TwoChainModel {
  MeanFieldModel model;  // six-operator basis, components {0,1,3,4} retained
  Vec omega0;            // (0, 0, -zeta, 0, 0, -zeta), a fixed point
  Mat Sigma0;            // 1/(4 zeta) on the retained components
  bool zeta_warning = false;  // zeta > 1/2: initial covariance below vacuum
};

/// Requires a >= b^2 (complete positivity) and zeta > 0.
TwoChainModel twochain_meanfield_model(double a, double b, double zeta);

/// Closed-form asymptotic logarithmic negativity
/// max{0, -log2((1 + a - |a-1|) / (4 b zeta))}; requires a >= b^2, b > 0, zeta > 0.
double asymptotic_negativity(double a, double b, double zeta);

}  // namespace fluctua
