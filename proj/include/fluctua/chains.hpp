#pragma once

#include "fluctua/semigroup.hpp"

#include <string>
#include <vector>

#include <json.hpp>

namespace fluctua {

/// Single-site algebra data: a finite-dimensional site with a density matrix
/// and a list of Hermitian basis observables.
struct SiteAlgebra {
  int d = 0;
  std::vector<CMat> basis_ops;
  CMat rho;

  SiteAlgebra() = default;
  SiteAlgebra(int d_, std::vector<CMat> basis_ops_, CMat rho_);
};

/// C_{mu nu} = tr[rho x~_mu x~_nu] over the selected (centered) observables.
CMat correlation_from_state(const SiteAlgebra& site, const std::vector<int>& ops);

struct ChainParams {
  double beta = 0.0;
  double eps = 0.0;
  double gamma = 0.0;   // spin dissipative coupling
  double J0 = 0.0;      // spin on-site mixing strength
  double lambda = 0.0;  // oscillator statistical coupling
};

/// A concrete chain model: field-basis quasi-free data plus the bosonic mode
/// decomposition and the canonical-coordinate representation derived from it.
struct ModelBundle {
  std::string kind;  // "spin-double-chain" | "oscillator-double-chain"
  ChainParams params;
  double eta = 0.0;

  QuasiFreeModel model;  // sigma, Sigma_ref, L in the field-component basis
  CMat C_ref;            // Sigma_ref + (i/2) sigma
  CMat mode_map;         // f: n x n_modes coefficients of the (a, a^dagger) expansion
  CMat kossakowski;      // dissipator coefficient matrix of the microscopic generator

  // Canonical representation: F = T R with R = (q_1, p_1, q_2, p_2, ...).
  Mat field_from_canonical;  // T, invertible n x n
  QuasiFreeModel canonical;  // sigma = J per pair, L_R = T^{-1} L T

  int n_modes() const { return static_cast<int>(mode_map.cols()); }
};

/// [F_mu, F_nu] = i sigma_mu_nu recovered from the mode map:
/// returns -i sum_i (conj(f_mu^i) f_nu^i - f_mu^i conj(f_nu^i)).
Mat mode_map_ccr(const CMat& mode_map);

/// T such that F = T R, built from the real/imaginary parts of the mode map.
Mat field_from_canonical_of(const CMat& mode_map);

/// Double chain of 1/2 spins in a common thermal bath.
/// Requires beta, eps, J0 > 0 and |gamma| <= 1/2.
ModelBundle spin_double_chain(double beta, double eps, double gamma, double J0);

/// Double chain of harmonic oscillators in a common thermal bath.
/// Requires beta, eps > 0 and lambda^2 <= 1.
ModelBundle oscillator_double_chain(double beta, double eps, double lambda);

/// Site algebra of one double-chain spin site (dimension 4) with the thermal
/// density matrix and the eight field observables.
SiteAlgebra spin_double_site(double beta, double eps);

enum class ChainKind { Spin, Oscillator };

struct SingleChainPreset {
  Mat sigma;
  Mat Sigma;
  std::vector<int> classical;  // components with vanishing commutator rows
};

SingleChainPreset single_chain_preset(ChainKind kind, double beta, double eps);

enum class SpinExponentConvention { EnergyScaled, BetaOnly };

/// Variance per component of the rescaled spin pair (X, P): the characteristic
/// function is exp(-(1/2) (r1^2 + r2^2) v). EnergyScaled gives
/// v = coth(beta*eps/2)/2; BetaOnly gives v = coth(beta/2)/2.
double spin_rescaled_pair_variance(double beta, double eps,
                                   SpinExponentConvention conv = SpinExponentConvention::EnergyScaled);

/// Exact finite-size characteristic value omega(exp(i r . F^(N))) for the
/// product state: [tr(rho exp(i r.x~ / sqrt(N)))]^N.
Cplx finite_N_char(const SiteAlgebra& site, const std::vector<int>& ops, const Vec& r, long N);

/// Large-N Gaussian limit exp(-(1/2) r . Sigma . r) of the same quantity.
double gaussian_limit_char(const SiteAlgebra& site, const std::vector<int>& ops, const Vec& r);

/// |omega(Xbar Ybar) - omega(x) omega(y)| for mean-field averages over a
/// product state; equals |tr(rho x y) - tr(rho x) tr(rho y)| / N exactly.
double meanfield_product_gap(const SiteAlgebra& site, const CMat& x, const CMat& y, long N);

void to_json(nlohmann::json& j, const ModelBundle& bundle);
ModelBundle bundle_from_json(const nlohmann::json& j);

}  // namespace fluctua
