#include <doctest.h>

#include "fluctua/chains.hpp"
#include "fluctua/semigroup.hpp"

#include <cmath>
#include <random>

using namespace fluctua;

namespace {

// Random valid model: sigma and Sigma_ref congruent images of scaled
// standard-form blocks, arbitrary drift.
QuasiFreeModel random_model(std::mt19937& rng, int pairs) {
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  const int n = 2 * pairs;
  Mat a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = uni(rng);
  const Mat q = Eigen::HouseholderQR<Mat>(a).householderQ();
  Mat j2(2, 2);
  j2 << 0, 1, -1, 0;
  Mat sig = Mat::Zero(n, n), cov = Mat::Zero(n, n);
  for (int p = 0; p < pairs; ++p) {
    const double c = 0.5 + std::abs(uni(rng));
    const double nu = c * (0.5 + 0.75 * std::abs(uni(rng)));
    sig.block(2 * p, 2 * p, 2, 2) = c * j2;
    cov.block(2 * p, 2 * p, 2, 2) = nu * Mat::Identity(2, 2);
  }
  sig = q.transpose() * sig * q;
  cov = q.transpose() * cov * q;
  Mat drift(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) drift(i, j) = uni(rng);
  return QuasiFreeModel(ModeSpace(n, sig), drift, cov);
}

QuasiFreeModel uniform_damping_model(double J0) {
  // the eps = 0, gamma = 0 limit of the spin double chain: L = -J0 * identity
  const ModelBundle bundle = spin_double_chain(3.0, 1.0, 0.5, 1.0);
  return QuasiFreeModel(bundle.model.space, Mat(-J0 * Mat::Identity(8, 8)),
                        bundle.model.Sigma_ref);
}

}  // namespace

TEST_CASE("propagator: identity at t = 0, exponential law, scalar limit") {
  const ModelBundle bundle = spin_double_chain(10.0, 1.0, 0.5, 1.0);
  const auto& model = bundle.model;

  CHECK(max_abs(Mat(propagator(model, 0.0) - Mat::Identity(8, 8))) < 1e-15);
  CHECK_THROWS_AS(propagator(model, -0.1), std::invalid_argument);

  const Mat m1 = propagator(model, 0.7);
  const Mat m2 = propagator(model, 1.1);
  const Mat m12 = propagator(model, 1.8);
  CHECK(max_abs(Mat(m1 * m2 - m12)) < 1e-10);

  // oracle: with L = -J0 * 1 the exponential is the scalar e^{-J0 t}
  const double J0 = 1.4;
  const QuasiFreeModel damping = uniform_damping_model(J0);
  const double t = 0.9;
  CHECK(max_abs(Mat(propagator(damping, t) - std::exp(-J0 * t) * Mat::Identity(8, 8))) < 1e-13);
}

TEST_CASE("noise matrix: zero at t = 0, scalar-damping oracle, PSD on a grid") {
  const ModelBundle bundle = spin_double_chain(10.0, 1.0, 0.5, 1.0);

  CHECK(max_abs(noise_matrix(bundle.model, 0.0)) < 1e-15);

  const double J0 = 0.8;
  const QuasiFreeModel damping = uniform_damping_model(J0);
  const double t = 1.3;
  // oracle: K_t = (1 - e^{-2 J0 t}) Sigma_ref by substitution of M_t
  const Mat expected = (1.0 - std::exp(-2.0 * J0 * t)) * damping.Sigma_ref;
  CHECK(max_abs(Mat(noise_matrix(damping, t) - expected)) < 1e-13);

  for (double tk = 0.25; tk <= 5.0; tk += 0.25) {
    const Mat k = noise_matrix(bundle.model, tk);
    CHECK(min_hermitian_eigenvalue(k.cast<Cplx>()) >= -1e-10);
    CHECK(max_abs(Mat(k - k.transpose())) < 1e-14);
  }
}

TEST_CASE("covariance flow: invariance of the reference state, composition") {
  const ModelBundle spin = spin_double_chain(10.0, 1.0, 0.5, 1.0);
  const ModelBundle osc = oscillator_double_chain(5.0, 1.0, 1.0);

  for (const ModelBundle* bundle : {&spin, &osc}) {
    const auto& model = bundle->model;
    for (double t : {0.1, 1.0, 5.0, 10.0})
      CHECK(max_abs(Mat(evolve_covariance(model.Sigma_ref, model, t) - model.Sigma_ref)) < 1e-10);
  }

  const auto& model = spin.model;
  const GaussianState squeezed = squeeze(spin.canonical.reference_state(), {{0, 1}}, 0.7);
  // carry the squeezed state back to the field basis through the mode map
  const Mat t_map = spin.field_from_canonical;
  const Mat sigma0 = t_map * squeezed.Sigma * t_map.transpose();

  CHECK(max_abs(Mat(evolve_covariance(sigma0, model, 0.0) - sigma0)) < 1e-13);

  const double t = 0.6, s = 1.1;
  const Mat two_step = evolve_covariance(evolve_covariance(sigma0, model, t), model, s);
  const Mat one_step = evolve_covariance(sigma0, model, t + s);
  CHECK(max_abs(Mat(two_step - one_step)) < 1e-10);

  // evolved states stay valid while complete positivity holds
  for (double tk : {0.2, 0.8, 2.0, 6.0}) {
    REQUIRE(check_cp(model, tk).pass);
    const GaussianState evolved(model.space, evolve_covariance(sigma0, model, tk));
    CHECK(validate_gaussian(evolved).valid);
  }

  CHECK_THROWS_AS(evolve_covariance(Mat(Mat::Identity(4, 4)), model, 1.0), std::invalid_argument);
}

TEST_CASE("weyl action: identity, invariance identity, Hamiltonian limit") {
  const ModelBundle bundle = spin_double_chain(6.0, 1.0, 0.4, 1.0);
  const auto& model = bundle.model;

  Vec r(8);
  r << 0.3, -0.2, 0.5, 0.1, -0.4, 0.2, 0.0, 0.6;

  const WeylAction at_zero = apply_to_weyl(model, r, 0.0);
  CHECK(at_zero.log_prefactor == 0.0);
  CHECK((at_zero.r_t - r).norm() < 1e-15);

  // invariance of the reference state: f_t(r) - (1/2) r_t.Sigma.r_t = -(1/2) r.Sigma.r
  for (double t : {0.3, 1.0, 2.5}) {
    const WeylAction act = apply_to_weyl(model, r, t);
    const double lhs = act.log_prefactor - 0.5 * act.r_t.dot(model.Sigma_ref * act.r_t);
    const double rhs = -0.5 * r.dot(model.Sigma_ref * r);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    CHECK(act.log_prefactor <= 1e-12);  // |prefactor| <= 1
  }

  // purely Hamiltonian drift: a rotation generator preserving Sigma = nu * 1
  Mat j2(2, 2);
  j2 << 0, 1, -1, 0;
  const QuasiFreeModel rotation(ModeSpace(2, j2), Mat(0.9 * j2),
                                Mat(0.8 * Mat::Identity(2, 2)));
  Vec r2(2);
  r2 << 1.0, -0.5;
  CHECK(std::abs(apply_to_weyl(rotation, r2, 2.0).log_prefactor) < 1e-13);
}

TEST_CASE("weyl action: Gaussian state propagation identity") {
  // characteristic function of the evolved state factorizes through the
  // prefactor and the transported label
  const ModelBundle bundle = oscillator_double_chain(4.0, 1.2, 0.8);
  const auto& model = bundle.model;
  const Mat sigma0 = squeeze(model.reference_state(), {{0, 1}, {2, 3}}, 0.5).Sigma;

  std::mt19937 rng(23);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int rep = 0; rep < 10; ++rep) {
    Vec r(6);
    for (int i = 0; i < 6; ++i) r(i) = uni(rng);
    const double t = 1.5 * std::abs(uni(rng));
    const WeylAction act = apply_to_weyl(model, r, t);
    const GaussianState evolved(model.space, evolve_covariance(sigma0, model, t));
    const GaussianState initial(model.space, sigma0);
    const double lhs = char_function(evolved, r);
    const double rhs = std::exp(act.log_prefactor) * char_function(initial, act.r_t);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("semigroup law on random valid models") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int rep = 0; rep < 20; ++rep) {
    const int pairs = 1 + static_cast<int>(rng() % 4);  // n <= 8
    const QuasiFreeModel model = random_model(rng, pairs);
    Vec r(model.n());
    for (int i = 0; i < model.n(); ++i) r(i) = uni(rng);
    const double t = 1.0 + uni(rng), s = 1.0 + uni(rng);

    const WeylAction once = apply_to_weyl(model, r, t + s);
    const WeylAction first = apply_to_weyl(model, r, t);
    const WeylAction second = apply_to_weyl(model, first.r_t, s);
    CHECK((once.r_t - second.r_t).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(std::abs(once.log_prefactor - first.log_prefactor - second.log_prefactor) < 1e-10);
  }
}

TEST_CASE("complete positivity: equality at t = 0, model grids, anti-dissipative failure") {
  const ModelBundle spin = spin_double_chain(10.0, 1.0, 0.5, 1.0);
  const ModelBundle osc = oscillator_double_chain(5.0, 1.0, 1.0);

  const CpReport at_zero = check_cp(spin.model, 0.0);
  CHECK(at_zero.pass);
  CHECK(std::abs(at_zero.margin) < 1e-14);

  for (const ModelBundle* bundle : {&spin, &osc})
    for (double t = 0.1; t <= 5.0 + 1e-12; t += 0.1) CHECK(check_cp(bundle->model, t).pass);

  // reversed inequality by construction
  const QuasiFreeModel anti(spin.model.space, Mat(1.0 * Mat::Identity(8, 8)),
                            spin.model.Sigma_ref);
  for (double t : {0.1, 1.0, 3.0}) {
    const CpReport report = check_cp(anti, t);
    CHECK_FALSE(report.pass);
    CHECK(report.margin < -1e-6);
  }
}

TEST_CASE("generator matrices: Hermiticity, positivity, zero drift") {
  const ModelBundle bundle = spin_double_chain(10.0, 1.0, 0.5, 1.0);
  const auto gm = generator_matrices(bundle.model, bundle.C_ref);

  CHECK(max_abs(CMat(gm.H_frak - gm.H_frak.adjoint())) < 1e-10);
  CHECK(max_abs(CMat(gm.D_frak - gm.D_frak.adjoint())) < 1e-10);
  CHECK(min_hermitian_eigenvalue(gm.D_frak) >= -1e-10);

  const QuasiFreeModel still(bundle.model.space, Mat(Mat::Zero(8, 8)), bundle.model.Sigma_ref);
  const auto zero = generator_matrices(still, bundle.C_ref);
  CHECK(max_abs(zero.H_frak) < 1e-14);
  CHECK(max_abs(zero.D_frak) < 1e-14);

  // singular symplectic form is rejected
  Mat sig = Mat::Zero(2, 2);
  Mat cov = Mat::Identity(2, 2);
  const QuasiFreeModel classical(ModeSpace(2, sig), Mat(Mat::Zero(2, 2)), cov);
  CHECK_THROWS_AS(generator_matrices(classical, correlation_matrix(classical.reference_state())),
                  std::invalid_argument);
}
