#include "fluctua/semigroup.hpp"

#include <stdexcept>

namespace fluctua {

QuasiFreeModel::QuasiFreeModel(ModeSpace space_, Mat drift_, Mat Sigma_ref_)
    : space(std::move(space_)), drift(std::move(drift_)), Sigma_ref(std::move(Sigma_ref_)) {
  if (drift.rows() != space.n || drift.cols() != space.n)
    throw std::invalid_argument("QuasiFreeModel: drift dimension mismatch");
  GaussianState ref(space, Sigma_ref);
  const auto report = validate_gaussian(ref);
  if (!report.valid)
    throw std::invalid_argument("QuasiFreeModel: reference covariance is not a valid state");
  Sigma_ref = ref.Sigma;
}

Mat propagator(const QuasiFreeModel& model, double t) {
  if (t < 0.0) throw std::invalid_argument("propagator: t must be >= 0");
  return expm(Mat(t * model.drift));
}

Mat noise_matrix(const QuasiFreeModel& model, double t) {
  const Mat m = propagator(model, t);
  Mat k = model.Sigma_ref - m * model.Sigma_ref * m.transpose();
  return 0.5 * (k + k.transpose().eval());
}

Mat evolve_covariance(const Mat& Sigma0, const QuasiFreeModel& model, double t) {
  if (Sigma0.rows() != model.n() || Sigma0.cols() != model.n())
    throw std::invalid_argument("evolve_covariance: Sigma0 dimension mismatch");
  const Mat m = propagator(model, t);
  Mat s = model.Sigma_ref + m * (Sigma0 - model.Sigma_ref) * m.transpose();
  return 0.5 * (s + s.transpose().eval());
}

WeylAction apply_to_weyl(const QuasiFreeModel& model, const Vec& r, double t) {
  if (r.size() != model.n()) throw std::invalid_argument("apply_to_weyl: dimension mismatch");
  WeylAction out;
  const Mat m = propagator(model, t);
  out.r_t = m.transpose() * r;
  // The prefactor exponent contracts K_t with the original label r: this is
  // the reading consistent with invariance of the reference state.
  out.log_prefactor = -0.5 * r.dot(noise_matrix(model, t) * r);
  return out;
}

CpReport check_cp(const QuasiFreeModel& model, double t) {
  const Mat m = propagator(model, t);
  const CMat c = correlation_matrix(model.reference_state());
  const CMat mt = m.cast<Cplx>();
  CpReport out;
  out.margin = min_hermitian_eigenvalue(c - mt * c * mt.adjoint());
  out.pass = out.margin >= kPsdTol;
  return out;
}

GeneratorMatrices generator_matrices(const QuasiFreeModel& model, const CMat& C_ref) {
  if (C_ref.rows() != model.n() || C_ref.cols() != model.n())
    throw std::invalid_argument("generator_matrices: dimension mismatch");
  Eigen::FullPivLU<Mat> lu(model.space.sigma);
  if (!lu.isInvertible())
    throw std::invalid_argument("generator_matrices: singular symplectic form");
  const CMat sig_inv = lu.inverse().cast<Cplx>();
  const CMat l = model.drift.cast<Cplx>();
  const Cplx I(0.0, 1.0);
  GeneratorMatrices out;
  out.H_frak = -I * sig_inv * (l * C_ref - C_ref * l.transpose()) * sig_inv;
  out.D_frak = sig_inv * (l * C_ref + C_ref * l.transpose()) * sig_inv;
  return out;
}

}  // namespace fluctua
