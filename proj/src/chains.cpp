#include "fluctua/chains.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <stdexcept>

namespace fluctua {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

CMat id(int n) { return CMat::Identity(n, n); }

Mat real_part(const CMat& a, double tol = 1e-12) {
  if (max_abs(CMat(a.imag().cast<Cplx>())) > tol)
    throw std::runtime_error("real_part: matrix has a nonvanishing imaginary part");
  return a.real();
}

std::vector<double> matrix_rows(const Mat& m) {
  std::vector<double> v;
  v.reserve(m.size());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) v.push_back(m(i, j));
  return v;
}

Mat matrix_from_rows(const std::vector<double>& v, int rows, int cols) {
  if (static_cast<int>(v.size()) != rows * cols)
    throw std::invalid_argument("matrix_from_rows: size mismatch");
  Mat m(rows, cols);
  int k = 0;
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = v[k++];
  return m;
}

}  // namespace

SiteAlgebra::SiteAlgebra(int d_, std::vector<CMat> basis_ops_, CMat rho_)
    : d(d_), basis_ops(std::move(basis_ops_)), rho(std::move(rho_)) {
  require(d >= 1, "SiteAlgebra: d must be >= 1");
  require(rho.rows() == d && rho.cols() == d, "SiteAlgebra: rho dimension mismatch");
  require(std::abs(rho.trace() - Cplx(1.0, 0.0)) <= 1e-12, "SiteAlgebra: tr(rho) must be 1");
  require(min_hermitian_eigenvalue(rho) >= -1e-12, "SiteAlgebra: rho must be positive");
  for (const auto& op : basis_ops) {
    require(op.rows() == d && op.cols() == d, "SiteAlgebra: operator dimension mismatch");
    require(max_abs(CMat(op - op.adjoint())) <= 1e-12, "SiteAlgebra: operators must be Hermitian");
  }
}

CMat correlation_from_state(const SiteAlgebra& site, const std::vector<int>& ops) {
  const int m = static_cast<int>(ops.size());
  require(m >= 1, "correlation_from_state: empty operator set");
  std::vector<CMat> centered(m);
  for (int i = 0; i < m; ++i) {
    require(ops[i] >= 0 && ops[i] < static_cast<int>(site.basis_ops.size()),
            "correlation_from_state: operator index out of range");
    const CMat& x = site.basis_ops[ops[i]];
    const Cplx mean = (site.rho * x).trace();
    centered[i] = x - mean * id(site.d);
  }
  CMat c(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) c(i, j) = (site.rho * centered[i] * centered[j]).trace();
  return c;
}

Mat mode_map_ccr(const CMat& f) {
  const int n = static_cast<int>(f.rows());
  const Cplx I(0.0, 1.0);
  CMat s(n, n);
  for (int mu = 0; mu < n; ++mu)
    for (int nu = 0; nu < n; ++nu) {
      Cplx acc(0.0, 0.0);
      for (int i = 0; i < f.cols(); ++i)
        acc += std::conj(f(mu, i)) * f(nu, i) - f(mu, i) * std::conj(f(nu, i));
      s(mu, nu) = -I * acc;
    }
  return real_part(s);
}

Mat field_from_canonical_of(const CMat& f) {
  const int n = static_cast<int>(f.rows());
  const int m = static_cast<int>(f.cols());
  Mat t = Mat::Zero(n, 2 * m);
  const double rt2 = std::sqrt(2.0);
  for (int mu = 0; mu < n; ++mu)
    for (int i = 0; i < m; ++i) {
      t(mu, 2 * i) = rt2 * f(mu, i).real();
      t(mu, 2 * i + 1) = rt2 * f(mu, i).imag();
    }
  return t;
}

namespace {

ModelBundle finish_bundle(ModelBundle bundle, const Mat& canonical_Sigma_ref) {
  bundle.C_ref = correlation_matrix(bundle.model.reference_state());
  bundle.field_from_canonical = field_from_canonical_of(bundle.mode_map);
  const int n = bundle.model.n();
  if (bundle.field_from_canonical.rows() != n || bundle.field_from_canonical.cols() != n)
    throw std::runtime_error("ModelBundle: mode map does not give a square transform");
  Eigen::FullPivLU<Mat> lu(bundle.field_from_canonical);
  if (!lu.isInvertible()) throw std::runtime_error("ModelBundle: canonical transform is singular");
  Mat j2(2, 2);
  j2 << 0, 1, -1, 0;
  Mat sigma_r = Mat::Zero(n, n);
  for (int i = 0; i < n / 2; ++i) sigma_r.block(2 * i, 2 * i, 2, 2) = j2;
  const Mat l_r = lu.solve(bundle.model.drift * bundle.field_from_canonical);
  bundle.canonical = QuasiFreeModel(ModeSpace(n, sigma_r), l_r, canonical_Sigma_ref);
  return bundle;
}

}  // namespace

ModelBundle spin_double_chain(double beta, double eps, double gamma, double J0) {
  require(beta > 0.0, "spin_double_chain: beta must be > 0");
  require(eps > 0.0, "spin_double_chain: epsilon must be > 0");
  require(J0 > 0.0, "spin_double_chain: J0 must be > 0");
  require(std::abs(gamma) <= 0.5, "spin_double_chain: |gamma| <= 0.5 required");

  const double eta = std::tanh(0.5 * beta * eps);
  require(1.0 - eta * eta > 0.0,
          "spin_double_chain: beta*eps too large, the mode decomposition degenerates at eta = 1");
  const Cplx I(0.0, 1.0);
  const CMat one2 = id(2);

  const CMat a_fac = one2 - eta * pauli(1);
  const Mat Sigma = real_part(kron(kron(a_fac, one2), one2));
  const Mat sigma = real_part(CMat(-2.0 * I * eta * kron(kron(a_fac, one2), pauli(2))));
  const Mat drift = real_part(CMat(-I * eps * kron(kron(one2, one2), pauli(2)))) -
                    J0 * (Mat::Identity(8, 8) -
                          gamma * real_part(kron(kron(pauli(1), pauli(1)), one2)));

  ModelBundle bundle;
  bundle.kind = "spin-double-chain";
  bundle.params.beta = beta;
  bundle.params.eps = eps;
  bundle.params.gamma = gamma;
  bundle.params.J0 = J0;
  bundle.eta = eta;
  bundle.model = QuasiFreeModel(ModeSpace(8, sigma), drift, Sigma);
  bundle.kossakowski = id(4) + gamma * kron(pauli(1), CMat(one2 + pauli(1)));

  // Four-mode decomposition of the eight field components. The mixed-field
  // weight is sqrt(eta (1 - eta^2)); this is the unique value closing the
  // canonical commutation relations against sigma above.
  CMat f = CMat::Zero(8, 4);
  const double rt_eta = std::sqrt(eta);
  const double w = std::pow(eta, 1.5);
  const double v = std::sqrt(eta * (1.0 - eta * eta));
  f(0, 0) = rt_eta;
  f(1, 0) = -I * rt_eta;
  f(2, 2) = rt_eta;
  f(3, 2) = -I * rt_eta;
  f(4, 0) = -w;
  f(5, 0) = I * w;
  f(6, 2) = -w;
  f(7, 2) = I * w;
  f(4, 1) = -v;
  f(5, 1) = I * v;
  f(6, 3) = -v;
  f(7, 3) = I * v;
  bundle.mode_map = f;

  return finish_bundle(std::move(bundle), Mat(Mat::Identity(8, 8) / (2.0 * eta)));
}

ModelBundle oscillator_double_chain(double beta, double eps, double lambda) {
  require(beta > 0.0, "oscillator_double_chain: beta must be > 0");
  require(eps > 0.0, "oscillator_double_chain: epsilon must be > 0");
  require(lambda * lambda <= 1.0, "oscillator_double_chain: lambda^2 <= 1 required");

  const double eta = std::tanh(0.5 * beta * eps);
  const double ebe = std::exp(-beta * eps);
  const Cplx I(0.0, 1.0);

  Mat j2(2, 2);
  j2 << 0, 1, -1, 0;
  const Mat sigma = kron(Mat::Identity(3, 3), j2);
  const Mat Sigma = ((eta * eta + 1.0) / (4.0 * eta)) * Mat::Identity(6, 6);

  Mat coupling = Mat::Zero(6, 6);
  coupling.block(0, 4, 2, 2) = Mat::Identity(2, 2);
  coupling.block(2, 4, 2, 2) = Mat::Identity(2, 2);
  coupling.block(4, 0, 2, 2) = Mat::Identity(2, 2);
  coupling.block(4, 2, 2, 2) = Mat::Identity(2, 2);
  const Mat drift = (ebe - 1.0) * Mat::Identity(6, 6) + 2.0 * eps * sigma +
                    (lambda * (ebe - 1.0) / std::sqrt(2.0)) * coupling;

  // Hermitian thermal block: eigenvalues c (1 +- eta), so the full Kossakowski
  // matrix is positive semidefinite exactly when lambda^2 <= 1.
  CMat a_blk(2, 2);
  const double c = 0.5 * (1.0 + ebe);
  a_blk << c, -I * c * eta, I * c * eta, c;
  CMat koss(4, 4);
  koss.block(0, 0, 2, 2) = a_blk;
  koss.block(0, 2, 2, 2) = lambda * a_blk;
  koss.block(2, 0, 2, 2) = lambda * a_blk;
  koss.block(2, 2, 2, 2) = a_blk;

  ModelBundle bundle;
  bundle.kind = "oscillator-double-chain";
  bundle.params.beta = beta;
  bundle.params.eps = eps;
  bundle.params.lambda = lambda;
  bundle.eta = eta;
  bundle.model = QuasiFreeModel(ModeSpace(6, sigma), drift, Sigma);
  bundle.kossakowski = koss;

  CMat f = CMat::Zero(6, 3);
  const double irt2 = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < 3; ++i) {
    f(2 * i, i) = irt2;
    f(2 * i + 1, i) = I * irt2;
  }
  bundle.mode_map = f;

  return finish_bundle(std::move(bundle), Sigma);
}

SiteAlgebra spin_double_site(double beta, double eps) {
  require(beta > 0.0 && eps > 0.0, "spin_double_site: beta, eps must be > 0");
  const CMat one2 = id(2);
  auto embed = [&](const CMat& a, const CMat& b) { return kron(a, b); };
  const CMat h = eps * (embed(spin_half(3), one2) + embed(one2, spin_half(3)));
  CMat rho = (-beta * h).exp();
  rho /= rho.trace();

  std::vector<CMat> ops;
  ops.push_back(4.0 * embed(spin_half(1), spin_half(0)));
  ops.push_back(4.0 * embed(spin_half(2), spin_half(0)));
  ops.push_back(4.0 * embed(spin_half(0), spin_half(1)));
  ops.push_back(4.0 * embed(spin_half(0), spin_half(2)));
  ops.push_back(4.0 * embed(spin_half(1), spin_half(3)));
  ops.push_back(4.0 * embed(spin_half(2), spin_half(3)));
  ops.push_back(4.0 * embed(spin_half(3), spin_half(1)));
  ops.push_back(4.0 * embed(spin_half(3), spin_half(2)));
  return SiteAlgebra(4, std::move(ops), std::move(rho));
}

SingleChainPreset single_chain_preset(ChainKind kind, double beta, double eps) {
  require(beta > 0.0 && eps > 0.0, "single_chain_preset: beta, eps must be > 0");
  const double eta = std::tanh(0.5 * beta * eps);
  SingleChainPreset out;
  if (kind == ChainKind::Spin) {
    out.sigma = Mat::Zero(3, 3);
    out.sigma(0, 1) = -0.5 * eta;
    out.sigma(1, 0) = 0.5 * eta;
    out.Sigma = Mat::Zero(3, 3);
    out.Sigma(0, 0) = 0.25;
    out.Sigma(1, 1) = 0.25;
    out.Sigma(2, 2) = 0.25 * (1.0 - eta * eta);
    out.classical = {2};
  } else {
    Mat j2(2, 2);
    j2 << 0, 1, -1, 0;
    out.sigma = j2;
    out.Sigma = ((eta * eta + 1.0) / (4.0 * eta)) * Mat::Identity(2, 2);
  }
  return out;
}

double spin_rescaled_pair_variance(double beta, double eps, SpinExponentConvention conv) {
  require(beta > 0.0 && eps > 0.0, "spin_rescaled_pair_variance: beta, eps must be > 0");
  const double arg = conv == SpinExponentConvention::EnergyScaled ? 0.5 * beta * eps : 0.5 * beta;
  return 0.5 / std::tanh(arg);
}

Cplx finite_N_char(const SiteAlgebra& site, const std::vector<int>& ops, const Vec& r, long N) {
  require(N >= 1, "finite_N_char: N must be >= 1");
  require(r.size() == static_cast<Eigen::Index>(ops.size()),
          "finite_N_char: vector dimension mismatch");
  CMat a = CMat::Zero(site.d, site.d);
  for (int i = 0; i < static_cast<int>(ops.size()); ++i) {
    const CMat& x = site.basis_ops[ops[i]];
    const Cplx mean = (site.rho * x).trace();
    a += r(i) * (x - mean * id(site.d));
  }
  const Cplx I(0.0, 1.0);
  const CMat w = (I / std::sqrt(static_cast<double>(N)) * a).exp();
  const Cplx single = (site.rho * w).trace();
  return std::pow(single, static_cast<double>(N));
}

double gaussian_limit_char(const SiteAlgebra& site, const std::vector<int>& ops, const Vec& r) {
  const CMat c = correlation_from_state(site, ops);
  const Mat Sigma = 0.5 * (c.real() + c.real().transpose().eval());
  return std::exp(-0.5 * r.dot(Sigma * r));
}

double meanfield_product_gap(const SiteAlgebra& site, const CMat& x, const CMat& y, long N) {
  require(N >= 1, "meanfield_product_gap: N must be >= 1");
  const Cplx xy = (site.rho * x * y).trace();
  const Cplx mx = (site.rho * x).trace();
  const Cplx my = (site.rho * y).trace();
  return std::abs(xy - mx * my) / static_cast<double>(N);
}

void to_json(nlohmann::json& j, const ModelBundle& bundle) {
  j = nlohmann::json{
      {"kind", bundle.kind},
      {"params",
       {{"beta", bundle.params.beta},
        {"eps", bundle.params.eps},
        {"gamma", bundle.params.gamma},
        {"J0", bundle.params.J0},
        {"lambda", bundle.params.lambda}}},
      {"eta", bundle.eta},
      {"n", bundle.model.n()},
      {"n_modes", bundle.n_modes()},
      {"sigma", matrix_rows(bundle.model.space.sigma)},
      {"Sigma", matrix_rows(bundle.model.Sigma_ref)},
      {"L", matrix_rows(bundle.model.drift)},
      {"mode_map_re", matrix_rows(bundle.mode_map.real())},
      {"mode_map_im", matrix_rows(bundle.mode_map.imag())},
      {"kossakowski_re", matrix_rows(bundle.kossakowski.real())},
      {"kossakowski_im", matrix_rows(bundle.kossakowski.imag())},
  };
}

ModelBundle bundle_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  const auto& p = j.at("params");
  ModelBundle fresh;
  if (kind == "spin-double-chain") {
    fresh = spin_double_chain(p.at("beta").get<double>(), p.at("eps").get<double>(),
                              p.at("gamma").get<double>(), p.at("J0").get<double>());
  } else if (kind == "oscillator-double-chain") {
    fresh = oscillator_double_chain(p.at("beta").get<double>(), p.at("eps").get<double>(),
                                    p.at("lambda").get<double>());
  } else {
    throw std::invalid_argument("bundle_from_json: unknown kind " + kind);
  }
  // The serialized matrices are fixture data: verify they match the rebuild.
  const int n = j.at("n").get<int>();
  const int m = j.at("n_modes").get<int>();
  struct Entry {
    const char* key;
    Mat actual;
  };
  const Entry entries[] = {
      {"sigma", fresh.model.space.sigma},
      {"Sigma", fresh.model.Sigma_ref},
      {"L", fresh.model.drift},
      {"mode_map_re", Mat(fresh.mode_map.real())},
      {"mode_map_im", Mat(fresh.mode_map.imag())},
      {"kossakowski_re", Mat(fresh.kossakowski.real())},
      {"kossakowski_im", Mat(fresh.kossakowski.imag())},
  };
  for (const auto& e : entries) {
    const auto vals = j.at(e.key).get<std::vector<double>>();
    const int cols = e.key[0] == 'm' ? m : (e.key[0] == 'k' ? 4 : n);
    const int rows = e.key[0] == 'k' ? 4 : n;
    const Mat stored = matrix_from_rows(vals, rows, cols);
    if (max_abs(Mat(stored - e.actual)) > 1e-12)
      throw std::runtime_error(std::string("bundle_from_json: fixture mismatch in ") + e.key);
  }
  return fresh;
}

}  // namespace fluctua
