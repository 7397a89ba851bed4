#include "fluctua/meanfield.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace fluctua {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

Mat real_checked(const CMat& a, double tol = 1e-12) {
  if (max_abs(CMat(a.imag().cast<Cplx>())) > tol)
    throw std::runtime_error("expected a real matrix");
  return a.real();
}

}  // namespace

void StructureConstants::validate() const {
  const int n = dim();
  for (const auto& m : f)
    if (m.rows() != n || m.cols() != n)
      throw std::invalid_argument("StructureConstants: tensor dimension mismatch");
}

StructureConstants su2_structure() {
  StructureConstants out;
  out.f.assign(3, Mat::Zero(3, 3));
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c) {
        double eps = 0.0;
        if ((a + 1) % 3 == b && (b + 1) % 3 == c) eps = 1.0;
        if ((a + 2) % 3 == b && (b + 2) % 3 == c) eps = -1.0;
        out.f[c](a, b) = eps;
      }
  return out;
}

StructureConstants direct_sum(const StructureConstants& a, const StructureConstants& b) {
  const int na = a.dim(), nb = b.dim(), n = na + nb;
  StructureConstants out;
  out.f.assign(n, Mat::Zero(n, n));
  for (int g = 0; g < na; ++g) out.f[g].block(0, 0, na, na) = a.f[g];
  for (int g = 0; g < nb; ++g) out.f[na + g].block(na, na, nb, nb) = b.f[g];
  return out;
}

Mat MeanFieldModel::sigma_of(const Vec& omega) const {
  require(omega.size() == dim(), "sigma_of: omega dimension mismatch");
  Mat s = Mat::Zero(dim(), dim());
  for (int g = 0; g < dim(); ++g) s += f.f[g] * omega(g);
  return s;
}

Mat MeanFieldModel::reduce(const Mat& full) const {
  const int m = static_cast<int>(reduced.size());
  Mat out(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) out(i, j) = full(reduced[i], reduced[j]);
  return out;
}

ModeSpace MeanFieldModel::fluct_space(const Vec& omega) const {
  return ModeSpace(static_cast<int>(reduced.size()), reduce(sigma_of(omega)) / fluct_rescale);
}

MeanFieldModel make_meanfield_model(StructureConstants f, CMat C, Mat h, Mat kappa) {
  f.validate();
  const int n = f.dim();
  require(C.rows() == n && C.cols() == n, "MeanFieldModel: Kossakowski dimension mismatch");
  require(min_hermitian_eigenvalue(C) >= kPsdTol, "MeanFieldModel: Kossakowski matrix must be PSD");
  require(h.rows() == n && kappa.rows() == n, "MeanFieldModel: Hamiltonian part dimension mismatch");
  require(max_abs(Mat(h - h.transpose())) <= kSymTol, "MeanFieldModel: h must be symmetric");
  require(max_abs(Mat(kappa + kappa.transpose())) <= kSymTol,
          "MeanFieldModel: kappa must be antisymmetric");

  MeanFieldModel model;
  model.f = std::move(f);
  model.C = std::move(C);
  const Cplx I(0.0, 1.0);
  model.A = real_checked(CMat(0.5 * (model.C + model.C.transpose())));
  model.Btilde = 0.5 * (model.C - model.C.transpose()) + 2.0 * I * h.cast<Cplx>();
  model.h = std::move(h);
  model.kappa = std::move(kappa);
  model.reduced.resize(n);
  for (int i = 0; i < n; ++i) model.reduced[i] = i;
  return model;
}

MeanFieldModel single_spin_meanfield_model() {
  const Cplx I(0.0, 1.0);
  CMat c = CMat::Zero(3, 3);
  c(0, 0) = 1.0;
  c(1, 1) = 1.0;
  c(0, 1) = I;
  c(1, 0) = -I;
  MeanFieldModel model =
      make_meanfield_model(su2_structure(), c, Mat::Zero(3, 3), Mat::Zero(3, 3));
  model.site_basis = {spin_half(1), spin_half(2), spin_half(3)};
  return model;
}

Mat drift_matrix(const MeanFieldModel& model, const Vec& omega) {
  const int n = model.dim();
  require(omega.size() == n, "drift_matrix: omega dimension mismatch");
  const Cplx I(0.0, 1.0);
  const CVec bw = model.Btilde * omega.cast<Cplx>();
  CMat d(n, n);
  for (int g = 0; g < n; ++g) d.col(g) = I * (model.f.f[g].transpose().cast<Cplx>() * bw);
  return real_checked(d);
}

namespace {

Vec macro_rhs(const MeanFieldModel& model, const Vec& omega) {
  return drift_matrix(model, omega) * omega;
}

void check_finite(const Vec& omega, double t) {
  if (!omega.allFinite()) {
    std::ostringstream msg;
    msg << "macroscopic integration diverged at t = " << t << "; omega = [";
    for (Eigen::Index i = 0; i < omega.size(); ++i) msg << (i ? ", " : "") << omega(i);
    msg << "]";
    throw std::runtime_error(msg.str());
  }
}

}  // namespace

MacroTrajectory integrate_macro(const MeanFieldModel& model, const Vec& omega0, double T,
                                double dt) {
  require(dt > 0.0, "integrate_macro: dt must be > 0");
  require(T >= 0.0, "integrate_macro: T must be >= 0");
  MacroTrajectory traj;
  traj.dt = dt;
  const long steps = std::lround(T / dt);
  traj.t.reserve(steps + 1);
  traj.omega.reserve(steps + 1);
  Vec w = omega0;
  traj.t.push_back(0.0);
  traj.omega.push_back(w);
  for (long k = 0; k < steps; ++k) {
    const Vec k1 = macro_rhs(model, w);
    const Vec k2 = macro_rhs(model, Vec(w + 0.5 * dt * k1));
    const Vec k3 = macro_rhs(model, Vec(w + 0.5 * dt * k2));
    const Vec k4 = macro_rhs(model, Vec(w + dt * k3));
    w += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    const double t = (k + 1) * dt;
    check_finite(w, t);
    traj.t.push_back(t);
    traj.omega.push_back(w);
  }
  return traj;
}

CMat emergent_hamiltonian(const MeanFieldModel& model, const Vec& omega_t, int sites) {
  require(sites >= 1, "emergent_hamiltonian: need at least one site");
  require(!model.site_basis.empty(), "emergent_hamiltonian: model carries no site basis");
  const int d = static_cast<int>(model.site_basis.front().rows());
  double dim = std::pow(static_cast<double>(d), sites);
  require(dim <= 256.0, "emergent_hamiltonian: site count too large for a dense build");

  const Cplx I(0.0, 1.0);
  const CVec bw = model.Btilde * omega_t.cast<Cplx>();
  CMat h1 = CMat::Zero(d, d);
  for (int mu = 0; mu < model.dim(); ++mu) h1 += -I * bw(mu) * model.site_basis[mu];

  const int total = static_cast<int>(dim);
  CMat h = CMat::Zero(total, total);
  for (int k = 0; k < sites; ++k) {
    CMat term = CMat::Identity(1, 1);
    for (int j = 0; j < sites; ++j)
      term = kron(term, j == k ? h1 : CMat(CMat::Identity(d, d)));
    h += term;
  }
  return h;
}

Mat spin_rotation_from_gamma(const Vec& omega0, double gamma) {
  const double w12 = std::hypot(omega0(0), omega0(1));
  if (w12 == 0.0) return Mat::Identity(3, 3);
  const double u1 = omega0(0) / w12, u2 = omega0(1) / w12;
  const double theta = w12 * gamma;
  Vec axis(3);
  axis << -u2, u1, 0.0;
  Mat cross = Mat::Zero(3, 3);
  cross(0, 2) = u1;
  cross(1, 2) = u2;
  cross(2, 0) = -u1;
  cross(2, 1) = -u2;
  return std::cos(theta) * Mat::Identity(3, 3) +
         (1.0 - std::cos(theta)) * axis * axis.transpose() + std::sin(theta) * cross;
}

SpinRotation emergent_unitary_spin(const Vec& omega0, double t, double dt) {
  require(omega0.size() == 3, "emergent_unitary_spin: omega0 must have 3 components");
  require(t >= 0.0, "emergent_unitary_spin: t must be >= 0");
  SpinRotation out;
  const double w12sq = omega0(0) * omega0(0) + omega0(1) * omega0(1);
  if (w12sq == 0.0) {
    out.M = Mat::Identity(3, 3);
    out.degenerate = true;
    return out;
  }
  const MeanFieldModel model = single_spin_meanfield_model();
  // gamma is co-integrated with the macro flow: d gamma/dt is the common decay
  // ratio of (omega_1, omega_2) against the initial pair, with the sign fixed
  // by the adjoint action of the emergent unitary.
  auto rhs = [&](const Vec& y) {
    Vec dy(4);
    dy.head(3) = macro_rhs(model, y.head(3));
    dy(3) = -(y(0) * omega0(0) + y(1) * omega0(1)) / w12sq;
    return dy;
  };
  Vec y(4);
  y.head(3) = omega0;
  y(3) = 0.0;
  const long steps = std::lround(t / dt);
  const double h = steps > 0 ? t / steps : 0.0;
  for (long k = 0; k < steps; ++k) {
    const Vec k1 = rhs(y);
    const Vec k2 = rhs(Vec(y + 0.5 * h * k1));
    const Vec k3 = rhs(Vec(y + 0.5 * h * k2));
    const Vec k4 = rhs(Vec(y + h * k3));
    y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    check_finite(y, (k + 1) * h);
  }
  out.gamma = y(3);
  out.M = spin_rotation_from_gamma(omega0, out.gamma);
  return out;
}

namespace {

struct FluctRhs {
  Vec domega;
  Mat dX, dY;
};

Mat q_matrix(const MeanFieldModel& model, const Vec& omega, const Mat& sigma_full) {
  const Cplx I(0.0, 1.0);
  const CMat qc = -I * sigma_full.cast<Cplx>() * model.Btilde;
  const Mat q_full = real_checked(qc) + drift_matrix(model, omega);
  return model.reduce(q_full);
}

FluctRhs fluct_rhs(const MeanFieldModel& model, const Vec& omega, const Mat& X, const Mat& Y) {
  FluctRhs out;
  const Mat sigma_full = model.sigma_of(omega);
  const Mat q = q_matrix(model, omega, sigma_full);
  out.domega = drift_matrix(model, omega) * omega;
  out.dX = q * X;
  const Mat source = model.reduce(Mat(sigma_full * model.A * sigma_full.transpose())) /
                     model.fluct_rescale;
  out.dY = q * Y + Y * q.transpose() + source;
  return out;
}

}  // namespace

std::vector<FluctState> integrate_fluct_trajectory(const MeanFieldModel& model, const Vec& omega0,
                                                   double t, double dt, int stride) {
  require(dt > 0.0, "integrate_fluct: dt must be > 0");
  require(t >= 0.0, "integrate_fluct: t must be >= 0");
  require(stride >= 1, "integrate_fluct: stride must be >= 1");
  require(omega0.size() == model.dim(), "integrate_fluct: omega0 dimension mismatch");
  const int m = static_cast<int>(model.reduced.size());

  Vec w = omega0;
  Mat X = Mat::Identity(m, m);
  Mat Y = Mat::Zero(m, m);
  std::vector<FluctState> samples;
  const long steps = std::lround(t / dt);
  samples.reserve(steps / stride + 2);
  samples.push_back({0.0, w, X, Y});
  for (long k = 0; k < steps; ++k) {
    const FluctRhs k1 = fluct_rhs(model, w, X, Y);
    const FluctRhs k2 = fluct_rhs(model, Vec(w + 0.5 * dt * k1.domega), Mat(X + 0.5 * dt * k1.dX),
                                  Mat(Y + 0.5 * dt * k1.dY));
    const FluctRhs k3 = fluct_rhs(model, Vec(w + 0.5 * dt * k2.domega), Mat(X + 0.5 * dt * k2.dX),
                                  Mat(Y + 0.5 * dt * k2.dY));
    const FluctRhs k4 = fluct_rhs(model, Vec(w + dt * k3.domega), Mat(X + dt * k3.dX),
                                  Mat(Y + dt * k3.dY));
    w += dt / 6.0 * (k1.domega + 2.0 * k2.domega + 2.0 * k3.domega + k4.domega);
    X += dt / 6.0 * (k1.dX + 2.0 * k2.dX + 2.0 * k3.dX + k4.dX);
    Y += dt / 6.0 * (k1.dY + 2.0 * k2.dY + 2.0 * k3.dY + k4.dY);
    const double tk = (k + 1) * dt;
    check_finite(w, tk);
    if (!X.allFinite() || !Y.allFinite())
      throw std::runtime_error("fluctuation integration diverged");
    if ((k + 1) % stride == 0 || k + 1 == steps) samples.push_back({tk, w, X, Y});
  }
  // symmetrize the accumulated noise
  for (auto& s : samples) s.Y = 0.5 * (s.Y + s.Y.transpose().eval());
  return samples;
}

FluctState integrate_fluct(const MeanFieldModel& model, const Vec& omega0, double t, double dt) {
  auto traj = integrate_fluct_trajectory(model, omega0, t, dt, std::max<long>(1, std::lround(t / dt)));
  return traj.back();
}

Mat fluct_propagator(const MeanFieldModel& model, const Vec& omega0, double t, double dt) {
  return integrate_fluct(model, omega0, t, dt).X;
}

Mat fluct_noise(const MeanFieldModel& model, const Vec& omega0, double t, double dt) {
  return integrate_fluct(model, omega0, t, dt).Y;
}

Mat evolve_fluct_covariance(const Mat& Sigma0, const MeanFieldModel& model, const Vec& omega0,
                            double t, double dt) {
  const int m = static_cast<int>(model.reduced.size());
  require(Sigma0.rows() == m && Sigma0.cols() == m,
          "evolve_fluct_covariance: Sigma0 dimension mismatch");
  const FluctState s = integrate_fluct(model, omega0, t, dt);
  Mat out = s.X * Sigma0 * s.X.transpose() + s.Y;
  return 0.5 * (out + out.transpose().eval());
}

TwoChainModel twochain_meanfield_model(double a, double b, double zeta) {
  require(a >= b * b, "twochain_meanfield_model: a >= b^2 required (complete positivity)");
  require(zeta > 0.0, "twochain_meanfield_model: zeta > 0 required");

  const Cplx I(0.0, 1.0);
  CMat inner(2, 2);
  inner << 1.0, -I * b, I * b, a;
  CMat c = CMat::Zero(6, 6);
  const int idx[2][2] = {{0, 1}, {3, 4}};
  for (int ci = 0; ci < 2; ++ci)
    for (int cj = 0; cj < 2; ++cj)
      for (int u = 0; u < 2; ++u)
        for (int v = 0; v < 2; ++v) c(idx[ci][u], idx[cj][v]) = inner(u, v);

  MeanFieldModel model = make_meanfield_model(direct_sum(su2_structure(), su2_structure()),
                                              std::move(c), Mat::Zero(6, 6), Mat::Zero(6, 6));
  model.fluct_rescale = zeta;
  model.reduced = {0, 1, 3, 4};
  const CMat one2 = CMat::Identity(2, 2);
  model.site_basis = {kron(spin_half(1), one2), kron(spin_half(2), one2),
                      kron(spin_half(3), one2), kron(one2, spin_half(1)),
                      kron(one2, spin_half(2)), kron(one2, spin_half(3))};

  TwoChainModel out;
  out.model = std::move(model);
  out.omega0 = Vec::Zero(6);
  out.omega0(2) = -zeta;
  out.omega0(5) = -zeta;
  out.Sigma0 = Mat::Identity(4, 4) / (4.0 * zeta);
  out.zeta_warning = zeta > 0.5;
  return out;
}

double asymptotic_negativity(double a, double b, double zeta) {
  require(a >= b * b, "asymptotic_negativity: a >= b^2 required");
  require(b > 0.0, "asymptotic_negativity: b > 0 required");
  require(zeta > 0.0, "asymptotic_negativity: zeta > 0 required");
  const double arg = (1.0 + a - std::abs(a - 1.0)) / (4.0 * b * zeta);
  return std::max(0.0, -std::log2(arg));
}

}  // namespace fluctua
