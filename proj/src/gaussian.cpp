#include "fluctua/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace fluctua {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

ModeSpace::ModeSpace(int n_, Mat sigma_) : n(n_), sigma(std::move(sigma_)) {
  require(n >= 1, "ModeSpace: n must be >= 1");
  require(sigma.rows() == n && sigma.cols() == n, "ModeSpace: sigma must be n x n");
  require(max_abs(Mat(sigma + sigma.transpose())) <= kSymTol,
          "ModeSpace: sigma must be antisymmetric");
  sigma = 0.5 * (sigma - sigma.transpose().eval());
}

GaussianState::GaussianState(ModeSpace space_, Mat Sigma_)
    : space(std::move(space_)), Sigma(std::move(Sigma_)) {
  require(Sigma.rows() == space.n && Sigma.cols() == space.n,
          "GaussianState: covariance dimension mismatch");
  require(max_abs(Mat(Sigma - Sigma.transpose())) <= kSymTol,
          "GaussianState: covariance must be symmetric");
  Sigma = 0.5 * (Sigma + Sigma.transpose().eval());
}

CMat correlation_matrix(const GaussianState& state) {
  const Cplx I(0.0, 1.0);
  return state.Sigma.cast<Cplx>() + 0.5 * I * state.space.sigma.cast<Cplx>();
}

ValidityReport validate_gaussian(const GaussianState& state) {
  ValidityReport report;
  report.min_eigenvalue = min_hermitian_eigenvalue(correlation_matrix(state));
  report.valid = report.min_eigenvalue >= kPsdTol;
  return report;
}

WeylProduct weyl_product(const Vec& r1, const Vec& r2, const ModeSpace& space) {
  require(r1.size() == space.n && r2.size() == space.n,
          "weyl_product: vector dimension mismatch");
  WeylProduct out;
  out.r_sum = r1 + r2;
  out.phase = -0.5 * r1.dot(space.sigma * r2);
  return out;
}

double char_function(const GaussianState& state, const Vec& r) {
  require(r.size() == state.n(), "char_function: vector dimension mismatch");
  return std::exp(-0.5 * r.dot(state.Sigma * r));
}

GaussianState reduce_modes(const GaussianState& state, const std::vector<int>& keep) {
  require(!keep.empty(), "reduce_modes: keep set must be nonempty");
  for (int k : keep) require(k >= 0 && k < state.n(), "reduce_modes: index out of range");
  const int m = static_cast<int>(keep.size());
  Mat sig(m, m), cov(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      sig(i, j) = state.space.sigma(keep[i], keep[j]);
      cov(i, j) = state.Sigma(keep[i], keep[j]);
    }
  return GaussianState(ModeSpace(m, sig), cov);
}

void ModePartition::validate(const GaussianState& state) const {
  require(!pairs.empty(), "ModePartition: no pairs");
  std::set<int> seen;
  for (const auto& p : pairs) {
    require(p.side == 'A' || p.side == 'B', "ModePartition: side must be 'A' or 'B'");
    for (int idx : {p.q, p.p}) {
      require(idx >= 0 && idx < state.n(), "ModePartition: index out of range");
      require(seen.insert(idx).second, "ModePartition: indices must be disjoint");
    }
    require(std::abs(state.space.sigma(p.q, p.p)) > 0.0,
            "ModePartition: pair has vanishing commutator");
  }
  require(static_cast<int>(seen.size()) == state.n(),
          "ModePartition: pairs must cover all components");
}

GaussianState partial_transpose(const GaussianState& state, const ModePartition& partition) {
  partition.validate(state);
  Mat cov = state.Sigma;
  for (const auto& p : partition.pairs) {
    if (p.side != 'B') continue;
    cov.row(p.p) *= -1.0;
    cov.col(p.p) *= -1.0;
  }
  return GaussianState(state.space, cov);
}

std::vector<double> symplectic_spectrum(const GaussianState& state) {
  const int n = state.n();
  require(n % 2 == 0, "symplectic_spectrum: odd number of components");
  Eigen::FullPivLU<Mat> lu(state.space.sigma);
  if (!lu.isInvertible())
    throw std::invalid_argument(
        "symplectic_spectrum: degenerate symplectic form (zero commutator row); "
        "drop classical directions before calling");

  // sigma^{-1} Sigma is similar to K = S sigma^{-1} S^T with Sigma = S^T S,
  // and i K is Hermitian, so the moduli come out of a self-adjoint solve.
  Eigen::SelfAdjointEigenSolver<Mat> cov_es(state.Sigma);
  const double top = std::max(1.0, cov_es.eigenvalues().cwiseAbs().maxCoeff());
  Vec d = cov_es.eigenvalues();
  for (int i = 0; i < n; ++i) {
    if (d(i) < -1e-10 * top)
      throw std::invalid_argument("symplectic_spectrum: covariance matrix is not PSD");
    d(i) = std::max(d(i), 0.0);
  }
  const Mat s = d.cwiseSqrt().asDiagonal() * cov_es.eigenvectors().transpose();
  const Mat k = s * lu.solve(s.transpose());
  const Cplx I(0.0, 1.0);
  CMat h = I * k.cast<Cplx>();
  h = 0.5 * (h + h.adjoint().eval());
  const Vec lam = hermitian_eigenvalues(h);  // ascending, symmetric about 0
  std::vector<double> out(n / 2);
  for (int i = 0; i < n / 2; ++i) {
    const double plus = lam(n - 1 - i);
    const double minus = lam(i);
    if (std::abs(plus + minus) > kDedupTol * std::max(1.0, std::abs(plus)))
      throw std::runtime_error("symplectic_spectrum: spectrum is not symmetric");
    out[i] = 0.5 * (plus - minus);
  }
  std::sort(out.begin(), out.end());
  return out;
}

double negativity_from_spectrum(const std::vector<double>& nus) {
  double e = 0.0;
  for (double nu : nus) {
    const double d = 2.0 * nu;
    if (d < 1.0 - kSymTol && d > 0.0) e -= std::log2(d);
  }
  return std::max(0.0, e);
}

double log_negativity(const GaussianState& state, const ModePartition& partition) {
  return negativity_from_spectrum(symplectic_spectrum(partial_transpose(state, partition)));
}

GaussianState squeeze(const GaussianState& state,
                      const std::vector<std::pair<int, int>>& pairs, double r) {
  Vec scale = Vec::Ones(state.n());
  for (const auto& [q, p] : pairs) {
    require(q >= 0 && q < state.n() && p >= 0 && p < state.n() && q != p,
            "squeeze: bad pair indices");
    require(std::abs(state.space.sigma(q, p)) > 0.0, "squeeze: non-canonical pair");
    // A pair is only squeezable in isolation: its components must not have
    // commutators with the rest of the space.
    for (int k = 0; k < state.n(); ++k) {
      if (k == q || k == p) continue;
      require(std::abs(state.space.sigma(q, k)) <= kSymTol &&
                  std::abs(state.space.sigma(p, k)) <= kSymTol,
              "squeeze: non-canonical pair (commutes outside the pair)");
    }
    scale(q) = std::exp(-r);
    scale(p) = std::exp(r);
  }
  Mat cov = scale.asDiagonal() * state.Sigma * scale.asDiagonal();
  return GaussianState(state.space, cov);
}

}  // namespace fluctua
