#include "fluctua/linalg.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <array>

namespace fluctua {

Mat expm(const Mat& a) { return a.exp(); }

double min_hermitian_eigenvalue(const CMat& h) {
  Eigen::SelfAdjointEigenSolver<CMat> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

Vec hermitian_eigenvalues(const CMat& h) {
  Eigen::SelfAdjointEigenSolver<CMat> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

namespace {

std::array<CMat, 4> make_paulis() {
  std::array<CMat, 4> p;
  const Cplx I(0.0, 1.0);
  p[0] = CMat::Identity(2, 2);
  p[1] = CMat(2, 2);
  p[1] << 0, 1, 1, 0;
  p[2] = CMat(2, 2);
  p[2] << 0, -I, I, 0;
  p[3] = CMat(2, 2);
  p[3] << 1, 0, 0, -1;
  return p;
}

const std::array<CMat, 4>& paulis() {
  static const std::array<CMat, 4> p = make_paulis();
  return p;
}

std::array<CMat, 4> make_spins() {
  std::array<CMat, 4> s;
  for (int i = 0; i < 4; ++i) s[i] = 0.5 * paulis()[i];
  return s;
}

}  // namespace

const CMat& pauli(int i) { return paulis()[i]; }

const CMat& spin_half(int i) {
  static const std::array<CMat, 4> s = make_spins();
  return s[i];
}

double max_abs(const Mat& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }
double max_abs(const CMat& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

}  // namespace fluctua
