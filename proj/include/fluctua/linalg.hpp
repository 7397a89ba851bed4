#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace fluctua {

using Mat = Eigen::MatrixXd;
using CMat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXd;
using CVec = Eigen::VectorXcd;
using Cplx = std::complex<double>;

// Shared tolerances for dense double-precision algebra at n <= 16.
inline constexpr double kSymTol = 1e-12;    // symmetry / antisymmetry residual
inline constexpr double kPsdTol = -1e-10;   // floor for "positive semidefinite"
inline constexpr double kDedupTol = 1e-9;   // eigenvalue pair matching

/// Dense matrix exponential (scaling-and-squaring, Pade order 13).
Mat expm(const Mat& a);

/// Smallest eigenvalue of a Hermitian matrix.
double min_hermitian_eigenvalue(const CMat& h);

/// Eigenvalues of a Hermitian matrix, ascending.
Vec hermitian_eigenvalues(const CMat& h);

Mat kron(const Mat& a, const Mat& b);
CMat kron(const CMat& a, const CMat& b);

/// Spin-1/2 operators: s0 = 1/2, s_i = sigma_i / 2.
const CMat& spin_half(int i);

/// Pauli matrices, sigma_0 = identity.
const CMat& pauli(int i);

/// max |a_ij| over all entries.
double max_abs(const Mat& a);
double max_abs(const CMat& a);

}  // namespace fluctua
