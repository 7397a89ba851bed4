#include "fluctua/reference.hpp"

#include <cmath>
#include <stdexcept>

namespace fluctua::ref {

namespace {

struct SpinFlowParams {
  double xi;  // conserved norm
  double c;   // offset fixed by omega_3(0) = xi tanh(xi c)
};

SpinFlowParams spin_params(const Vec& omega0) {
  if (omega0.size() != 3) throw std::invalid_argument("spin reference: need 3 components");
  const double xi = omega0.norm();
  const double w12 = std::hypot(omega0(0), omega0(1));
  if (!(w12 > 0.0))
    throw std::invalid_argument("spin reference: omega_12 = 0 has no closed-form flow");
  return {xi, std::atanh(omega0(2) / xi) / xi};
}

}  // namespace

Vec spin_macro(const Vec& omega0, double t) {
  const auto [xi, c] = spin_params(omega0);
  const double factor = std::cosh(c * xi) / std::cosh(xi * (t + c));
  Vec out(3);
  out(0) = factor * omega0(0);
  out(1) = factor * omega0(1);
  out(2) = xi * std::tanh(xi * (t + c));
  return out;
}

double spin_gamma(const Vec& omega0, double t) {
  const auto [xi, c] = spin_params(omega0);
  return (2.0 / xi) * std::cosh(c * xi) *
         (std::atan(std::exp(-xi * (t + c))) - std::atan(std::exp(-xi * c)));
}

Mat twochain_X(double b, double zeta, double t) {
  const double xm = 1.0 - std::exp(-2.0 * b * zeta * t);
  const double xp = 1.0 + std::exp(-2.0 * b * zeta * t);
  Mat outer(2, 2);
  outer << xp, -xm, -xm, xp;
  return 0.5 * kron(outer, Mat(Mat::Identity(2, 2)));
}

Mat twochain_Y(double a, double b, double zeta, double t) {
  const double y = (1.0 - std::exp(-4.0 * b * zeta * t)) / (4.0 * b);
  Mat outer(2, 2);
  outer << 1, 1, 1, 1;
  Mat inner = Mat::Zero(2, 2);
  inner(0, 0) = a;
  inner(1, 1) = 1.0;
  return y * kron(outer, inner);
}

Mat twochain_Sigma_inf(double a, double b, double zeta) {
  Mat proj(2, 2);
  proj << 0.5, -0.5, -0.5, 0.5;
  const Mat x_inf = kron(proj, Mat(Mat::Identity(2, 2)));
  Mat ones(2, 2);
  ones << 1, 1, 1, 1;
  Mat inner = Mat::Zero(2, 2);
  inner(0, 0) = a;
  inner(1, 1) = 1.0;
  const Mat y_inf = (1.0 / (4.0 * b)) * kron(ones, inner);
  return x_inf * (Mat::Identity(4, 4) / (4.0 * zeta)) * x_inf.transpose() + y_inf;
}

}  // namespace fluctua::ref
