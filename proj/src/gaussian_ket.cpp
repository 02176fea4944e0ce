#include "cvbs/gaussian_ket.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "cvbs/errors.hpp"

namespace cvbs {

void require_open_angle(double theta) {
  if (!std::isfinite(theta)) throw InvalidArgument("angle is not finite");
  constexpr double eps = 1e-12;
  if (theta <= eps || theta >= kPi / 2 - eps)
    throw DegenerateAngle("theta must lie in the open interval (0, pi/2)");
}

const char* to_string(NormalizationClass n) {
  return n == NormalizationClass::Normalizable ? "Normalizable" : "DeltaNormalized";
}

GaussianKet::GaussianKet(Complex c, const Vec2c& w, const Mat2c& F) : c_(c), w_(w), F_(F) {
  if (!std::isfinite(c.real()) || !std::isfinite(c.imag()) || !w.allFinite() || !F.allFinite())
    throw InvalidArgument("ket coefficients must be finite");
  if (c == Complex(0.0)) throw InvalidArgument("ket prefactor must be nonzero");
  const double scale = std::max(1.0, F.cwiseAbs().maxCoeff());
  if (std::abs(F(0, 1) - F(1, 0)) > 1e-12 * scale)
    throw InvalidArgument("quadratic exponent must be symmetric");
  const Complex off = 0.5 * (F(0, 1) + F(1, 0));
  F_(0, 1) = off;
  F_(1, 0) = off;
  sigma_max_ = Eigen::JacobiSVD<Mat2c>(F_).singularValues()(0);
  if (sigma_max_ > 1.0 + kDeltaTolerance)
    throw InvalidArgument("quadratic exponent has singular value above 1");
  class_ = sigma_max_ >= 1.0 - kDeltaTolerance ? NormalizationClass::DeltaNormalized
                                                : NormalizationClass::Normalizable;
}

GaussianKet make_vacuum() { return GaussianKet(1.0, Vec2c::Zero(), Mat2c::Zero()); }

GaussianKet scale(const GaussianKet& ket, Complex factor) {
  if (factor == Complex(0.0)) throw InvalidArgument("scale factor must be nonzero");
  return GaussianKet(ket.c() * factor, ket.w(), ket.F());
}

GaussianKet apply_displacement(const GaussianKet& ket, Mode mode, const ComplexLabel& label) {
  // D = e^{-|eta|^2/2} e^{eta a^dag} e^{-eta^* a}; the right factor shifts a^dag_m by -eta^*.
  const int m = mode_index(mode);
  const Complex eta = label.eta();
  const Complex eta_c = std::conj(eta);
  const Mat2c& F = ket.F();
  Vec2c w = ket.w() - eta_c * F.col(m);
  w(m) += eta;
  const Complex log_factor =
      -0.5 * std::norm(eta) - eta_c * ket.w()(m) + 0.5 * eta_c * eta_c * F(m, m);
  return GaussianKet(ket.c() * std::exp(log_factor), w, F);
}

GaussianKet apply_linear_map(const GaussianKet& ket, const Mat2c& T) {
  return GaussianKet(ket.c(), T * ket.w(), T * ket.F() * T.transpose());
}

GaussianKet apply_beamsplitter(const GaussianKet& ket, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  Mat2c T;
  T << c, -s, s, c;
  return apply_linear_map(ket, T);
}

GaussianKet apply_b_operator(const GaussianKet& ket, double theta) {
  return apply_beamsplitter(ket, -theta);
}

GaussianKet apply_creation_quadratic(const GaussianKet& ket, const Mat2c& K) {
  return GaussianKet(ket.c(), ket.w(), ket.F() + K);
}

GaussianKet apply_annihilation_quadratic(const GaussianKet& ket, const Mat2c& L) {
  // Solves d/dt u = 1/2 d^T L d u on the Gaussian ansatz from t = 0 to 1.
  const Mat2c& F = ket.F();
  const Mat2c I = Mat2c::Identity();
  const Mat2c A = I - L * F;
  if (std::abs(A.determinant()) < 1e-12)
    throw NonConvergentSeries("annihilation quadratic diverges on this ket");
  const Mat2c B = I - F * L;
  const Vec2c w_new = B.inverse() * ket.w();
  const Mat2c F_new = F * A.inverse();
  const Complex log_factor = 0.5 * (ket.w().transpose() * L * w_new)(0);
  const Complex c = ket.c() * std::exp(log_factor) / sqrt_det(A);
  return GaussianKet(c, w_new, F_new);
}

Complex sqrt_det(const Mat2c& A) {
  Eigen::ComplexEigenSolver<Mat2c> es(A, false);
  const auto ev = es.eigenvalues();
  return std::sqrt(ev(0)) * std::sqrt(ev(1));
}

bool gaussian_integral_converges(const GaussianIntegral& p) {
  const Complex disc = p.zeta * p.zeta - 4.0 * p.f * p.g;
  auto branch = [&](Complex s) {
    return s.real() < 0.0 && std::abs(s) > 0.0 && (disc / s).real() < 0.0;
  };
  return branch(p.zeta + p.f + p.g) || branch(p.zeta - p.f - p.g);
}

Complex gaussian_integral(const GaussianIntegral& p) {
  if (!gaussian_integral_converges(p))
    throw DivergentOverlap("Gaussian integral convergence conditions fail");
  const Complex disc = p.zeta * p.zeta - 4.0 * p.f * p.g;
  // Branch continuous with 1/(-zeta) as f g -> 0.
  const Complex root = -p.zeta * std::sqrt(1.0 - 4.0 * p.f * p.g / (p.zeta * p.zeta));
  const Complex num = -p.zeta * p.xi * p.eta + p.xi * p.xi * p.g + p.eta * p.eta * p.f;
  return std::exp(num / disc) / root;
}

namespace {

// Integrates z_first, then z_second, of the coherent-state representation
//   exp(-|z|^2 + b.z + 1/2 z^T B z + k.z^* + 1/2 z^*T K z^*).
// Returns false when either stage violates the convergence conditions.
bool nested_overlap(const Vec2c& b, const Mat2c& B, const Vec2c& k, const Mat2c& K, int first,
                    Complex& out) {
  const int second = 1 - first;
  const Complex beta = b(first), gamma = k(first);
  const Complex p = B(first, second), q = K(first, second);
  const Complex f = 0.5 * B(first, first), g = 0.5 * K(first, first);
  GaussianIntegral stage1{-1.0, beta, gamma, f, g};
  if (!gaussian_integral_converges(stage1)) return false;
  const Complex d1 = 1.0 - 4.0 * f * g;
  const Complex pre1 = 1.0 / std::sqrt(d1);
  const Complex const1 = (beta * gamma + g * beta * beta + f * gamma * gamma) / d1;
  GaussianIntegral stage2{-1.0 + p * q / d1,
                          b(second) + (gamma * p + 2.0 * g * beta * p) / d1,
                          k(second) + (beta * q + 2.0 * f * gamma * q) / d1,
                          0.5 * B(second, second) + g * p * p / d1,
                          0.5 * K(second, second) + f * q * q / d1};
  if (!gaussian_integral_converges(stage2)) return false;
  out = pre1 * std::exp(const1) * gaussian_integral(stage2);
  return true;
}

}  // namespace

Complex overlap_determinant(const GaussianKet& bra, const GaussianKet& ket) {
  const Mat2c B = bra.F().conjugate();
  const Vec2c b = bra.w().conjugate();
  const Mat2c& K = ket.F();
  const Vec2c& k = ket.w();
  const Mat2c I = Mat2c::Identity();
  const Mat2c BK = I - B * K;
  if (std::abs(BK.determinant()) < 1e-12) throw DivergentOverlap("singular contraction");
  const Mat2c KB_inv = (I - K * B).inverse();
  const Mat2c BK_inv = BK.inverse();
  const Complex expo = (b.transpose() * KB_inv * k)(0) +
                       0.5 * (b.transpose() * KB_inv * K * b)(0) +
                       0.5 * (k.transpose() * BK_inv * B * k)(0);
  return std::conj(bra.c()) * ket.c() * std::exp(expo) / sqrt_det(BK);
}

Complex overlap(const GaussianKet& bra, const GaussianKet& ket) {
  const Mat2c B = bra.F().conjugate();
  const Vec2c b = bra.w().conjugate();
  const Mat2c& K = ket.F();
  const Vec2c& k = ket.w();
  if (std::abs((Mat2c::Identity() - B * K).determinant()) < 1e-12)
    throw DivergentOverlap("delta-normalized pair along a common quadrature");
  Complex value;
  if (nested_overlap(b, B, k, K, 0, value) || nested_overlap(b, B, k, K, 1, value))
    return std::conj(bra.c()) * ket.c() * value;
  return overlap_determinant(bra, ket);
}

}  // namespace cvbs
