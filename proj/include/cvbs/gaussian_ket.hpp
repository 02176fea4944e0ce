#pragma once

#include "cvbs/common.hpp"

namespace cvbs {

enum class NormalizationClass { Normalizable, DeltaNormalized };

const char* to_string(NormalizationClass n);

// c * exp(w . a^dag + 1/2 a^dag^T F a^dag) |00>.
// F is stored exactly symmetric; its largest singular value is < 1 (Normalizable)
// or 1 within kDeltaTolerance (DeltaNormalized). Anything larger is rejected.
class GaussianKet {
 public:
  static constexpr double kDeltaTolerance = 1e-9;

  GaussianKet(Complex c, const Vec2c& w, const Mat2c& F);

  Complex c() const { return c_; }
  const Vec2c& w() const { return w_; }
  const Mat2c& F() const { return F_; }
  NormalizationClass normalization_class() const { return class_; }
  double max_singular_value() const { return sigma_max_; }

 private:
  Complex c_;
  Vec2c w_;
  Mat2c F_;
  NormalizationClass class_;
  double sigma_max_;
};

GaussianKet make_vacuum();

GaussianKet scale(const GaussianKet& ket, Complex factor);

// exp(eta a_m^dag - eta^* a_m) applied to ket.
GaussianKet apply_displacement(const GaussianKet& ket, Mode mode, const ComplexLabel& eta);

// Unitary V with V|00> = |00> and V a_k^dag V^-1 = sum_j T(j,k) a_j^dag.
// T need not be unitary: exp(a^dag Lambda a) gives T = exp(Lambda).
GaussianKet apply_linear_map(const GaussianKet& ket, const Mat2c& T);

// exp[angle (a2^dag a1 - a1^dag a2)]: a1^dag -> a1^dag cos + a2^dag sin,
// a2^dag -> a2^dag cos - a1^dag sin.
GaussianKet apply_beamsplitter(const GaussianKet& ket, double angle);

// B(theta) = exp[theta (a1^dag a2 - a2^dag a1)], the inverse rotation.
GaussianKet apply_b_operator(const GaussianKet& ket, double theta);

// exp(1/2 a^dag^T K a^dag) ket; K symmetric.
GaussianKet apply_creation_quadratic(const GaussianKet& ket, const Mat2c& K);

// exp(1/2 a^T L a) ket; L symmetric. Requires spectral radius of L F below 1.
GaussianKet apply_annihilation_quadratic(const GaussianKet& ket, const Mat2c& L);

// Parameters of  int d^2z/pi exp(zeta |z|^2 + xi z + eta z^* + f z^2 + g z^*2).
struct GaussianIntegral {
  Complex zeta;
  Complex xi;
  Complex eta;
  Complex f;
  Complex g;
};

bool gaussian_integral_converges(const GaussianIntegral& p);

// Closed form of the integral above; throws DivergentOverlap when the
// convergence conditions fail.
Complex gaussian_integral(const GaussianIntegral& p);

// <bra|ket>, reduced to two nested single-mode Gaussian integrals.
Complex overlap(const GaussianKet& bra, const GaussianKet& ket);

// <bra|ket> from the 2x2 determinant formula. Independent of the nested route.
Complex overlap_determinant(const GaussianKet& bra, const GaussianKet& ket);

// Principal square root of det(A) taken eigenvalue by eigenvalue.
Complex sqrt_det(const Mat2c& A);

}  // namespace cvbs
