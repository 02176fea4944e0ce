#pragma once

#include <cmath>
#include <random>

#include "cvbs/fock.hpp"
#include "cvbs/gaussian_ket.hpp"

namespace cvbs::testing {

inline Complex random_complex(std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  return Complex(u(rng), u(rng));
}

// Random Normalizable ket whose quadratic part has largest singular value sigma.
inline GaussianKet random_ket(std::mt19937_64& rng, double sigma, double w_scale = 0.5) {
  Mat2c F;
  F(0, 0) = random_complex(rng, 1.0);
  F(1, 1) = random_complex(rng, 1.0);
  F(0, 1) = F(1, 0) = random_complex(rng, 1.0);
  const double s = Eigen::JacobiSVD<Mat2c>(F).singularValues()(0);
  F *= sigma / s;
  std::uniform_real_distribution<double> mag(0.5, 1.5);
  std::uniform_real_distribution<double> ph(0.0, 2 * kPi);
  const Complex c = std::polar(mag(rng), ph(rng));
  return GaussianKet(c, Vec2c(random_complex(rng, w_scale), random_complex(rng, w_scale)), F);
}

// Applies G = sum_k x_k^dag ... through repeated action of `step` and sums the
// exponential series until terms vanish.
template <class Step>
FockVector exp_series(const FockVector& v, Step step, int max_terms = 400) {
  FockVector sum = v, term = v;
  for (int k = 1; k <= max_terms; ++k) {
    term = step(term);
    term.amplitudes() /= double(k);
    sum.amplitudes() += term.amplitudes();
    if (term.norm() <= 1e-18 * sum.norm()) break;
  }
  return sum;
}

// exp(w.a^dag + 1/2 a^dag F a^dag)|00> summed term by term.
inline FockVector series_expand(const GaussianKet& ket, int cutoff) {
  FockVector vac(cutoff);
  vac(0, 0) = 1.0;
  auto step = [&](const FockVector& x) {
    const auto c1 = apply_ladder(Mode::One, Ladder::Create, x);
    const auto c2 = apply_ladder(Mode::Two, Ladder::Create, x);
    const auto c11 = apply_ladder(Mode::One, Ladder::Create, c1);
    const auto c22 = apply_ladder(Mode::Two, Ladder::Create, c2);
    const auto c12 = apply_ladder(Mode::Two, Ladder::Create, c1);
    const Vec2c& w = ket.w();
    const Mat2c& F = ket.F();
    return FockVector(cutoff, w(0) * c1.amplitudes() + w(1) * c2.amplitudes() +
                                  0.5 * F(0, 0) * c11.amplitudes() +
                                  0.5 * F(1, 1) * c22.amplitudes() + F(0, 1) * c12.amplitudes());
  };
  FockVector out = exp_series(vac, step);
  out.amplitudes() *= ket.c();
  return out;
}

// Restricts a vector to the components of a smaller cutoff.
inline FockVector restrict_to(const FockVector& v, int cutoff) {
  FockVector out(cutoff);
  for (int n1 = 0; n1 <= cutoff; ++n1)
    for (int n2 = 0; n2 <= cutoff; ++n2) out(n1, n2) = v(n1, n2);
  return out;
}

inline double max_diff(const FockVector& a, const FockVector& b) {
  return (a.amplitudes() - b.amplitudes()).cwiseAbs().maxCoeff();
}

inline double max_diff_total(const FockVector& a, const FockVector& b, int max_total) {
  double m = 0.0;
  for (int n1 = 0; n1 <= a.cutoff(); ++n1)
    for (int n2 = 0; n2 <= a.cutoff(); ++n2)
      if (n1 + n2 <= max_total) m = std::max(m, std::abs(a(n1, n2) - b(n1, n2)));
  return m;
}

}  // namespace cvbs::testing
