#pragma once

#include <complex>
#include <numbers>

#include <Eigen/Dense>

namespace cvbs {

using Complex = std::complex<double>;
using Vec2c = Eigen::Vector2cd;
using Mat2c = Eigen::Matrix2cd;
using Mat2 = Eigen::Matrix2d;

inline constexpr double kPi = std::numbers::pi;

enum class Mode { One = 1, Two = 2 };

inline int mode_index(Mode m) { return m == Mode::One ? 0 : 1; }

// Complex label eta together with its quadrature pair: eta = (eta1 + i eta2) / sqrt(2).
class ComplexLabel {
 public:
  ComplexLabel() = default;
  explicit ComplexLabel(Complex eta) : eta_(eta) {}
  static ComplexLabel from_quadratures(double eta1, double eta2) {
    return ComplexLabel(Complex(eta1, eta2) / std::numbers::sqrt2);
  }

  Complex eta() const { return eta_; }
  double eta1() const { return std::numbers::sqrt2 * eta_.real(); }
  double eta2() const { return std::numbers::sqrt2 * eta_.imag(); }

 private:
  Complex eta_{0.0, 0.0};
};

// Throws DegenerateAngle unless theta lies strictly inside (0, pi/2).
void require_open_angle(double theta);

}  // namespace cvbs
