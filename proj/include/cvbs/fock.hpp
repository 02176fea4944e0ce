#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cvbs/common.hpp"
#include "cvbs/gaussian_ket.hpp"

namespace cvbs {

// Two-mode amplitudes for 0 <= n1, n2 <= cutoff, row-major in (n1, n2).
class FockVector {
 public:
  explicit FockVector(int cutoff);
  FockVector(int cutoff, Eigen::VectorXcd amplitudes);

  static int dimension(int cutoff) { return (cutoff + 1) * (cutoff + 1); }
  int index(int n1, int n2) const { return n1 * (cutoff_ + 1) + n2; }

  int cutoff() const { return cutoff_; }
  int dim() const { return dimension(cutoff_); }
  Complex operator()(int n1, int n2) const { return amps_(index(n1, n2)); }
  Complex& operator()(int n1, int n2) { return amps_(index(n1, n2)); }
  const Eigen::VectorXcd& amplitudes() const { return amps_; }
  Eigen::VectorXcd& amplitudes() { return amps_; }
  double norm() const { return amps_.norm(); }

 private:
  int cutoff_;
  Eigen::VectorXcd amps_;
};

class OperatorMatrix {
 public:
  OperatorMatrix(int cutoff, Eigen::MatrixXcd entries);
  static OperatorMatrix identity(int cutoff);

  int cutoff() const { return cutoff_; }
  const Eigen::MatrixXcd& matrix() const { return m_; }
  OperatorMatrix adjoint() const { return OperatorMatrix(cutoff_, m_.adjoint()); }
  FockVector apply(const FockVector& v) const;

  friend OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b);
  friend OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b);
  friend OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b);
  friend OperatorMatrix operator*(Complex s, const OperatorMatrix& a);

 private:
  int cutoff_;
  Eigen::MatrixXcd m_;
};

enum class Ladder { Annihilate, Create };
enum class Quadrature { X, P };

OperatorMatrix ladder_matrix(Mode mode, Ladder kind, int cutoff);
// X = (a + a^dag)/sqrt2, P = (a - a^dag)/(sqrt2 i).
OperatorMatrix quadrature_matrix(Mode mode, Quadrature kind, int cutoff);

// Matrix-free equivalents; identical truncation to the matrices above.
FockVector apply_ladder(Mode mode, Ladder kind, const FockVector& v);
FockVector apply_quadrature(Mode mode, Quadrature kind, const FockVector& v);

FockVector fock_expand(const GaussianKet& ket, int cutoff);

Complex inner(const FockVector& bra, const FockVector& ket);
// |<u|v>|^2 / (<u|u><v|v>).
double fidelity(const FockVector& u, const FockVector& v);
// Zeroes every component with n1 + n2 > max_total.
FockVector project_total(const FockVector& v, int max_total);

// <psi|O|psi> / <psi|psi>.
Complex expectation(const OperatorMatrix& op, const FockVector& state);

// ||P (O - lambda) psi|| / ||P psi||, P onto n1 + n2 <= cutoff - guard.
double eigen_residual(const OperatorMatrix& op, const FockVector& state, Complex eigenvalue,
                      int guard);
// Same quantity given image = O psi.
double guarded_residual(const FockVector& image, const FockVector& state, Complex eigenvalue,
                        int guard);

inline constexpr double kExpmTolerance = 1e-14;

// Scaling and squaring with a Taylor kernel.
Eigen::MatrixXcd expm(const Eigen::MatrixXcd& a);
OperatorMatrix expm(const OperatorMatrix& generator);

// a^dag Lambda a = sum_ij Lambda(i,j) a_i^dag a_j.
OperatorMatrix one_body_generator(const Mat2c& lambda, int cutoff);

// expm restricted to blocks of fixed n1 + n2; the generator must conserve it.
OperatorMatrix expm_number_conserving(const OperatorMatrix& generator);

// exp(a^dag Lambda a) with its fixed-total blocks exponentiated once.
class OneBodyPropagator {
 public:
  OneBodyPropagator(const Mat2c& lambda, int cutoff);
  int cutoff() const { return cutoff_; }
  FockVector apply(const FockVector& v) const;

 private:
  int cutoff_;
  std::vector<Eigen::MatrixXcd> blocks_;
};

FockVector apply_one_body_exp(const Mat2c& lambda, const FockVector& v);

// exp(1/2 y^T Q y) v with y = a^dag (Create) or y = a (Annihilate).
// Stops once a term is below 1e-16 of the sum; throws NonConvergentSeries
// if that does not happen within cutoff + 2 terms.
FockVector apply_quadratic_exp(const Mat2c& q, Ladder kind, const FockVector& v);

struct QuadratureMoments {
  Eigen::Vector4d mean;  // (X1, P1, X2, P2)
  Eigen::Matrix4d cov;   // symmetrized
};

QuadratureMoments quadrature_moments(const FockVector& state);

std::string fock_to_json(const FockVector& v);
FockVector fock_from_json(const std::string& text);

}  // namespace cvbs
