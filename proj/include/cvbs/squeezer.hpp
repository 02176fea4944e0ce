#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cvbs/common.hpp"
#include "cvbs/fock.hpp"
#include "cvbs/gaussian_ket.hpp"

namespace cvbs {

struct SqueezeParams {
  double lambda;
  double mu;     // e^lambda
  double theta;  // in (0, pi/2)
  double S;      // cosh^2 lambda - cos^2 2theta
  Complex alpha; // cosh lambda sin 2theta + i sinh lambda cos 2theta
  double phi;    // arg alpha

  static SqueezeParams make(double lambda, double theta);
};

Mat2 matrix_M(const SqueezeParams& p);

struct MDiagonalization {
  Complex alpha;
  Complex alpha_conj;
  double phi;
  Mat2 log_M;
  double reconstruction_error;  // max |V diag(alpha, alpha^*) V' sin2theta/S - M|
  double exp_log_error;         // max |exp(log M) - M|
};

MDiagonalization diagonalize_M(const SqueezeParams& p);

struct Bogoliubov {
  Mat2 M_inv;         // closed form
  Mat2 K;             // symmetric
  Mat2 M_inv_K;
  Mat2 M_inv_Mt_inv;  // M^-1 (M^-1)^T
  // Rows give U y U^-1 for y = (a1, a2, a1^dag, a2^dag) in the same basis.
  Eigen::Matrix4d action;
  double inverse_error;       // max |M_inv * M - I|
  double off_diagonal_error;  // max deviation of M^-1 K from its closed form
  double gram_error;          // max deviation of M^-1 M~^-1 from its closed form
};

Bogoliubov bogoliubov(const SqueezeParams& p);

// Larger deviation of the two commutator identities of U a U^-1.
double unitarity_check(const SqueezeParams& p);

// Quadratic coefficient of the trailing annihilation factor exp(1/2 a^T L a).
Mat2 annihilation_matrix(const SqueezeParams& p);
double u_prefactor(const SqueezeParams& p);

// U v and U^dag v through the three ordered factors.
FockVector apply_U_fock(const SqueezeParams& p, const FockVector& v);
FockVector apply_U_dagger_fock(const SqueezeParams& p, const FockVector& v);

OperatorMatrix build_U_fock(const SqueezeParams& p, int cutoff);

// exp[l (a1^dag a2^dag - a1 a2)] = sech(l) exp(tanh(l) a1^dag a2^dag) sech(l)^{n1+n2} exp(-tanh(l) a1 a2), diagonal middle factor.
OperatorMatrix two_mode_squeezer_fock(double lambda, int cutoff);

// Exact action of U on a ket in exponent form.
GaussianKet apply_U_exact(const SqueezeParams& p, const GaussianKet& ket);

// max |<m|U U^dag|n> - delta_mn| over n1 + n2 <= cutoff - guard.
double guarded_unitarity_deviation(const SqueezeParams& p, int cutoff, int guard);

struct SqueezeActionReport {
  double fock_distance;         // guarded relative distance, Fock route
  double exponent_distance;     // max coefficient difference, exact route
  double measure_consistency;   // |(1/mu)^2 / Jacobian(eta -> eta/mu) - 1|
};

SqueezeActionReport squeeze_action_check(const ComplexLabel& eta, const SqueezeParams& p,
                                         int cutoff, int guard);

// U^-1 |00>.
GaussianKet squeezed_vacuum(const SqueezeParams& p);

struct Variances {
  double var_x;  // Var(X1 + X2)
  double var_p;  // Var(P1 + P2)
};

Variances variance_closed_form(const SqueezeParams& p);
Variances variance_phase_space(const SqueezeParams& p);
Variances variance_fock(const SqueezeParams& p, int cutoff);

// Large-lambda form of U|00>, unit prefactor.
GaussianKet asymptotic_state(const SqueezeParams& p);
// Beam splitter applied to exp(t/2 a1^dag^2) exp(-t/2 a2^dag^2)|00>, t = tanh lambda.
GaussianKet bs_output_two_squeezed(double lambda, double theta);
GaussianKet bs_output_closed_form(double lambda, double theta);

// max |c - c'|, |w - w'|, |F - F'|.
double coefficient_distance(const GaussianKet& a, const GaussianKet& b);

struct ScanRow {
  double lambda;
  double theta;
  double S;
  double phi;
  Variances closed;
  Variances fock;
  Variances phase_space;
  double unitarity_dev;
  bool pass;
};

// Fock columns are evaluated only when fock_cutoff > 0.
ScanRow scan_row(double lambda, double theta, int fock_cutoff);
std::string scan_csv(const std::vector<ScanRow>& rows);

}  // namespace cvbs
