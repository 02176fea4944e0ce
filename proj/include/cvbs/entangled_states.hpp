#pragma once

#include <string>
#include <utility>
#include <vector>

#include "cvbs/common.hpp"
#include "cvbs/fock.hpp"
#include "cvbs/gaussian_ket.hpp"

namespace cvbs {

// (a3, a4)^T = [[t', r], [r', t]] (a1, a2)^T.
struct ScatteringMatrix {
  Complex t;
  Complex r;
  Complex t_prime;
  Complex r_prime;
};

// Largest violation among the five reciprocity relations.
double scattering_deviation(const ScatteringMatrix& sm);
bool check_scattering_matrix(const ScatteringMatrix& sm);
// Amplitudes of B a_i B^-1 for B = exp[theta (a1^dag a2 - a2^dag a1)].
ScatteringMatrix scattering_of_b_operator(double theta);

// Product of two single-mode kets; each must only populate its own mode.
GaussianKet tensor(const GaussianKet& mode1, const GaussianKet& mode2);

GaussianKet make_x_eigenket(double x, Mode mode);
GaussianKet make_p_eigenket(double p, Mode mode);

GaussianKet make_eta_state(const ComplexLabel& eta);
GaussianKet make_eta_theta_state(const ComplexLabel& eta, double theta);
// Beam splitter on |p=0>_1 |x=0>_2, then D_1(eta), rescaled by sqrt(pi)
// to remove the input normalization pi^{-1/2}.
GaussianKet make_eta_theta_via_beamsplitter(const ComplexLabel& eta, double theta);

struct ResidualReport {
  Complex eta;
  double theta;
  int cutoff;
  int guard;
  double tolerance = 1e-8;
  std::vector<std::pair<std::string, double>> residuals;
  bool pass = false;

  double max_residual() const;
  std::string to_json() const;
};

// Guarded residuals of the six linear eigen-relations of |eta, theta>,
// keyed eq13 .. eq18.
ResidualReport verify_eta_theta_relations(const ComplexLabel& eta, double theta, int cutoff,
                                          int guard);

// Residuals of |eta> under a1 - a2^dag, a2 - a1^dag, X1 - X2, P1 + P2,
// keyed eq6a, eq6b, eq7, eq8.
ResidualReport verify_eta_relations(const ComplexLabel& eta, int cutoff, int guard);

struct RotationFidelities {
  double plus;   // exp[theta (a1^dag a2 + a2^dag a1)] |eta>
  double minus;  // exp[theta (a1^dag a2 - a2^dag a1)] |eta>
};

// Fidelities of the truncated rotated |eta> with truncated |eta, theta>.
RotationFidelities rotation_fidelities(const ComplexLabel& eta, double theta, int cutoff);

// 1 - max(plus, minus). Requires eta != 0 and theta != pi/4.
double verify_not_rotated(const ComplexLabel& eta, double theta, int cutoff);

}  // namespace cvbs
