#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace cvbs {

// Quadrature order (X1, P1, X2, P2); vacuum covariance I/2.
struct GaussianState {
  Eigen::Vector4d mean;
  Eigen::Matrix4d cov;
};

// State map psi -> V psi acting on moments as q -> S q + d.
struct SymplecticMap {
  Eigen::Matrix4d S;
  Eigen::Vector4d d;
};

Eigen::Matrix4d symplectic_form();

GaussianState vacuum_state();
// Throws InvalidArgument for an asymmetric covariance or one violating uncertainty.
GaussianState make_state(const Eigen::Vector4d& mean, const Eigen::Matrix4d& cov);

// Moments of the beam-splitter output B psi, B as in apply_beamsplitter.
SymplecticMap symplectic_of_beamsplitter(double theta);

// Rows of U q U^-1, i.e. the moment map of psi -> U^-1 psi.
SymplecticMap symplectic_of_U(double lambda, double theta);

GaussianState evolve(const GaussianState& state, const SymplecticMap& map);

// Var(c . q) = c^T cov c.
double quad_variance(const GaussianState& state, const Eigen::Vector4d& coeffs);

// max |S Omega S^T - Omega|.
double symplectic_deviation(const SymplecticMap& map);

// Smallest eigenvalue of cov + (i/2) Omega.
double uncertainty_min_eigenvalue(const GaussianState& state);

struct VarianceRow {
  double theta;
  double lambda;
  double var_x_sum;
  double var_p_sum;
  double bound_e2lambda;
  bool pass;  // var_p_sum >= e^{2 lambda} - 1e-12 and var_x_sum * var_p_sum >= 1 - 1e-12
};

VarianceRow variance_row(double lambda, double theta);
std::string variance_rows_csv(const std::vector<VarianceRow>& rows);

}  // namespace cvbs
