#include "cvbs/phase_space.hpp"

#include <cmath>
#include <complex>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "cvbs/common.hpp"
#include "cvbs/errors.hpp"
#include "cvbs/format.hpp"

namespace cvbs {

Eigen::Matrix4d symplectic_form() {
  Eigen::Matrix4d om = Eigen::Matrix4d::Zero();
  om(0, 1) = 1.0;
  om(1, 0) = -1.0;
  om(2, 3) = 1.0;
  om(3, 2) = -1.0;
  return om;
}

GaussianState vacuum_state() {
  return GaussianState{Eigen::Vector4d::Zero(), 0.5 * Eigen::Matrix4d::Identity()};
}

GaussianState make_state(const Eigen::Vector4d& mean, const Eigen::Matrix4d& cov) {
  if (!mean.allFinite() || !cov.allFinite()) throw InvalidArgument("moments must be finite");
  if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw InvalidArgument("covariance must be symmetric");
  GaussianState s{mean, 0.5 * (cov + cov.transpose())};
  if (uncertainty_min_eigenvalue(s) < -1e-12)
    throw InvalidArgument("covariance violates the uncertainty relation");
  return s;
}

SymplecticMap symplectic_of_beamsplitter(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  Eigen::Matrix4d S;
  S << c, 0, -s, 0,
       0, c, 0, -s,
       s, 0, c, 0,
       0, s, 0, c;
  return {S, Eigen::Vector4d::Zero()};
}

SymplecticMap symplectic_of_U(double lambda, double theta) {
  require_open_angle(theta);
  const double ch = std::cosh(lambda), sh = std::sinh(lambda);
  const double t = std::tan(theta), ct = 1.0 / t;
  Eigen::Matrix4d S;
  S << ch, 0, -ct * sh, 0,
       0, ch, 0, t * sh,
       -t * sh, 0, ch, 0,
       0, ct * sh, 0, ch;
  return {S, Eigen::Vector4d::Zero()};
}

GaussianState evolve(const GaussianState& state, const SymplecticMap& map) {
  return GaussianState{map.S * state.mean + map.d, map.S * state.cov * map.S.transpose()};
}

double quad_variance(const GaussianState& state, const Eigen::Vector4d& coeffs) {
  return coeffs.dot(state.cov * coeffs);
}

double symplectic_deviation(const SymplecticMap& map) {
  const Eigen::Matrix4d om = symplectic_form();
  return (map.S * om * map.S.transpose() - om).cwiseAbs().maxCoeff();
}

double uncertainty_min_eigenvalue(const GaussianState& state) {
  const Eigen::Matrix4cd h =
      state.cov.cast<Complex>() + Complex(0.0, 0.5) * symplectic_form().cast<Complex>();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

VarianceRow variance_row(double lambda, double theta) {
  const GaussianState out = evolve(vacuum_state(), symplectic_of_U(lambda, theta));
  VarianceRow r;
  r.theta = theta;
  r.lambda = lambda;
  r.var_x_sum = quad_variance(out, Eigen::Vector4d(1, 0, 1, 0));
  r.var_p_sum = quad_variance(out, Eigen::Vector4d(0, 1, 0, 1));
  r.bound_e2lambda = std::exp(2.0 * lambda);
  r.pass = r.var_p_sum - r.bound_e2lambda >= -1e-12 && r.var_x_sum * r.var_p_sum >= 1.0 - 1e-12;
  return r;
}

std::string variance_rows_csv(const std::vector<VarianceRow>& rows) {
  std::ostringstream os;
  os << "theta,lambda,var_X_sum,var_P_sum,bound_e2lambda,pass\n";
  for (const auto& r : rows)
    os << fmt_double(r.theta) << ',' << fmt_double(r.lambda) << ',' << fmt_double(r.var_x_sum)
       << ',' << fmt_double(r.var_p_sum) << ',' << fmt_double(r.bound_e2lambda) << ','
       << (r.pass ? "true" : "false") << '\n';
  return os.str();
}

}  // namespace cvbs
