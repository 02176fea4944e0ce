#include "cvbs/squeezer.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cvbs/errors.hpp"
#include "cvbs/format.hpp"
#include "cvbs/entangled_states.hpp"
#include "cvbs/phase_space.hpp"

namespace cvbs {

SqueezeParams SqueezeParams::make(double lambda, double theta) {
  require_open_angle(theta);
  if (!std::isfinite(lambda)) throw InvalidArgument("lambda must be finite");
  SqueezeParams p;
  p.lambda = lambda;
  p.mu = std::exp(lambda);
  p.theta = theta;
  const double ch = std::cosh(lambda), sh = std::sinh(lambda);
  const double c2 = std::cos(2 * theta), s2 = std::sin(2 * theta);
  p.S = ch * ch - c2 * c2;
  p.alpha = Complex(ch * s2, sh * c2);
  p.phi = std::atan2(p.alpha.imag(), p.alpha.real());
  return p;
}

namespace {

struct Trig {
  double ch, sh, c2, s2;
  explicit Trig(const SqueezeParams& p)
      : ch(std::cosh(p.lambda)), sh(std::sinh(p.lambda)), c2(std::cos(2 * p.theta)),
        s2(std::sin(2 * p.theta)) {}
};

Mat2 creation_matrix(const SqueezeParams& p) {
  const Trig t(p);
  Mat2 K;
  K << t.sh * t.c2, t.ch * t.s2, t.ch * t.s2, -t.sh * t.c2;
  return (t.sh / p.S) * K;
}

Mat2 log_M(const SqueezeParams& p) {
  const double d = std::log(std::sin(2 * p.theta) / std::sqrt(p.S));
  Mat2 m;
  m << d, p.phi, -p.phi, d;
  return m;
}

double max_abs(const Mat2& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

Mat2 matrix_M(const SqueezeParams& p) {
  require_open_angle(p.theta);
  const Trig t(p);
  Mat2 m;
  m << t.ch * t.s2, t.sh * t.c2, -t.sh * t.c2, t.ch * t.s2;
  return (t.s2 / p.S) * m;
}

MDiagonalization diagonalize_M(const SqueezeParams& p) {
  const Mat2 M = matrix_M(p);
  const Complex i(0.0, 1.0);
  Mat2c V, Vp, D;
  V << 0.5, 0.5 * i, 0.5 * i, 0.5;
  Vp << 1.0, -i, -i, 1.0;
  D << p.alpha, 0.0, 0.0, std::conj(p.alpha);
  const Mat2c rec = (std::sin(2 * p.theta) / p.S) * V * D * Vp;
  MDiagonalization out;
  out.alpha = p.alpha;
  out.alpha_conj = std::conj(p.alpha);
  out.phi = p.phi;
  out.log_M = log_M(p);
  out.reconstruction_error = (rec - M.cast<Complex>()).cwiseAbs().maxCoeff();
  const Eigen::MatrixXcd e = expm(Eigen::MatrixXcd(out.log_M.cast<Complex>()));
  out.exp_log_error = (e - Eigen::MatrixXcd(M.cast<Complex>())).cwiseAbs().maxCoeff();
  return out;
}

Bogoliubov bogoliubov(const SqueezeParams& p) {
  const Mat2 M = matrix_M(p);
  const Trig t(p);
  const double cot2 = t.c2 / t.s2;
  Bogoliubov b;
  b.M_inv << t.ch, -cot2 * t.sh, cot2 * t.sh, t.ch;
  b.K = creation_matrix(p);
  b.M_inv_K = b.M_inv * b.K;
  b.M_inv_Mt_inv = b.M_inv * b.M_inv.transpose();
  b.action.setZero();
  b.action.topLeftCorner<2, 2>() = b.M_inv;
  b.action.topRightCorner<2, 2>() = -b.M_inv_K;
  b.action.bottomLeftCorner<2, 2>() = -b.M_inv_K;
  b.action.bottomRightCorner<2, 2>() = b.M_inv;
  b.inverse_error = max_abs(b.M_inv * M - Mat2::Identity());
  const double r = t.sh / t.s2;
  Mat2 off;
  off << 0.0, r, r, 0.0;
  b.off_diagonal_error = max_abs(b.M_inv_K - off);
  b.gram_error = max_abs(b.M_inv_Mt_inv - (1.0 + r * r) * Mat2::Identity());
  return b;
}

double unitarity_check(const SqueezeParams& p) {
  const Bogoliubov b = bogoliubov(p);
  const Mat2& A = b.M_inv;
  const Mat2& B = b.M_inv_K;
  const double d1 = max_abs(A * b.K * A.transpose() - A * B.transpose());
  const double d2 = max_abs(A * A.transpose() - B * B.transpose() - Mat2::Identity());
  return std::max(d1, d2);
}

Mat2 annihilation_matrix(const SqueezeParams& p) {
  require_open_angle(p.theta);
  const Trig t(p);
  Mat2 L;
  L << t.sh * t.c2, -t.ch * t.s2, -t.ch * t.s2, -t.sh * t.c2;
  return (t.sh / p.S) * L;
}

double u_prefactor(const SqueezeParams& p) { return std::sin(2 * p.theta) / std::sqrt(p.S); }

namespace {

// U = pref exp(1/2 a^dag K a^dag) exp(a^dag lnM a) exp(1/2 a L a);
// U^dag = pref exp(1/2 a^dag L a^dag) exp(a^dag lnM^T a) exp(1/2 a K a).
class UFactors {
 public:
  UFactors(const SqueezeParams& p, int cutoff)
      : K_(creation_matrix(p).cast<Complex>()),
        L_(annihilation_matrix(p).cast<Complex>()),
        mid_(log_M(p).cast<Complex>(), cutoff),
        mid_t_(log_M(p).transpose().cast<Complex>(), cutoff),
        pref_(u_prefactor(p)) {}

  FockVector apply(const FockVector& v) const {
    FockVector x = apply_quadratic_exp(L_, Ladder::Annihilate, v);
    x = mid_.apply(x);
    x = apply_quadratic_exp(K_, Ladder::Create, x);
    x.amplitudes() *= pref_;
    return x;
  }

  FockVector apply_dagger(const FockVector& v) const {
    FockVector x = apply_quadratic_exp(K_, Ladder::Annihilate, v);
    x = mid_t_.apply(x);
    x = apply_quadratic_exp(L_, Ladder::Create, x);
    x.amplitudes() *= pref_;
    return x;
  }

 private:
  Mat2c K_, L_;
  OneBodyPropagator mid_, mid_t_;
  double pref_;
};

FockVector basis_vector(int cutoff, int j) {
  FockVector e(cutoff);
  e.amplitudes()(j) = 1.0;
  return e;
}

}  // namespace

FockVector apply_U_fock(const SqueezeParams& p, const FockVector& v) {
  return UFactors(p, v.cutoff()).apply(v);
}

FockVector apply_U_dagger_fock(const SqueezeParams& p, const FockVector& v) {
  return UFactors(p, v.cutoff()).apply_dagger(v);
}

OperatorMatrix build_U_fock(const SqueezeParams& p, int cutoff) {
  const UFactors u(p, cutoff);
  const int d = FockVector::dimension(cutoff);
  Eigen::MatrixXcd m(d, d);
  for (int j = 0; j < d; ++j) m.col(j) = u.apply(basis_vector(cutoff, j)).amplitudes();
  return OperatorMatrix(cutoff, std::move(m));
}

OperatorMatrix two_mode_squeezer_fock(double lambda, int cutoff) {
  const double t = std::tanh(lambda), sech = 1.0 / std::cosh(lambda);
  Mat2c raise, lower;
  raise << 0.0, t, t, 0.0;
  lower << 0.0, -t, -t, 0.0;
  const int d = FockVector::dimension(cutoff);
  Eigen::MatrixXcd m(d, d);
  for (int j = 0; j < d; ++j) {
    FockVector x = apply_quadratic_exp(lower, Ladder::Annihilate, basis_vector(cutoff, j));
    for (int n1 = 0; n1 <= cutoff; ++n1)
      for (int n2 = 0; n2 <= cutoff; ++n2) x(n1, n2) *= std::pow(sech, n1 + n2);
    x = apply_quadratic_exp(raise, Ladder::Create, x);
    m.col(j) = sech * x.amplitudes();
  }
  return OperatorMatrix(cutoff, std::move(m));
}

GaussianKet apply_U_exact(const SqueezeParams& p, const GaussianKet& ket) {
  GaussianKet x = apply_annihilation_quadratic(ket, annihilation_matrix(p).cast<Complex>());
  x = apply_linear_map(x, matrix_M(p).cast<Complex>());
  x = apply_creation_quadratic(x, creation_matrix(p).cast<Complex>());
  return scale(x, u_prefactor(p));
}

double guarded_unitarity_deviation(const SqueezeParams& p, int cutoff, int guard) {
  if (guard < 0 || guard >= cutoff) throw InvalidArgument("guard must be in [0, cutoff)");
  const UFactors u(p, cutoff);
  std::vector<int> keep;
  for (int n1 = 0; n1 <= cutoff; ++n1)
    for (int n2 = 0; n2 <= cutoff; ++n2)
      if (n1 + n2 <= cutoff - guard) keep.push_back(n1 * (cutoff + 1) + n2);
  const int d = FockVector::dimension(cutoff);
  Eigen::MatrixXcd x(d, keep.size());
  for (size_t j = 0; j < keep.size(); ++j)
    x.col(Eigen::Index(j)) = u.apply_dagger(basis_vector(cutoff, keep[j])).amplitudes();
  const Eigen::MatrixXcd g = x.adjoint() * x;
  return (g - Eigen::MatrixXcd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
}

double coefficient_distance(const GaussianKet& a, const GaussianKet& b) {
  return std::max({std::abs(a.c() - b.c()), (a.w() - b.w()).cwiseAbs().maxCoeff(),
                   (a.F() - b.F()).cwiseAbs().maxCoeff()});
}

SqueezeActionReport squeeze_action_check(const ComplexLabel& eta, const SqueezeParams& p,
                                         int cutoff, int guard) {
  const GaussianKet in = make_eta_theta_state(eta, p.theta);
  const GaussianKet expected = scale(make_eta_theta_state(ComplexLabel(eta.eta() / p.mu), p.theta), 1.0 / p.mu);
  SqueezeActionReport r;
  const FockVector image = apply_U_fock(p, fock_expand(in, cutoff));
  const FockVector target = fock_expand(expected, cutoff);
  const int keep = cutoff - guard;
  const FockVector diff(cutoff, image.amplitudes() - target.amplitudes());
  r.fock_distance = project_total(diff, keep).norm() / project_total(target, keep).norm();
  r.exponent_distance = coefficient_distance(apply_U_exact(p, in), expected);
  // Delta normalization scales as 1/|Jacobian| under eta -> eta/mu.
  const double jacobian = (Mat2::Identity() / p.mu).determinant();
  r.measure_consistency = std::abs((1.0 / (p.mu * p.mu)) / jacobian - 1.0);
  return r;
}

GaussianKet squeezed_vacuum(const SqueezeParams& p) {
  return GaussianKet(u_prefactor(p), Vec2c::Zero(), annihilation_matrix(p).cast<Complex>());
}

Variances variance_closed_form(const SqueezeParams& p) {
  require_open_angle(p.theta);
  const double ch = std::cosh(p.lambda), sh = std::sinh(p.lambda);
  const double t = std::tan(p.theta), ct = 1.0 / t;
  const double base = ch * ch + 0.5 * sh * sh * (t * t + ct * ct);
  const double cross = 0.5 * std::sinh(2 * p.lambda) * (t + ct);
  return Variances{base - cross, base + cross};
}

Variances variance_phase_space(const SqueezeParams& p) {
  const GaussianState s = evolve(vacuum_state(), symplectic_of_U(p.lambda, p.theta));
  return Variances{quad_variance(s, Eigen::Vector4d(1, 0, 1, 0)),
                   quad_variance(s, Eigen::Vector4d(0, 1, 0, 1))};
}

Variances variance_fock(const SqueezeParams& p, int cutoff) {
  const QuadratureMoments m = quadrature_moments(fock_expand(squeezed_vacuum(p), cutoff));
  const Eigen::Vector4d x(1, 0, 1, 0), q(0, 1, 0, 1);
  return Variances{x.dot(m.cov * x), q.dot(m.cov * q)};
}

GaussianKet asymptotic_state(const SqueezeParams& p) {
  require_open_angle(p.theta);
  const double t = std::tanh(p.lambda);
  const double c2 = std::cos(2 * p.theta), s2 = std::sin(2 * p.theta);
  Mat2c F;
  F << t * t * c2, t * s2, t * s2, -t * t * c2;
  return GaussianKet(1.0, Vec2c::Zero(), F);
}

GaussianKet bs_output_two_squeezed(double lambda, double theta) {
  require_open_angle(theta);
  const double t = std::tanh(lambda);
  Mat2c F = Mat2c::Zero();
  F(0, 0) = t;
  F(1, 1) = -t;
  return apply_beamsplitter(GaussianKet(1.0, Vec2c::Zero(), F), theta);
}

GaussianKet bs_output_closed_form(double lambda, double theta) {
  require_open_angle(theta);
  const double t = std::tanh(lambda);
  const double c2 = std::cos(2 * theta), s2 = std::sin(2 * theta);
  Mat2c F;
  F << t * c2, t * s2, t * s2, -t * c2;
  return GaussianKet(1.0, Vec2c::Zero(), F);
}

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

ScanRow scan_row(double lambda, double theta, int fock_cutoff) {
  const SqueezeParams p = SqueezeParams::make(lambda, theta);
  ScanRow r;
  r.lambda = lambda;
  r.theta = theta;
  r.S = p.S;
  r.phi = p.phi;
  r.closed = variance_closed_form(p);
  r.phase_space = variance_phase_space(p);
  r.unitarity_dev = unitarity_check(p);
  r.pass = rel(r.phase_space.var_x, r.closed.var_x) <= 1e-12 &&
           rel(r.phase_space.var_p, r.closed.var_p) <= 1e-12 && r.unitarity_dev <= 1e-11 &&
           r.closed.var_p - std::exp(2 * lambda) >= -1e-12;
  if (fock_cutoff > 0) {
    r.fock = variance_fock(p, fock_cutoff);
    r.pass = r.pass && rel(r.fock.var_x, r.closed.var_x) <= 1e-6 &&
             rel(r.fock.var_p, r.closed.var_p) <= 1e-6;
  } else {
    r.fock = Variances{std::nan(""), std::nan("")};
  }
  return r;
}

std::string scan_csv(const std::vector<ScanRow>& rows) {
  std::ostringstream os;
  os << "lambda,theta,S,phi,varX_closed,varP_closed,varX_fock,varP_fock,varX_ps,varP_ps,"
        "unitarity_dev,pass\n";
  auto num = [](double x) { return std::isnan(x) ? std::string() : fmt_double(x); };
  for (const auto& r : rows)
    os << num(r.lambda) << ',' << num(r.theta) << ',' << num(r.S) << ',' << num(r.phi) << ','
       << num(r.closed.var_x) << ',' << num(r.closed.var_p) << ',' << num(r.fock.var_x) << ','
       << num(r.fock.var_p) << ',' << num(r.phase_space.var_x) << ','
       << num(r.phase_space.var_p) << ',' << num(r.unitarity_dev) << ','
       << (r.pass ? "true" : "false") << '\n';
  return os.str();
}

}  // namespace cvbs
