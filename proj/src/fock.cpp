#include "cvbs/fock.hpp"

#include <cmath>
#include <vector>

#include "cvbs/errors.hpp"
#include "json.hpp"

namespace cvbs {

FockVector::FockVector(int cutoff) : cutoff_(cutoff) {
  if (cutoff < 1) throw InvalidArgument("cutoff must be at least 1");
  amps_ = Eigen::VectorXcd::Zero(dimension(cutoff));
}

FockVector::FockVector(int cutoff, Eigen::VectorXcd amplitudes)
    : cutoff_(cutoff), amps_(std::move(amplitudes)) {
  if (cutoff < 1) throw InvalidArgument("cutoff must be at least 1");
  if (amps_.size() != dimension(cutoff)) throw InvalidArgument("amplitude count mismatch");
  if (!amps_.allFinite()) throw InvalidArgument("amplitudes must be finite");
}

OperatorMatrix::OperatorMatrix(int cutoff, Eigen::MatrixXcd entries)
    : cutoff_(cutoff), m_(std::move(entries)) {
  const int d = FockVector::dimension(cutoff);
  if (cutoff < 1 || m_.rows() != d || m_.cols() != d)
    throw InvalidArgument("operator dimension does not match cutoff");
}

OperatorMatrix OperatorMatrix::identity(int cutoff) {
  const int d = FockVector::dimension(cutoff);
  return OperatorMatrix(cutoff, Eigen::MatrixXcd::Identity(d, d));
}

FockVector OperatorMatrix::apply(const FockVector& v) const {
  if (v.cutoff() != cutoff_) throw InvalidArgument("cutoff mismatch");
  return FockVector(cutoff_, m_ * v.amplitudes());
}

namespace {

void require_same(int a, int b) {
  if (a != b) throw InvalidArgument("cutoff mismatch");
}

}  // namespace

OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b) {
  require_same(a.cutoff_, b.cutoff_);
  return OperatorMatrix(a.cutoff_, a.m_ + b.m_);
}

OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b) {
  require_same(a.cutoff_, b.cutoff_);
  return OperatorMatrix(a.cutoff_, a.m_ - b.m_);
}

OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b) {
  require_same(a.cutoff_, b.cutoff_);
  return OperatorMatrix(a.cutoff_, a.m_ * b.m_);
}

OperatorMatrix operator*(Complex s, const OperatorMatrix& a) {
  return OperatorMatrix(a.cutoff_, s * a.m_);
}

FockVector apply_ladder(Mode mode, Ladder kind, const FockVector& v) {
  const int N = v.cutoff();
  FockVector out(N);
  const bool first = mode == Mode::One;
  for (int n1 = 0; n1 <= N; ++n1) {
    for (int n2 = 0; n2 <= N; ++n2) {
      const Complex x = v(n1, n2);
      if (x == Complex(0.0)) continue;
      const int n = first ? n1 : n2;
      if (kind == Ladder::Annihilate) {
        if (n == 0) continue;
        (first ? out(n1 - 1, n2) : out(n1, n2 - 1)) += std::sqrt(double(n)) * x;
      } else {
        if (n == N) continue;
        (first ? out(n1 + 1, n2) : out(n1, n2 + 1)) += std::sqrt(double(n + 1)) * x;
      }
    }
  }
  return out;
}

FockVector apply_quadrature(Mode mode, Quadrature kind, const FockVector& v) {
  const Eigen::VectorXcd lo = apply_ladder(mode, Ladder::Annihilate, v).amplitudes();
  const Eigen::VectorXcd hi = apply_ladder(mode, Ladder::Create, v).amplitudes();
  const double r = 1.0 / std::sqrt(2.0);
  if (kind == Quadrature::X) return FockVector(v.cutoff(), r * (lo + hi));
  return FockVector(v.cutoff(), Complex(0.0, -r) * (lo - hi));
}

OperatorMatrix ladder_matrix(Mode mode, Ladder kind, int cutoff) {
  const int d = FockVector::dimension(cutoff);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
  FockVector basis(cutoff);
  for (int j = 0; j < d; ++j) {
    basis.amplitudes().setZero();
    basis.amplitudes()(j) = 1.0;
    m.col(j) = apply_ladder(mode, kind, basis).amplitudes();
  }
  return OperatorMatrix(cutoff, std::move(m));
}

OperatorMatrix quadrature_matrix(Mode mode, Quadrature kind, int cutoff) {
  const OperatorMatrix a = ladder_matrix(mode, Ladder::Annihilate, cutoff);
  const OperatorMatrix ad = a.adjoint();
  const double r = 1.0 / std::sqrt(2.0);
  if (kind == Quadrature::X) return Complex(r) * (a + ad);
  return Complex(0.0, -r) * (a - ad);
}

FockVector fock_expand(const GaussianKet& ket, int cutoff) {
  // From a_i psi = (w_i + sum_j F_ij a_j^dag) psi.
  FockVector A(cutoff);
  const Vec2c& w = ket.w();
  const Mat2c& F = ket.F();
  const int N = cutoff;
  A(0, 0) = ket.c();
  for (int n2 = 1; n2 <= N; ++n2) {
    Complex v = w(1) * A(0, n2 - 1);
    if (n2 > 1) v += F(1, 1) * std::sqrt(double(n2 - 1)) * A(0, n2 - 2);
    A(0, n2) = v / std::sqrt(double(n2));
  }
  for (int n2 = 0; n2 <= N; ++n2) {
    for (int n1 = 0; n1 < N; ++n1) {
      Complex v = w(0) * A(n1, n2);
      if (n1 > 0) v += F(0, 0) * std::sqrt(double(n1)) * A(n1 - 1, n2);
      if (n2 > 0) v += F(0, 1) * std::sqrt(double(n2)) * A(n1, n2 - 1);
      A(n1 + 1, n2) = v / std::sqrt(double(n1 + 1));
    }
  }
  return A;
}

Complex inner(const FockVector& bra, const FockVector& ket) {
  require_same(bra.cutoff(), ket.cutoff());
  return bra.amplitudes().dot(ket.amplitudes());
}

double fidelity(const FockVector& u, const FockVector& v) {
  const double nu = u.amplitudes().squaredNorm();
  const double nv = v.amplitudes().squaredNorm();
  if (nu == 0.0 || nv == 0.0) throw InvalidArgument("zero-norm state");
  return std::norm(inner(u, v)) / (nu * nv);
}

FockVector project_total(const FockVector& v, int max_total) {
  FockVector out = v;
  const int N = v.cutoff();
  for (int n1 = 0; n1 <= N; ++n1)
    for (int n2 = 0; n2 <= N; ++n2)
      if (n1 + n2 > max_total) out(n1, n2) = 0.0;
  return out;
}

Complex expectation(const OperatorMatrix& op, const FockVector& state) {
  const double n = state.amplitudes().squaredNorm();
  if (n == 0.0) throw InvalidArgument("zero-norm state");
  return inner(state, op.apply(state)) / n;
}

double guarded_residual(const FockVector& image, const FockVector& state, Complex eigenvalue,
                        int guard) {
  require_same(image.cutoff(), state.cutoff());
  if (guard < 0 || guard >= state.cutoff()) throw InvalidArgument("guard must be in [0, cutoff)");
  const int keep = state.cutoff() - guard;
  const FockVector diff(state.cutoff(), image.amplitudes() - eigenvalue * state.amplitudes());
  const double denom = project_total(state, keep).norm();
  if (denom < 1e-300) throw InvalidArgument("projected state has zero norm");
  return project_total(diff, keep).norm() / denom;
}

double eigen_residual(const OperatorMatrix& op, const FockVector& state, Complex eigenvalue,
                      int guard) {
  return guarded_residual(op.apply(state), state, eigenvalue, guard);
}

Eigen::MatrixXcd expm(const Eigen::MatrixXcd& a) {
  const Eigen::Index d = a.rows();
  const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm1 > 0.5) squarings = int(std::ceil(std::log2(norm1 / 0.5)));
  const Eigen::MatrixXcd x = a / std::ldexp(1.0, squarings);
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Identity(d, d);
  Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(d, d);
  for (int k = 1; k < 100; ++k) {
    term = (term * x) / double(k);
    sum += term;
    if (term.cwiseAbs().maxCoeff() <= kExpmTolerance * sum.cwiseAbs().maxCoeff()) break;
  }
  for (int i = 0; i < squarings; ++i) sum = sum * sum;
  return sum;
}

OperatorMatrix expm(const OperatorMatrix& generator) {
  return OperatorMatrix(generator.cutoff(), expm(generator.matrix()));
}

namespace {

// Indices of the fixed-total block n1 + n2 = n, ordered by n1.
std::vector<int> block_indices(int n, int N) {
  std::vector<int> idx;
  for (int n1 = std::max(0, n - N); n1 <= std::min(n, N); ++n1) idx.push_back(n1 * (N + 1) + (n - n1));
  return idx;
}

// Block of a^dag Lambda a on total n, basis ordered by n1.
Eigen::MatrixXcd one_body_block(const Mat2c& lam, int n, int N) {
  const int lo = std::max(0, n - N);
  const int hi = std::min(n, N);
  const int b = hi - lo + 1;
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(b, b);
  for (int n1 = lo; n1 <= hi; ++n1) {
    const int n2 = n - n1;
    const int j = n1 - lo;
    g(j, j) = lam(0, 0) * double(n1) + lam(1, 1) * double(n2);
    // a1^dag a2: (n1, n2) -> (n1 + 1, n2 - 1)
    if (n1 + 1 <= hi) g(j + 1, j) += lam(0, 1) * std::sqrt(double(n1 + 1) * n2);
    // a2^dag a1: (n1, n2) -> (n1 - 1, n2 + 1)
    if (n1 - 1 >= lo) g(j - 1, j) += lam(1, 0) * std::sqrt(double(n1) * (n2 + 1));
  }
  return g;
}

}  // namespace

OperatorMatrix one_body_generator(const Mat2c& lambda, int cutoff) {
  const int d = FockVector::dimension(cutoff);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
  for (int n = 0; n <= 2 * cutoff; ++n) {
    const auto idx = block_indices(n, cutoff);
    const Eigen::MatrixXcd g = one_body_block(lambda, n, cutoff);
    for (size_t i = 0; i < idx.size(); ++i)
      for (size_t j = 0; j < idx.size(); ++j) m(idx[i], idx[j]) = g(i, j);
  }
  return OperatorMatrix(cutoff, std::move(m));
}

OperatorMatrix expm_number_conserving(const OperatorMatrix& generator) {
  const int N = generator.cutoff();
  const Eigen::MatrixXcd& g = generator.matrix();
  const int d = FockVector::dimension(N);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d, d);
  std::vector<int> total(d);
  for (int n1 = 0; n1 <= N; ++n1)
    for (int n2 = 0; n2 <= N; ++n2) total[n1 * (N + 1) + n2] = n1 + n2;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      if (total[i] != total[j] && g(i, j) != Complex(0.0))
        throw InvalidArgument("generator does not conserve total photon number");
  for (int n = 0; n <= 2 * N; ++n) {
    const auto idx = block_indices(n, N);
    const int b = int(idx.size());
    Eigen::MatrixXcd blk(b, b);
    for (int i = 0; i < b; ++i)
      for (int j = 0; j < b; ++j) blk(i, j) = g(idx[i], idx[j]);
    const Eigen::MatrixXcd e = expm(blk);
    for (int i = 0; i < b; ++i)
      for (int j = 0; j < b; ++j) out(idx[i], idx[j]) = e(i, j);
  }
  return OperatorMatrix(N, std::move(out));
}

OneBodyPropagator::OneBodyPropagator(const Mat2c& lambda, int cutoff) : cutoff_(cutoff) {
  if (cutoff < 1) throw InvalidArgument("cutoff must be at least 1");
  for (int n = 0; n <= 2 * cutoff; ++n) blocks_.push_back(expm(one_body_block(lambda, n, cutoff)));
}

FockVector OneBodyPropagator::apply(const FockVector& v) const {
  require_same(v.cutoff(), cutoff_);
  const int N = cutoff_;
  FockVector out(N);
  for (int n = 0; n <= 2 * N; ++n) {
    const auto idx = block_indices(n, N);
    const int b = int(idx.size());
    Eigen::VectorXcd x(b);
    for (int i = 0; i < b; ++i) x(i) = v.amplitudes()(idx[i]);
    if (x.isZero(0.0)) continue;
    const Eigen::VectorXcd y = blocks_[n] * x;
    for (int i = 0; i < b; ++i) out.amplitudes()(idx[i]) = y(i);
  }
  return out;
}

FockVector apply_one_body_exp(const Mat2c& lambda, const FockVector& v) {
  return OneBodyPropagator(lambda, v.cutoff()).apply(v);
}

namespace {

// 1/2 y^T Q y on v, y = a^dag or a.
FockVector apply_quadratic(const Mat2c& q, Ladder kind, const FockVector& v) {
  const int N = v.cutoff();
  FockVector out(N);
  const Complex h11 = 0.5 * q(0, 0), h22 = 0.5 * q(1, 1), h12 = 0.5 * (q(0, 1) + q(1, 0));
  for (int n1 = 0; n1 <= N; ++n1) {
    for (int n2 = 0; n2 <= N; ++n2) {
      const Complex x = v(n1, n2);
      if (x == Complex(0.0)) continue;
      if (kind == Ladder::Create) {
        if (n1 + 2 <= N) out(n1 + 2, n2) += h11 * std::sqrt(double(n1 + 1) * (n1 + 2)) * x;
        if (n2 + 2 <= N) out(n1, n2 + 2) += h22 * std::sqrt(double(n2 + 1) * (n2 + 2)) * x;
        if (n1 + 1 <= N && n2 + 1 <= N)
          out(n1 + 1, n2 + 1) += h12 * std::sqrt(double(n1 + 1) * (n2 + 1)) * x;
      } else {
        if (n1 >= 2) out(n1 - 2, n2) += h11 * std::sqrt(double(n1) * (n1 - 1)) * x;
        if (n2 >= 2) out(n1, n2 - 2) += h22 * std::sqrt(double(n2) * (n2 - 1)) * x;
        if (n1 >= 1 && n2 >= 1) out(n1 - 1, n2 - 1) += h12 * std::sqrt(double(n1) * n2) * x;
      }
    }
  }
  return out;
}

}  // namespace

FockVector apply_quadratic_exp(const Mat2c& q, Ladder kind, const FockVector& v) {
  const int max_terms = v.cutoff() + 2;
  FockVector sum = v;
  FockVector term = v;
  for (int k = 1; k <= max_terms; ++k) {
    term = apply_quadratic(q, kind, term);
    term.amplitudes() /= double(k);
    sum.amplitudes() += term.amplitudes();
    if (term.norm() <= 1e-16 * sum.norm()) return sum;
  }
  throw NonConvergentSeries("quadratic exponential did not converge within cutoff-bounded order");
}

QuadratureMoments quadrature_moments(const FockVector& state) {
  const double n = state.amplitudes().squaredNorm();
  if (n == 0.0) throw InvalidArgument("zero-norm state");
  const Mode modes[4] = {Mode::One, Mode::One, Mode::Two, Mode::Two};
  const Quadrature kinds[4] = {Quadrature::X, Quadrature::P, Quadrature::X, Quadrature::P};
  std::vector<FockVector> q;
  for (int i = 0; i < 4; ++i) q.push_back(apply_quadrature(modes[i], kinds[i], state));
  QuadratureMoments m;
  for (int i = 0; i < 4; ++i) m.mean(i) = inner(state, q[i]).real() / n;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m.cov(i, j) = inner(q[i], q[j]).real() / n - m.mean(i) * m.mean(j);
  m.cov = 0.5 * (m.cov + m.cov.transpose()).eval();
  return m;
}

std::string fock_to_json(const FockVector& v) {
  nlohmann::ordered_json j;
  j["cutoff"] = v.cutoff();
  nlohmann::ordered_json amps = nlohmann::ordered_json::array();
  for (Eigen::Index i = 0; i < v.amplitudes().size(); ++i)
    amps.push_back({v.amplitudes()(i).real(), v.amplitudes()(i).imag()});
  j["amplitudes"] = std::move(amps);
  return j.dump();
}

FockVector fock_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
    const int cutoff = j.at("cutoff").get<int>();
    const auto& amps = j.at("amplitudes");
    Eigen::VectorXcd a(amps.size());
    for (size_t i = 0; i < amps.size(); ++i)
      a(Eigen::Index(i)) = Complex(amps[i].at(0).get<double>(), amps[i].at(1).get<double>());
    return FockVector(cutoff, std::move(a));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed Fock vector JSON: ") + e.what());
  }
}

}  // namespace cvbs
