#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cvbs/entangled_states.hpp"
#include "cvbs/errors.hpp"
#include "cvbs/fock.hpp"
#include "test_util.hpp"

using namespace cvbs;
using cvbs::testing::max_diff;
using cvbs::testing::random_ket;
using cvbs::testing::series_expand;

namespace {

// Subspace n1, n2 <= N - 1 where [a, a^dag] is exact.
double commutator_interior_deviation(const OperatorMatrix& c, const Eigen::MatrixXcd& expected) {
  const int N = c.cutoff();
  double m = 0.0;
  for (int i1 = 0; i1 < N; ++i1)
    for (int i2 = 0; i2 < N; ++i2)
      for (int j1 = 0; j1 < N; ++j1)
        for (int j2 = 0; j2 < N; ++j2) {
          const int i = i1 * (N + 1) + i2, j = j1 * (N + 1) + j2;
          m = std::max(m, std::abs(c.matrix()(i, j) - expected(i, j)));
        }
  return m;
}

}  // namespace

TEST(Ladder, MatrixElements) {
  const int N = 6;
  const OperatorMatrix a1 = ladder_matrix(Mode::One, Ladder::Annihilate, N);
  const FockVector probe(N);
  EXPECT_EQ(a1.matrix()(probe.index(0, 0), probe.index(1, 0)), Complex(1.0));
  EXPECT_NEAR(a1.matrix()(probe.index(2, 3), probe.index(3, 3)).real(), std::sqrt(3.0), 1e-15);
  const OperatorMatrix c1 = ladder_matrix(Mode::One, Ladder::Create, N);
  EXPECT_EQ((c1.matrix() - a1.matrix().adjoint()).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Ladder, OneNonzeroPerRowAtMost) {
  const int N = 5;
  for (Mode m : {Mode::One, Mode::Two})
    for (Ladder k : {Ladder::Annihilate, Ladder::Create}) {
      const Eigen::MatrixXcd M = ladder_matrix(m, k, N).matrix();
      for (Eigen::Index r = 0; r < M.rows(); ++r) {
        int nz = 0;
        for (Eigen::Index c = 0; c < M.cols(); ++c) nz += M(r, c) != Complex(0.0);
        EXPECT_LE(nz, 1);
      }
    }
}

TEST(Ladder, CommutatorsAwayFromEdge) {
  const int N = 7;
  for (Mode m : {Mode::One, Mode::Two}) {
    const OperatorMatrix a = ladder_matrix(m, Ladder::Annihilate, N);
    const OperatorMatrix ad = ladder_matrix(m, Ladder::Create, N);
    const OperatorMatrix comm = a * ad - ad * a;
    const int d = FockVector::dimension(N);
    EXPECT_LT(commutator_interior_deviation(comm, Eigen::MatrixXcd::Identity(d, d)), 1e-14);
    EXPECT_GT((comm - OperatorMatrix::identity(N)).matrix().cwiseAbs().maxCoeff(), 1.0);
  }
  const OperatorMatrix a1 = ladder_matrix(Mode::One, Ladder::Annihilate, N);
  const OperatorMatrix a2 = ladder_matrix(Mode::Two, Ladder::Annihilate, N);
  EXPECT_EQ(((a1 * a2) - (a2 * a1)).matrix().cwiseAbs().maxCoeff(), 0.0);
}

TEST(Ladder, MatrixFreeMatchesMatrices) {
  std::mt19937_64 rng(1);
  const int N = 9;
  const FockVector v = fock_expand(random_ket(rng, 0.6), N);
  for (Mode m : {Mode::One, Mode::Two}) {
    for (Ladder k : {Ladder::Annihilate, Ladder::Create})
      EXPECT_LT(max_diff(apply_ladder(m, k, v), ladder_matrix(m, k, N).apply(v)), 1e-15);
    for (Quadrature q : {Quadrature::X, Quadrature::P})
      EXPECT_LT(max_diff(apply_quadrature(m, q, v), quadrature_matrix(m, q, N).apply(v)), 1e-15);
  }
}

TEST(Quadrature, HermitianAndCanonical) {
  const int N = 8;
  const OperatorMatrix x = quadrature_matrix(Mode::One, Quadrature::X, N);
  const OperatorMatrix p = quadrature_matrix(Mode::One, Quadrature::P, N);
  EXPECT_LT((x.matrix() - x.matrix().adjoint()).cwiseAbs().maxCoeff(), 1e-16);
  EXPECT_LT((p.matrix() - p.matrix().adjoint()).cwiseAbs().maxCoeff(), 1e-16);
  const OperatorMatrix comm = x * p - p * x;
  const int d = FockVector::dimension(N);
  EXPECT_LT(commutator_interior_deviation(comm, Complex(0, 1) * Eigen::MatrixXcd::Identity(d, d)),
            1e-14);
}

TEST(Quadrature, VacuumSecondMoment) {
  const int N = 4;
  FockVector vac(N);
  vac(0, 0) = 1.0;
  const OperatorMatrix x = quadrature_matrix(Mode::Two, Quadrature::X, N);
  EXPECT_NEAR(expectation(x * x, vac).real(), 0.5, 1e-15);
}

TEST(Expand, Vacuum) {
  const FockVector v = fock_expand(make_vacuum(), 5);
  EXPECT_EQ(v(0, 0), Complex(1.0));
  EXPECT_NEAR(v.norm(), 1.0, 0.0);
}

TEST(Expand, TwoModeSqueezedVacuumDiagonal) {
  const double lam = 0.6;
  Mat2c F = Mat2c::Zero();
  F(0, 1) = F(1, 0) = std::tanh(lam);
  const GaussianKet t(1.0 / std::cosh(lam), Vec2c::Zero(), F);
  const int N = 20;
  const FockVector v = fock_expand(t, N);
  for (int n1 = 0; n1 <= N; ++n1)
    for (int n2 = 0; n2 <= N; ++n2) {
      const Complex want = n1 == n2 ? std::pow(std::tanh(lam), n1) / std::cosh(lam) : 0.0;
      EXPECT_NEAR(std::abs(v(n1, n2) - want), 0.0, 1e-15);
    }
  EXPECT_LT(max_diff(v, series_expand(t, N)), 1e-14);
}

TEST(Expand, EtaThetaMatchesSeriesOracle) {
  const GaussianKet k = make_eta_theta_state(ComplexLabel(0.0), kPi / 3);
  EXPECT_LT(max_diff(fock_expand(k, 30), series_expand(k, 30)), 1e-10);
  const GaussianKet k2 = make_eta_theta_state(ComplexLabel(Complex(0.3, -0.4)), kPi / 5);
  EXPECT_LT(max_diff(fock_expand(k2, 30), series_expand(k2, 30)), 1e-10);
}

TEST(Expand, NormConvergesWithCutoff) {
  // Two-mode squeezing at singular value 0.8 leaves tail mass 0.8^82 beyond cutoff 40.
  Mat2c F = Mat2c::Zero();
  F(0, 1) = F(1, 0) = 0.8;
  const GaussianKet t(0.6, Vec2c::Zero(), F);
  EXPECT_LT(std::abs(fock_expand(t, 60).norm() - fock_expand(t, 40).norm()), 1e-8);
  // Single-mode squeezing populates every second level, so the same bound needs sigma <= 0.6.
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const GaussianKet k = random_ket(rng, 0.6);
    EXPECT_LT(std::abs(fock_expand(k, 60).norm() - fock_expand(k, 40).norm()), 1e-8);
  }
}

TEST(Expand, SingleModeSqueezingConvergesSlowerAtSigmaPointEight) {
  Mat2c F = Mat2c::Zero();
  F(0, 0) = 0.8;
  const GaussianKet s(1.0, Vec2c::Zero(), F);
  const double gap = std::abs(fock_expand(s, 60).norm() - fock_expand(s, 40).norm());
  EXPECT_GT(gap, 1e-6);
  EXPECT_LT(std::abs(fock_expand(s, 120).norm() - fock_expand(s, 100).norm()), 1e-8);
}

TEST(Expectation, NumberOperator) {
  FockVector vac(6);
  vac(0, 0) = 1.0;
  const OperatorMatrix a1 = ladder_matrix(Mode::One, Ladder::Annihilate, 6);
  EXPECT_EQ(expectation(a1.adjoint() * a1, vac), Complex(0.0));
  for (double lam : {0.2, 0.5}) {
    Mat2c F = Mat2c::Zero();
    F(0, 1) = F(1, 0) = std::tanh(lam);
    const int N = 40;
    const FockVector v = fock_expand(GaussianKet(1.0 / std::cosh(lam), Vec2c::Zero(), F), N);
    const OperatorMatrix a = ladder_matrix(Mode::One, Ladder::Annihilate, N);
    const Complex n1 = expectation(a.adjoint() * a, v);
    EXPECT_NEAR(n1.real(), std::pow(std::sinh(lam), 2), 1e-8);
    EXPECT_EQ(n1.imag(), 0.0);
  }
}

TEST(Expectation, ZeroNormThrows) {
  EXPECT_THROW(expectation(OperatorMatrix::identity(3), FockVector(3)), InvalidArgument);
}

TEST(EigenResidual, VacuumAnnihilated) {
  FockVector vac(10);
  vac(0, 0) = 1.0;
  EXPECT_EQ(eigen_residual(ladder_matrix(Mode::One, Ladder::Annihilate, 10), vac, 0.0, 2), 0.0);
}

TEST(EigenResidual, EtaThetaQuadratureRelations) {
  const int N = 48, guard = 8;
  const double theta = kPi / 3, t = std::tan(theta);
  const ComplexLabel eta = ComplexLabel::from_quadratures(1.0, 0.0);
  const FockVector psi = fock_expand(make_eta_theta_state(eta, theta), N);
  const OperatorMatrix x1 = quadrature_matrix(Mode::One, Quadrature::X, N);
  const OperatorMatrix x2 = quadrature_matrix(Mode::Two, Quadrature::X, N);
  const OperatorMatrix p1 = quadrature_matrix(Mode::One, Quadrature::P, N);
  const OperatorMatrix p2 = quadrature_matrix(Mode::Two, Quadrature::P, N);
  EXPECT_LT(eigen_residual(x2 - Complex(t) * x1, psi, -eta.eta1() * t, guard), 1e-8);
  EXPECT_LT(eigen_residual(p1 + Complex(t) * p2, psi, eta.eta2(), guard), 1e-8);
}

TEST(EigenResidual, GuardValidation) {
  FockVector v(4);
  v(0, 0) = 1.0;
  EXPECT_THROW(eigen_residual(OperatorMatrix::identity(4), v, 1.0, 4), InvalidArgument);
  FockVector edge(4);
  edge(4, 4) = 1.0;
  EXPECT_THROW(eigen_residual(OperatorMatrix::identity(4), edge, 1.0, 1), InvalidArgument);
}

TEST(Expm, BlockwiseMatchesDense) {
  const int N = 8;
  Mat2c lam;
  lam << Complex(0.1, 0.2), 0.7, -0.4, Complex(-0.3, 0.0);
  const OperatorMatrix g = one_body_generator(lam, N);
  const OperatorMatrix dense = expm(g);
  const OperatorMatrix block = expm_number_conserving(g);
  EXPECT_LT((dense.matrix() - block.matrix()).cwiseAbs().maxCoeff(), 1e-12);
  std::mt19937_64 rng(3);
  const FockVector v = fock_expand(random_ket(rng, 0.7), N);
  EXPECT_LT(max_diff(apply_one_body_exp(lam, v), dense.apply(v)), 1e-12);
}

TEST(Expm, RejectsNumberChangingGenerator) {
  EXPECT_THROW(expm_number_conserving(ladder_matrix(Mode::One, Ladder::Create, 3)), InvalidArgument);
}

TEST(Expm, ScalarAndNilpotent) {
  Eigen::MatrixXcd a(2, 2);
  a << 0.0, 3.0, 0.0, 0.0;
  const Eigen::MatrixXcd e = expm(a);
  EXPECT_NEAR(std::abs(e(0, 1) - 3.0), 0.0, 1e-15);
  Eigen::MatrixXcd s(1, 1);
  s << Complex(2.0, 1.0);
  EXPECT_LT(std::abs(expm(s)(0, 0) - std::exp(Complex(2.0, 1.0))), 1e-13);
}

TEST(BeamSplitterMatrix, CommutesWithTotalNumber) {
  const int N = 12;
  Mat2c lam;
  lam << 0.0, -0.9, 0.9, 0.0;
  const OperatorMatrix B = expm(one_body_generator(lam, N));
  Mat2c id = Mat2c::Identity();
  const OperatorMatrix n = one_body_generator(id, N);
  EXPECT_LT((B * n - n * B).matrix().cwiseAbs().maxCoeff(), 1e-10);
}

TEST(QuadraticSeries, NilpotentTermination) {
  const int N = 10;
  FockVector v(N);
  v(0, 0) = 1.0;
  Mat2c q;
  q << 0.5, 0.9, 0.9, -0.5;
  // Raising by 2 per term empties the truncated space well before cutoff + 2 terms.
  EXPECT_NO_THROW(apply_quadratic_exp(q, Ladder::Create, v));
}

TEST(Moments, VacuumAndCoherent) {
  FockVector vac(6);
  vac(0, 0) = 1.0;
  const QuadratureMoments m = quadrature_moments(vac);
  EXPECT_LT(m.mean.cwiseAbs().maxCoeff(), 1e-16);
  EXPECT_LT((m.cov - 0.5 * Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff(), 1e-15);
  const Complex eta(0.3, -0.2);
  const QuadratureMoments c =
      quadrature_moments(fock_expand(apply_displacement(make_vacuum(), Mode::Two, ComplexLabel(eta)), 30));
  EXPECT_NEAR(c.mean(2), std::sqrt(2.0) * eta.real(), 1e-12);
  EXPECT_NEAR(c.mean(3), std::sqrt(2.0) * eta.imag(), 1e-12);
  EXPECT_LT((c.cov - 0.5 * Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Serialization, RoundTrip) {
  std::mt19937_64 rng(4);
  const FockVector v = fock_expand(random_ket(rng, 0.5), 5);
  const std::string s = fock_to_json(v);
  EXPECT_EQ(s.rfind("{\"cutoff\":5,\"amplitudes\":[[", 0), 0u);
  const FockVector back = fock_from_json(s);
  EXPECT_EQ(back.cutoff(), 5);
  EXPECT_EQ(max_diff(back, v), 0.0);
  EXPECT_THROW(fock_from_json("{\"cutoff\":2}"), InvalidArgument);
  EXPECT_THROW(fock_from_json("{\"cutoff\":1,\"amplitudes\":[[0,0]]}"), InvalidArgument);
}

TEST(FockVector, Invariants) {
  EXPECT_THROW(FockVector(0), InvalidArgument);
  EXPECT_THROW(FockVector(2, Eigen::VectorXcd::Zero(4)), InvalidArgument);
  EXPECT_THROW(OperatorMatrix(2, Eigen::MatrixXcd::Zero(4, 4)), InvalidArgument);
  EXPECT_THROW(OperatorMatrix::identity(2) * OperatorMatrix::identity(3), InvalidArgument);
}
