#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cvbs/errors.hpp"
#include "cvbs/fock.hpp"
#include "cvbs/phase_space.hpp"
#include "cvbs/squeezer.hpp"
#include "test_util.hpp"

using namespace cvbs;

namespace {

const Eigen::Vector4d kXSum(1, 0, 1, 0);
const Eigen::Vector4d kPSum(0, 1, 0, 1);

}  // namespace

TEST(PhaseSpace, VacuumPairVariance) {
  EXPECT_DOUBLE_EQ(quad_variance(vacuum_state(), kXSum), 1.0);
  EXPECT_DOUBLE_EQ(quad_variance(vacuum_state(), kPSum), 1.0);
}

TEST(PhaseSpace, BeamSplitterZeroIsIdentityAndSymplectic) {
  EXPECT_EQ((symplectic_of_beamsplitter(0.0).S - Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff(), 0.0);
  for (double t : {0.1, 0.7, 2.0}) EXPECT_LT(symplectic_deviation(symplectic_of_beamsplitter(t)), 1e-15);
  const GaussianState v = evolve(vacuum_state(), symplectic_of_beamsplitter(0.4));
  EXPECT_LT((v.cov - vacuum_state().cov).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(PhaseSpace, FiftyFiftyMixingOfOppositeSqueezersGivesTwoModeSqueezing) {
  const double r = 0.45;
  Eigen::Matrix4d cov = Eigen::Matrix4d::Zero();
  cov.diagonal() << std::exp(-2 * r) / 2, std::exp(2 * r) / 2, std::exp(2 * r) / 2, std::exp(-2 * r) / 2;
  const GaussianState out = evolve(make_state(Eigen::Vector4d::Zero(), cov), symplectic_of_beamsplitter(kPi / 4));
  EXPECT_NEAR(quad_variance(out, kXSum), std::exp(-2 * r), 1e-14);
  EXPECT_NEAR(quad_variance(out, kPSum), std::exp(2 * r), 1e-14);
  // Direct covariance of sech(r) exp(-tanh(r) a1^dag a2^dag)|00>.
  Mat2c F = Mat2c::Zero();
  F(0, 1) = F(1, 0) = -std::tanh(r);
  const QuadratureMoments m = quadrature_moments(fock_expand(GaussianKet(1.0 / std::cosh(r), Vec2c::Zero(), F), 50));
  EXPECT_LT((out.cov - m.cov).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(PhaseSpace, BeamSplitterMapMatchesFockMoments) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 4; ++trial) {
    const GaussianKet k = cvbs::testing::random_ket(rng, 0.4);
    const double theta = 0.3 + 0.25 * trial;
    const QuadratureMoments before = quadrature_moments(fock_expand(k, 40));
    const QuadratureMoments after = quadrature_moments(fock_expand(apply_beamsplitter(k, theta), 40));
    const GaussianState pred = evolve(GaussianState{before.mean, before.cov}, symplectic_of_beamsplitter(theta));
    EXPECT_LT((pred.mean - after.mean).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_LT((pred.cov - after.cov).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(PhaseSpace, UMapIdentityAtZeroAndSymplectic) {
  EXPECT_EQ((symplectic_of_U(0.0, 0.4).S - Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_LT(symplectic_deviation(symplectic_of_U(0.7, kPi / 5)), 1e-12);
  EXPECT_THROW(symplectic_of_U(0.3, 0.0), DegenerateAngle);
  EXPECT_THROW(symplectic_of_U(0.3, kPi / 2), DegenerateAngle);
}

TEST(PhaseSpace, UMapAtQuarterPiSqueezesPairSum) {
  const GaussianState s = evolve(vacuum_state(), symplectic_of_U(0.5, kPi / 4));
  EXPECT_NEAR(quad_variance(s, kXSum), std::exp(-1.0), 1e-15);
  EXPECT_NEAR(quad_variance(s, kPSum), std::exp(1.0), 1e-14);
}

TEST(PhaseSpace, UMapReferenceValues) {
  // mpmath, 30 digits.
  const GaussianState s = evolve(vacuum_state(), symplectic_of_U(0.3, kPi / 3));
  EXPECT_NEAR(quad_variance(s, kXSum), 0.512142723588703702, 1e-14);
  EXPECT_NEAR(quad_variance(s, kPSum), 1.98243119172401017, 1e-14);
  EXPECT_GE(quad_variance(s, kPSum), 1.82211880039050897);
  EXPECT_LT(s.mean.cwiseAbs().maxCoeff(), 1e-12);
}

TEST(PhaseSpace, UMapMatchesFockCovariance) {
  for (double theta : {kPi / 8, kPi / 3}) {
    const SqueezeParams p = SqueezeParams::make(0.35, theta);
    const GaussianState s = evolve(vacuum_state(), symplectic_of_U(p.lambda, theta));
    const QuadratureMoments m = quadrature_moments(fock_expand(squeezed_vacuum(p), 48));
    EXPECT_LT((s.cov - m.cov).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_LT(m.mean.cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(PhaseSpace, UncertaintyPreservedOnGrid) {
  for (double lam = 0.1; lam <= 1.0 + 1e-12; lam += 0.1)
    for (double theta : {kPi / 8, kPi / 6, kPi / 4, kPi / 3, 3 * kPi / 8}) {
      const SymplecticMap m = symplectic_of_U(lam, theta);
      EXPECT_LT(symplectic_deviation(m), 1e-12);
      EXPECT_GE(uncertainty_min_eigenvalue(evolve(vacuum_state(), m)), -1e-12);
    }
}

TEST(PhaseSpace, VarianceProductBound) {
  for (double lam = 0.1; lam <= 1.0 + 1e-12; lam += 0.1)
    for (double theta : {kPi / 8, kPi / 6, kPi / 4, kPi / 3, 3 * kPi / 8}) {
      const VarianceRow r = variance_row(lam, theta);
      const double prod = r.var_x_sum * r.var_p_sum;
      if (std::abs(theta - kPi / 4) < 1e-12) {
        EXPECT_NEAR(prod, 1.0, 1e-12);
      } else {
        EXPECT_GT(prod, 1.0 + 1e-6);
      }
      EXPECT_TRUE(r.pass);
    }
}

TEST(PhaseSpace, RandomSymplecticCompositionKeepsUncertainty) {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> lam(-1.0, 1.0), th(0.05, kPi / 2 - 0.05), ang(-3, 3);
  GaussianState s = vacuum_state();
  for (int i = 0; i < 40; ++i) {
    s = evolve(s, i % 2 ? symplectic_of_U(lam(rng), th(rng)) : symplectic_of_beamsplitter(ang(rng)));
    EXPECT_GE(uncertainty_min_eigenvalue(s) / s.cov.norm(), -1e-12);
  }
}

TEST(PhaseSpace, MakeStateValidation) {
  Eigen::Matrix4d bad = 0.1 * Eigen::Matrix4d::Identity();
  EXPECT_THROW(make_state(Eigen::Vector4d::Zero(), bad), InvalidArgument);
  Eigen::Matrix4d asym = 0.5 * Eigen::Matrix4d::Identity();
  asym(0, 1) = 0.1;
  EXPECT_THROW(make_state(Eigen::Vector4d::Zero(), asym), InvalidArgument);
}

TEST(PhaseSpace, CsvRows) {
  const std::string csv = variance_rows_csv({variance_row(0.5, kPi / 4)});
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "theta,lambda,var_X_sum,var_P_sum,bound_e2lambda,pass");
  EXPECT_NE(csv.find(",true\n"), std::string::npos);
}
