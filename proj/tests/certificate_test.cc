#include "bracketflow/certificate.h"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "bracketflow/systems.h"

namespace bracketflow {
namespace {

TEST(BuildPhiTest, DifferenceTelescopes) {
  // Σ (u_j − u_{j+1}) over the tail plus Ψ(u, u_{i+1}) collapses to u.
  const GeometricSequence seq(1.0, 0.5);
  for (double u = 1e-6; u < 1e4; u *= 1.37) {
    EXPECT_NEAR(BuildPhi(PsiFunction::Difference(), seq, u), u, 1e-12 * std::max(1.0, u));
  }
  for (int i = -5; i < 20; ++i) {
    EXPECT_NEAR(BuildPhi(PsiFunction::Difference(), seq, seq(i)), seq(i), 1e-12 * seq(i));
  }
  EXPECT_EQ(BuildPhi(PsiFunction::Difference(), seq, 0.0), 0.0);
}

TEST(BuildPhiTest, PowerDifferenceTelescopes) {
  const GeometricSequence seq(2.0, 0.3);
  const PsiFunction psi = PsiFunction::PowerDifference(3.0, 2.0);
  for (double u = 1e-3; u < 1e2; u *= 1.9) {
    EXPECT_NEAR(BuildPhi(psi, seq, u), 3.0 * u * u, 1e-12 * std::max(1.0, 3.0 * u * u));
  }
}

TEST(BuildPhiTest, RegularizedIsIncreasing) {
  const GeometricSequence seq(1.0, 0.5);
  for (const PsiFunction& psi : {PsiFunction::Difference(), PsiFunction::PowerDifference(1.0, 0.5)}) {
    double prev = 0.0;
    for (double u = 1e-5; u < 1e3; u *= 1.01) {
      const double v = RegularizedPhi(psi, seq, u);
      ASSERT_GT(v, prev) << u;
      ASSERT_GE(v, BuildPhi(psi, seq, u));
      prev = v;
    }
  }
}

TEST(CertificateTest, BenchmarksValidate) {
  EXPECT_NO_THROW(ScalarLinearSystem().cert.Validate());
  EXPECT_NO_THROW(BrockettSystem().cert.Validate());
}

TEST(CertificateTest, ValidateRejects) {
  const Certificate good = ScalarLinearSystem().cert;
  Certificate c = good;
  c.multirank.clear();
  EXPECT_THROW(c.Validate(), ValidationError);
  c = good;
  c.lambda = ScalarFunction::Affine(1.0, 1.0);
  EXPECT_THROW(c.Validate(), ValidationError);
  c = good;
  c.phi = ScalarFunction::Affine(0.0, 1.0);
  EXPECT_THROW(c.Validate(), ValidationError);
  c = good;
  c.T = PairFunction::Affine(-1.0, 0.0, 5000.0);
  EXPECT_THROW(c.Validate(), ValidationError);
  c = good;
  c.T = PairFunction::Affine(1.0, -1.0, 1.0);
  EXPECT_THROW(c.Validate(), ValidationError);
  c = BrockettSystem().cert;
  c.lambda = ScalarFunction::Constant(0.0);
  EXPECT_THROW(c.Validate(), ValidationError);
}

TEST(CertificateTest, JsonRoundTrip) {
  const Certificate c = BrockettSystem().cert;
  const Certificate back = Certificate::FromJson(c.ToJson());
  EXPECT_EQ(back.ToJson(), c.ToJson());
  EXPECT_EQ(back.k(), 2);
  nlohmann::json j = c.ToJson();
  j.erase("Lambda");
  EXPECT_DOUBLE_EQ(Certificate::FromJson(j).lambda(2.0), 3.0);
  j = c.ToJson();
  j.erase("phi");
  EXPECT_THROW(Certificate::FromJson(j), ValidationError);
  EXPECT_THROW(Certificate::FromJson(nlohmann::json::array()), ValidationError);
}

TEST(CertificateTest, DeltaEvaluatesTheMultirank) {
  const Certificate c = BrockettSystem().cert;
  const Multirank d = c.Delta(1.0, 0.1);
  ASSERT_EQ(d.k(), 2);
  for (int l = 1; l <= 2; ++l) EXPECT_EQ(d(l), c.multirank[l - 1](1.0, 0.1));
}

TEST(EnvelopeTest, AnalyticForNormAtOrigin) {
  const BenchmarkSystem sys = ScalarLinearSystem();
  const DLowerEnvelope env = sys.cert.MakeEnvelope(sys.problem.target);
  EXPECT_TRUE(env.analytic());
  EXPECT_EQ(env(0.5), 0.5);
  EXPECT_EQ(env.Inverse(0.5), 0.5);
}

// d_{U−}(U(x)) <= d(x) inside the grid box, off the nodes, and beyond it.
TEST(EnvelopeTest, GridEnvelopeIsALowerBound) {
  const BenchmarkSystem sys = BrockettSystem();
  Certificate cert = sys.cert;
  cert.envelope = EnvelopeGrid{2.0, 41};
  const DLowerEnvelope env = cert.MakeEnvelope(sys.problem.target);
  EXPECT_FALSE(env.analytic());
  EXPECT_DOUBLE_EQ(env.resolution(), 0.1);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-2.0, 2.0), far(-5.0, 5.0);
  for (int n = 0; n < 20000; ++n) {
    const Eigen::Vector3d y(far(rng), far(rng), far(rng));
    ASSERT_LE(env(cert.U(y)), sys.problem.target.Distance(y)) << y.transpose();
    const Eigen::Vector3d x(u(rng), u(rng), u(rng));
    ASSERT_LE(env(cert.U(x)), sys.problem.target.Distance(x)) << x.transpose();
  }
  double prev = 0.0;
  for (double v = 0.01; v < 2.0; v += 0.01) {
    ASSERT_GE(env(v), prev);
    prev = env(v);
  }
  // Inverse is the sup of levels whose envelope stays below R.
  for (double R : {0.2, 0.5, 1.0}) {
    const double v = env.Inverse(R);
    EXPECT_LE(env(v * (1.0 - 1e-9)), R);
    EXPECT_GT(env(v * (1.0 + 1e-6)), R);
  }
  // Far levels are bounded by the box boundary, and so is the inverse.
  EXPECT_LE(env(1e3), 2.0);
  EXPECT_TRUE(std::isinf(env.Inverse(2.0)));
  EXPECT_THROW(DLowerEnvelope::FromGrid(cert.U, sys.problem.target, EnvelopeGrid{1.0, 1}),
               ValidationError);
}

TEST(CostBoundTest, ScalarWIsTheNorm) {
  const Certificate c = ScalarLinearSystem().cert;
  for (double x = 0.01; x < 3.0; x += 0.07) {
    EXPECT_NEAR(CostBoundW(c, Eigen::VectorXd::Constant(1, x)), x, 1e-11);
    EXPECT_NEAR(CostBoundW(c, Eigen::VectorXd::Constant(1, -x)), x, 1e-11);
  }
}

TEST(LyapunovTest, BrockettValueAndJson) {
  const LyapunovFunction U = LyapunovFunction::Brockett(4.0);
  EXPECT_DOUBLE_EQ(U(Eigen::Vector3d(0, 0, 1)), std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(U(Eigen::Vector3d(1, 0, 0)), 1.0);
  EXPECT_THROW(U(Eigen::Vector2d(1, 0)), std::invalid_argument);
  EXPECT_EQ(LyapunovFunction::FromJson(U.ToJson()).param(), 4.0);
  const LyapunovFunction custom =
      LyapunovFunction::Custom("abs", [](const Eigen::Ref<const Eigen::VectorXd>& x) {
        return x.cwiseAbs().sum();
      });
  EXPECT_THROW(custom.ToJson(), std::logic_error);
  EXPECT_THROW(LyapunovFunction::FromJson({{"kind", "energy"}}), ValidationError);
}

}  // namespace
}  // namespace bracketflow
