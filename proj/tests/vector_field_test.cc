#include "bracketflow/vector_field.h"

#include <random>

#include <gtest/gtest.h>

#include "bracketflow/systems.h"

namespace bracketflow {
namespace {

// Polynomial field on R^n with small integer coefficients and total
// degree <= max_degree.
PolyVectorField RandomField(std::mt19937_64& rng, int n, int max_degree, bool integer) {
  std::vector<Polynomial> coords;
  std::uniform_int_distribution<int> terms(1, 4), deg(0, max_degree), var(0, n - 1),
      icoef(-3, 3);
  std::uniform_real_distribution<double> rcoef(-2.0, 2.0);
  for (int i = 0; i < n; ++i) {
    Polynomial p(n);
    const int count = terms(rng);
    for (int t = 0; t < count; ++t) {
      Exponents e(static_cast<std::size_t>(n), 0);
      const int d = deg(rng);
      for (int k = 0; k < d; ++k) ++e[static_cast<std::size_t>(var(rng))];
      p.AddTerm(e, integer ? icoef(rng) : rcoef(rng));
    }
    coords.push_back(p);
  }
  return PolyVectorField(coords);
}

TEST(PolynomialTest, ArithmeticAndDerivative) {
  const Polynomial x = Polynomial::Variable(2, 0);
  const Polynomial y = Polynomial::Variable(2, 1);
  const Polynomial p = x * x * y * 3.0 + y - Polynomial::Constant(2, 2.0);
  EXPECT_EQ(p.TotalDegree(), 3);
  EXPECT_DOUBLE_EQ(p.Evaluate(Eigen::Vector2d(2.0, -1.0)), -15.0);
  EXPECT_EQ(p.Derivative(0), x * y * 6.0);
  EXPECT_TRUE((p - p).IsZero());
  EXPECT_TRUE(Polynomial::Constant(2, 5.0).Derivative(1).IsZero());
  EXPECT_THROW(x + Polynomial::Variable(3, 0), std::invalid_argument);
}

TEST(VectorFieldTest, BrockettBracket) {
  const auto f = BrockettFields();
  const PolyVectorField b = LieBracket(f[0], f[1]);
  const Eigen::Vector3d expected(0.0, 0.0, 2.0);
  for (const Eigen::Vector3d& x : {Eigen::Vector3d(0, 0, 0), Eigen::Vector3d(1, -2, 3)}) {
    EXPECT_EQ(b.Evaluate(x), expected);
  }
  EXPECT_TRUE(LieBracket(b, f[0]).IsZero());
  EXPECT_TRUE(LieBracket(b, f[1]).IsZero());
}

TEST(VectorFieldTest, LabelEvaluationAppliesSign) {
  const auto f = BrockettFields();
  const ControlLabel minus{ParseBracket("[X1,X2]"), {1, 2}, Sign::kMinus};
  EXPECT_EQ(EvaluateBracket(minus, f, Eigen::Vector3d(0.3, 0.1, 0.0)),
            Eigen::Vector3d(0.0, 0.0, -2.0));
  const ControlLabel swapped{ParseBracket("[X1,X2]"), {2, 1}, Sign::kPlus};
  EXPECT_EQ(EvaluateBracket(swapped, f, Eigen::Vector3d::Zero()),
            Eigen::Vector3d(0.0, 0.0, -2.0));
}

TEST(VectorFieldTest, AntisymmetryAndJacobiAreExact) {
  std::mt19937_64 rng(17);
  for (int n = 0; n < 50; ++n) {
    const int dim = 1 + static_cast<int>(rng() % 4);
    const PolyVectorField a = RandomField(rng, dim, 2, true);
    const PolyVectorField b = RandomField(rng, dim, 2, true);
    const PolyVectorField c = RandomField(rng, dim, 2, true);
    EXPECT_TRUE((LieBracket(a, b) + LieBracket(b, a)).IsZero());
    const PolyVectorField jacobi = LieBracket(a, LieBracket(b, c)) +
                                   LieBracket(b, LieBracket(c, a)) +
                                   LieBracket(c, LieBracket(a, b));
    EXPECT_TRUE(jacobi.IsZero());
  }
}

TEST(VectorFieldTest, SymbolicBracketMatchesFiniteDifferences) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int n = 0; n < 100; ++n) {
    const int dim = 1 + static_cast<int>(rng() % 4);
    const PolyVectorField a = RandomField(rng, dim, 2, false);
    const PolyVectorField b = RandomField(rng, dim, 2, false);
    Eigen::VectorXd x(dim);
    for (int i = 0; i < dim; ++i) x[i] = u(rng);
    const Eigen::VectorXd exact = LieBracket(a, b).Evaluate(x);
    const Eigen::VectorXd fd = FiniteDifferenceBracket(a.AsFunction(), b.AsFunction(), x);
    EXPECT_LE((exact - fd).norm(), 1e-5 * std::max(1.0, exact.norm()));
  }
}

TEST(VectorFieldTest, NestedBracketFieldOfLabel) {
  const auto f = BrockettFields();
  const ControlLabel l{ParseBracket("[[X1,X2],X3]"), {1, 2, 1}, Sign::kPlus};
  EXPECT_TRUE(BracketField(l, f).IsZero());
  const ControlLabel letter{FormalBracket::Letter(1), {2}, Sign::kPlus};
  EXPECT_EQ(BracketField(letter, f), f[1]);
}

TEST(VectorFieldTest, EvaluateIntoMatchesEvaluate) {
  std::mt19937_64 rng(29);
  const PolyVectorField a = RandomField(rng, 3, 3, false);
  const Eigen::Vector3d x(0.2, -0.7, 1.3);
  Eigen::Vector3d out;
  a.EvaluateInto(x.data(), out.data());
  EXPECT_LE((out - a.Evaluate(x)).norm(), 1e-14);
}

TEST(VectorFieldTest, JsonRoundTrip) {
  std::mt19937_64 rng(31);
  const PolyVectorField a = RandomField(rng, 3, 2, false);
  EXPECT_EQ(FieldFromJson(FieldToJson(a)), a);
  EXPECT_THROW(FieldFromJson(nlohmann::json::object()), ValidationError);
  EXPECT_THROW(FieldFromJson({{"dim", 2}, {"coords", nlohmann::json::array({nlohmann::json::array()})}}),
               ValidationError);
  const nlohmann::json bad_exp = {
      {"dim", 1}, {"coords", {{{{"c", 1.0}, {"e", {-1}}}}}}};
  EXPECT_THROW(FieldFromJson(bad_exp), ValidationError);
}

TEST(VectorFieldTest, LinearField) {
  Eigen::Matrix2d a;
  a << 0, 1, -1, 0;
  const PolyVectorField f = PolyVectorField::Linear(a);
  EXPECT_EQ(f.Evaluate(Eigen::Vector2d(2, 3)), Eigen::Vector2d(3, -2));
  // [Ax, Bx] = (BA − AB)x for linear fields.
  Eigen::Matrix2d b;
  b << 1, 0, 0, 2;
  const Eigen::Vector2d x(0.5, -1.5);
  EXPECT_LE((LieBracket(f, PolyVectorField::Linear(b)).Evaluate(x) - (b * a - a * b) * x).norm(),
            1e-14);
}

}  // namespace
}  // namespace bracketflow
