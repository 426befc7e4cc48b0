#include "bracketflow/flow.h"

#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "bracketflow/systems.h"

namespace bracketflow {
namespace {

const std::vector<double> kDurations = {1e-1, 5e-2, 2e-2, 1e-2, 5e-3, 2e-3, 1e-3};

// f1 = (1, x3, x3² − x2), f2 = (x3², 1, x1). The x3 dependence keeps the
// Lie algebra from being nilpotent, so residuals are not round-off.
std::vector<PolyVectorField> CurvedFields() {
  const Polynomial one = Polynomial::Constant(3, 1.0);
  const Polynomial x1 = Polynomial::Variable(3, 0);
  const Polynomial x2 = Polynomial::Variable(3, 1);
  const Polynomial x3 = Polynomial::Variable(3, 2);
  return {PolyVectorField({one, x3, x3 * x3 - x2}), PolyVectorField({x3 * x3, one, x1})};
}

std::vector<PolyVectorField> ConstantFields() {
  const Polynomial one = Polynomial::Constant(2, 1.0);
  const Polynomial zero(2);
  return {PolyVectorField({one, zero}), PolyVectorField({zero, one}),
          PolyVectorField({one, one * -2.0})};
}

TEST(FlowTest, ConstantFieldIsExact) {
  const auto f = ConstantFields();
  const ControlLabel l{FormalBracket::Letter(1), {3}, Sign::kMinus};
  const Trajectory tr = Integrate(f, BuildSchedule(l, 0.5), Eigen::Vector2d(1.0, 1.0));
  EXPECT_LE((tr.final_state() - Eigen::Vector2d(0.5, 2.0)).norm(), 1e-14);
  EXPECT_DOUBLE_EQ(tr.final_time(), 0.5);
  EXPECT_EQ(tr.status, FlowStatus::kAlive);
}

TEST(FlowTest, CommutingLoopsClose) {
  const auto f = ConstantFields();
  for (const char* text : {"[X1,X2]", "[[X1,X2],X3]", "[X1,[X2,X3]]"}) {
    for (double t : {0.01, 0.3, 1.0}) {
      for (Sign sign : {Sign::kPlus, Sign::kMinus}) {
        const ControlLabel l{ParseBracket(text), {1, 2, 3}, sign};
        const Eigen::Vector2d x(0.3, -0.4);
        const Trajectory tr = Integrate(f, BuildSchedule(l, t), x);
        EXPECT_LE((tr.final_state() - x).norm(), 1e-9) << text << " t=" << t;
      }
    }
  }
}

TEST(FlowTest, BrockettLoopMovesAlongBracket) {
  const auto f = BrockettFields();
  const ControlLabel l{ParseBracket("[X1,X2]"), {1, 2}, Sign::kMinus};
  const Trajectory tr = Integrate(f, BuildSchedule(l, 0.1), Eigen::Vector3d(0, 0, 1));
  // Exact for this nilpotent system: x3 moves by −2·(t/4)².
  EXPECT_NEAR(tr.final_state()[2], 1.0 - 2.0 * 0.025 * 0.025, 1e-13);
  EXPECT_NEAR(tr.final_state().head<2>().norm(), 0.0, 1e-13);
}

TEST(FlowTest, OrderOnCurvedSystem) {
  const auto f = CurvedFields();
  const Eigen::Vector3d x(0.3, -0.2, 0.1);
  const OrderFit deg2 = AsymptoticOrderCheck(ControlLabel{ParseBracket("[X1,X2]"), {1, 2}, Sign::kPlus},
                                             f, x, kDurations);
  EXPECT_FALSE(deg2.degenerate);
  EXPECT_GE(deg2.order, 2.7);
  const OrderFit deg3 = AsymptoticOrderCheck(
      ControlLabel{ParseBracket("[[X1,X2],X3]"), {1, 2, 1}, Sign::kMinus}, f, x, kDurations);
  EXPECT_FALSE(deg3.degenerate);
  EXPECT_GE(deg3.order, 3.6);
  const OrderFit deg1 = AsymptoticOrderCheck(ControlLabel{FormalBracket::Letter(1), {2}, Sign::kPlus},
                                             f, x, kDurations);
  EXPECT_GE(deg1.order, 1.8);
}

TEST(FlowTest, NilpotentResidualIsDegenerate) {
  const OrderFit fit = AsymptoticOrderCheck(
      ControlLabel{ParseBracket("[X1,X2]"), {1, 2}, Sign::kPlus}, BrockettFields(),
      Eigen::Vector3d::Zero(), kDurations);
  EXPECT_TRUE(fit.degenerate);
  EXPECT_TRUE(std::isinf(fit.order));
}

TEST(FlowTest, OrderCheckRejectsShortSweeps) {
  const auto f = BrockettFields();
  const ControlLabel l{ParseBracket("[X1,X2]"), {1, 2}, Sign::kPlus};
  EXPECT_THROW(AsymptoticOrderCheck(l, f, Eigen::Vector3d::Zero(), {0.1, 0.05, 0.02}),
               std::invalid_argument);
  EXPECT_THROW(AsymptoticOrderCheck(l, f, Eigen::Vector3d::Zero(), {0.1, 0.09, 0.08, 0.07}),
               std::invalid_argument);
}

TEST(FlowTest, StopsOnTargetByBisection) {
  const Polynomial one = Polynomial::Constant(1, 1.0);
  const std::vector<PolyVectorField> f = {PolyVectorField({one})};
  const TargetSet target = TargetSet::Point(Eigen::VectorXd::Zero(1), 1e-3);
  StopRules stops;
  stops.target = &target;
  const ControlLabel l{FormalBracket::Letter(1), {1}, Sign::kMinus};
  const Trajectory tr = Integrate(f, BuildSchedule(l, 2.0), Eigen::VectorXd::Ones(1), {}, stops);
  EXPECT_EQ(tr.status, FlowStatus::kReachedTarget);
  EXPECT_NEAR(tr.final_time(), 1.0 - 1e-3, 1e-9);
  EXPECT_NEAR(tr.final_state()[0], 1e-3, 1e-9);
}

TEST(FlowTest, LevelStopAndCost) {
  const Polynomial one = Polynomial::Constant(1, 1.0);
  const std::vector<PolyVectorField> f = {PolyVectorField({one})};
  StopRules stops;
  stops.level_fn = [](const Eigen::Ref<const Eigen::VectorXd>& y) { return std::abs(y[0]); };
  stops.level_value = 0.5;
  const Lagrangian l = Lagrangian::Norm();
  const Trajectory tr = Integrate(f, BuildSchedule({FormalBracket::Letter(1), {1}, Sign::kMinus}, 2.0),
                                  Eigen::VectorXd::Ones(1), {}, stops, &l);
  EXPECT_EQ(tr.status, FlowStatus::kLevelReached);
  EXPECT_NEAR(tr.final_time(), 0.5, 1e-9);
  // ∫ (1 − s) ds over [0, 1/2]; the trapezoid rule is exact on linear costs.
  EXPECT_NEAR(tr.final_cost(), 0.375, 1e-9);
}

TEST(FlowTest, BlowUpIsReported) {
  const Polynomial y = Polynomial::Variable(1, 0);
  const std::vector<PolyVectorField> f = {PolyVectorField({y * y})};
  const Trajectory tr = Integrate(f, BuildSchedule({FormalBracket::Letter(1), {1}, Sign::kPlus}, 2.0),
                                  Eigen::VectorXd::Ones(1));
  EXPECT_EQ(tr.status, FlowStatus::kBlownUp);
  EXPECT_LT(tr.final_time(), 1.0 + 1e-2 + 1e-12);
}

TEST(FlowTest, MultiflowUsesGeneratorAndRejectsTargetStart) {
  const auto f = BrockettFields();
  const TargetSet target = TargetSet::Point(Eigen::VectorXd::Zero(3), 1e-3);
  const FeedbackGenerator gen = BrockettGenerator();
  const Trajectory tr = Multiflow(gen, f, target, Eigen::Vector3d(0, 0, 1), 0.1);
  EXPECT_LT(tr.final_state()[2], 1.0);
  EXPECT_THROW(Multiflow(gen, f, target, Eigen::Vector3d(0, 0, 1e-4), 0.1), std::invalid_argument);
}

TEST(FlowTest, GeneratorValidatesLabels) {
  const FeedbackGenerator too_deep = FeedbackGenerator::Constant(
      ControlLabel{ParseBracket("[[X1,X2],X3]"), {1, 2, 1}, Sign::kPlus});
  EXPECT_NO_THROW(too_deep(Eigen::Vector3d::Zero(), 2));
  EXPECT_THROW(too_deep(Eigen::Vector3d::Zero(), 1), ValidationError);
  const FeedbackGenerator shallow("shallow", 1, [](const Eigen::VectorXd&) {
    return ControlLabel{ParseBracket("[X1,X2]"), {1, 2}, Sign::kPlus};
  });
  EXPECT_THROW(shallow(Eigen::Vector3d::Zero(), 2), ValidationError);
}

TEST(FlowTest, TrajectoryCsvAndConcatenate) {
  const auto f = ConstantFields();
  const ControlLabel l{ParseBracket("[X1,X2]"), {1, 2}, Sign::kPlus};
  Trajectory a = Integrate(f, BuildSchedule(l, 0.1), Eigen::Vector2d::Zero());
  const Trajectory b = Integrate(f, BuildSchedule(l, 0.1), a.final_state());
  const std::size_t na = a.size();
  a.Concatenate(b);
  EXPECT_EQ(a.size(), na + b.size() - 1);
  std::ostringstream os;
  a.WriteCsv(os);
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')), "s,y_1,y_2,i_active,sign_active");
}

}  // namespace
}  // namespace bracketflow
