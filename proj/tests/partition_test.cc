#include "bracketflow/partition.h"

#include <cmath>

#include <gtest/gtest.h>

#include "bracketflow/bracket.h"

namespace bracketflow {
namespace {

const StepPolicy kAllPolicies[] = {StepPolicy::kMin, StepPolicy::kMid, StepPolicy::kMax,
                                   StepPolicy::kRandom, StepPolicy::kDefault};

TEST(StepChooserTest, PoliciesPickInsideTheBand) {
  StepChooser mn(StepPolicy::kMin), md(StepPolicy::kMid), mx(StepPolicy::kMax);
  EXPECT_EQ(mn.Choose(0.2, 1.0), 0.2);
  EXPECT_EQ(md.Choose(0.2, 1.0), 0.6);
  EXPECT_EQ(mx.Choose(0.2, 1.0), 1.0);
  // A zero lower end is not a step; min falls back to a tenth of hi.
  EXPECT_DOUBLE_EQ(mn.Choose(0.0, 1.0), 0.1);
  StepChooser def(StepPolicy::kDefault);
  EXPECT_EQ(def.Choose(0.2, 1.0, 5.0), 1.0);
  EXPECT_EQ(def.Choose(0.2, 1.0, 0.1), 0.2);
  EXPECT_EQ(def.Choose(0.2, 1.0, 0.5), 0.5);
  EXPECT_EQ(def.Choose(0.2, 1.0), 0.6);
  StepChooser rnd(StepPolicy::kRandom, 9);
  for (int i = 0; i < 1000; ++i) {
    const double s = rnd.Choose(0.2, 1.0);
    ASSERT_GE(s, 0.2);
    ASSERT_LE(s, 1.0);
  }
  EXPECT_THROW(md.Choose(1.0, 0.5), std::invalid_argument);
  EXPECT_THROW(md.Choose(0.0, 0.0), std::invalid_argument);
}

TEST(StepChooserTest, RandomIsSeeded) {
  StepChooser a(StepPolicy::kRandom, 42), b(StepPolicy::kRandom, 42), c(StepPolicy::kRandom, 43);
  bool differs = false;
  for (int i = 0; i < 10; ++i) {
    const double x = a.Choose(0.0, 1.0);
    EXPECT_EQ(x, b.Choose(0.0, 1.0));
    differs |= x != c.Choose(0.0, 1.0);
  }
  EXPECT_TRUE(differs);
}

TEST(StepPolicyTest, NamesRoundTrip) {
  for (StepPolicy p : kAllPolicies) EXPECT_EQ(StepPolicyFromString(ToString(p)), p);
  EXPECT_THROW(StepPolicyFromString("fastest"), ValidationError);
}

TEST(PartitionTest, UniformAndExplicit) {
  const Partition u = Partition::Uniform(0.25);
  EXPECT_DOUBLE_EQ(u.Time(8), 2.0);
  EXPECT_EQ(u.Step(3), 0.25);
  const Partition e = Partition::Explicit({0.0, 0.5, 0.75});
  EXPECT_DOUBLE_EQ(e.Time(2), 0.75);
  EXPECT_DOUBLE_EQ(e.Time(4), 1.25);
  EXPECT_EQ(e.steps().size(), 4u);
  EXPECT_THROW(Partition::Explicit({0.0}), ValidationError);
  EXPECT_THROW(Partition::Explicit({0.1, 0.5}), ValidationError);
  EXPECT_THROW(Partition::Explicit({0.0, 0.5, 0.5}), ValidationError);
  EXPECT_THROW(Partition::Uniform(0.0), ValidationError);
}

TEST(PartitionTest, NonPositiveStepsAreRejected) {
  const Partition p = Partition::FromSteps([](std::int64_t j) { return j < 3 ? 1.0 : 0.0; });
  EXPECT_EQ(p.Time(2), 2.0);
  EXPECT_THROW(p.Time(3), std::domain_error);
  EXPECT_THROW(p.Step(0), std::out_of_range);
}

TEST(PartitionTest, RankBandShape) {
  const auto [lo, hi] = RankBand(0.4, 2, 4);
  EXPECT_DOUBLE_EQ(hi, 0.4);
  EXPECT_DOUBLE_EQ(lo, 0.25 * 0.4 / 2.0);
  EXPECT_EQ(RankBand(1.0, 1, 7).first, 0.0);
}

TEST(PartitionTest, RankPartitionsPassTheirAudit) {
  for (int k = 1; k <= 4; ++k) {
    for (StepPolicy p : kAllPolicies) {
      const Partition part = Partition::Rank(0.3, k, p, 5);
      part.Time(10000);
      ASSERT_EQ(AuditRankPartition(part.steps(), 0.3, k), 0) << k << " " << ToString(p);
    }
  }
}

TEST(PartitionTest, DefaultRankStepIsDeltaOverRoot) {
  const Partition part = Partition::Rank(0.5, 2, StepPolicy::kDefault);
  EXPECT_DOUBLE_EQ(part.Step(1), 0.5);
  EXPECT_DOUBLE_EQ(part.Step(4), 0.25);
  EXPECT_DOUBLE_EQ(part.Step(100), 0.05);
}

TEST(PartitionTest, AuditFindsViolations) {
  EXPECT_EQ(AuditRankPartition({0.3, 0.3, 0.31}, 0.3, 2), 3);
  EXPECT_EQ(AuditRankPartition({0.3, 0.01}, 0.3, 2), 2);
  EXPECT_EQ(AuditRankPartition({0.0}, 0.3, 1), 1);
  EXPECT_EQ(AuditRankPartition({}, 0.3, 1), 0);
}

TEST(PartitionTest, RankTimesDiverge) {
  // Even the lower band edge is not summable, so s_j → ∞.
  const Partition part = Partition::Rank(0.1, 2, StepPolicy::kMin);
  EXPECT_GT(part.Time(40000), 9.0);
  EXPECT_THROW(Partition::Rank(0.0, 2, StepPolicy::kMin), ValidationError);
  EXPECT_THROW(Partition::Rank(0.1, 0, StepPolicy::kMin), ValidationError);
}

}  // namespace
}  // namespace bracketflow
