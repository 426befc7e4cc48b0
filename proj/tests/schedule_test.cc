#include "bracketflow/schedule.h"

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "bracketflow/control_label.h"

namespace bracketflow {
namespace {

struct Slice {
  int num;  // slice [num/10, (num+1)/10)
  int index;
  Sign sign;
};

ControlLabel ExampleLabel(Sign sign) {
  return ControlLabel{ParseBracket("[X3,[X4,X5]]"), {3, 2, 1, 2, 3}, sign};
}

void ExpectSlices(const Schedule& s, const std::vector<Slice>& expected) {
  ASSERT_EQ(s.raw_segments().size(), expected.size());
  ASSERT_EQ(s.segments().size(), expected.size());
  for (std::size_t k = 0; k < expected.size(); ++k) {
    const Segment& seg = s.segments()[k];
    EXPECT_EQ(seg.start, Rational(expected[k].num, 10)) << k;
    EXPECT_EQ(seg.end, Rational(expected[k].num + 1, 10)) << k;
    EXPECT_EQ(seg.index, expected[k].index) << k;
    EXPECT_EQ(seg.sign, expected[k].sign) << k;
  }
}

constexpr Sign P = Sign::kPlus;
constexpr Sign M = Sign::kMinus;

TEST(ScheduleTest, ExampleTablePlus) {
  ExpectSlices(BuildSchedule(ExampleLabel(P), 1.0),
               {{0, 1, P}, {1, 2, P}, {2, 3, P}, {3, 2, M}, {4, 3, M},
                {5, 1, M}, {6, 3, P}, {7, 2, P}, {8, 3, M}, {9, 2, M}});
}

TEST(ScheduleTest, ExampleTableMinus) {
  ExpectSlices(BuildSchedule(ExampleLabel(M), 1.0),
               {{0, 2, P}, {1, 3, P}, {2, 2, M}, {3, 3, M}, {4, 1, P},
                {5, 3, P}, {6, 2, P}, {7, 3, M}, {8, 2, M}, {9, 1, M}});
}

TEST(ScheduleTest, BreakpointsScaleWithDuration) {
  const Schedule s = BuildSchedule(ExampleLabel(P), 2.5);
  EXPECT_DOUBLE_EQ(s.duration(), 2.5);
  EXPECT_DOUBLE_EQ(s.StartTime(s.segments()[3]), 0.75);
  EXPECT_DOUBLE_EQ(s.EndTime(s.segments().back()), 2.5);
}

TEST(ScheduleTest, DegreeOneIsConstant) {
  const Schedule s = BuildSchedule(ControlLabel{FormalBracket::Letter(1), {2}, M}, 0.3);
  ASSERT_EQ(s.segments().size(), 1u);
  EXPECT_EQ(s.segments()[0].index, 2);
  EXPECT_EQ(s.segments()[0].sign, M);
  const Eigen::VectorXd a = s.Sample(0.1, 3);
  EXPECT_EQ(a, Eigen::Vector3d(0.0, -1.0, 0.0));
}

TEST(ScheduleTest, SegmentAtIsRightContinuous) {
  const Schedule s = BuildSchedule(ExampleLabel(P), 1.0);
  EXPECT_EQ(s.SegmentAt(0.1).index, 2);
  EXPECT_EQ(s.SegmentAt(0.0999).index, 1);
  EXPECT_EQ(s.SegmentAt(1.0).index, 2);
  EXPECT_EQ(s.SegmentAt(5.0).sign, M);
}

TEST(ScheduleTest, AdjacentEqualSlotsMerge) {
  // [X1,X1] with g = (f1): +e1, +e1, −e1, −e1.
  const Schedule s = BuildSchedule(ControlLabel{ParseBracket("[X1,X2]"), {1, 1}, P}, 1.0);
  EXPECT_EQ(s.raw_segments().size(), 4u);
  ASSERT_EQ(s.segments().size(), 2u);
  EXPECT_EQ(s.segments()[0].end, Rational(1, 2));
}

TEST(ScheduleTest, InvalidInputs) {
  EXPECT_THROW(BuildSchedule(ExampleLabel(P), 0.0), ValidationError);
  EXPECT_THROW(BuildSchedule(ExampleLabel(P), -1.0), ValidationError);
  EXPECT_THROW(BuildSchedule(ControlLabel{ParseBracket("[X1,X3]"), {1, 2}, P}, 1.0),
               ValidationError);
}

TEST(ScheduleTest, CsvRows) {
  std::ostringstream os;
  BuildSchedule(ExampleLabel(P), 1.0).WriteCsv(os);
  const std::string csv = os.str();
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 11);
  EXPECT_EQ(csv.substr(0, 17), "start,end,i,sign\n");
}

ControlLabel RandomLabel(std::mt19937_64& rng, int max_degree, int m) {
  std::function<FormalBracket(int, int&)> build = [&](int degree, int& next) {
    if (degree == 1) return FormalBracket::Letter(next++);
    const int left = std::uniform_int_distribution<int>(1, degree - 1)(rng);
    FormalBracket l = build(left, next);
    return FormalBracket::Pair(l, build(degree - left, next));
  };
  const int degree = std::uniform_int_distribution<int>(1, max_degree)(rng);
  int next = 1;
  ControlLabel label{build(degree, next), {}, rng() % 2 ? P : M};
  for (int j = 0; j < degree; ++j) {
    label.fields.push_back(std::uniform_int_distribution<int>(1, m)(rng));
  }
  return label;
}

// α₋(s) = −α₊(t−s) away from the breakpoints, compared as rationals.
TEST(ScheduleTest, SignReversalProperty) {
  std::mt19937_64 rng(3);
  for (int n = 0; n < 200; ++n) {
    ControlLabel plus = RandomLabel(rng, 4, 3);
    plus.sign = P;
    ControlLabel minus = plus;
    minus.sign = M;
    const Schedule sp = BuildSchedule(plus, 1.0);
    const Schedule sm = BuildSchedule(minus, 1.0);
    const std::int64_t den = 4 * plus.switch_number();
    for (std::int64_t q = 1; q < den; q += 2) {
      // q/den is never a breakpoint, since breakpoints are multiples of 1/𝔰.
      const double s = static_cast<double>(q) / den;
      const Segment& a = sm.SegmentAt(s);
      const Segment& b = sp.SegmentAt(1.0 - s);
      ASSERT_EQ(a.index, b.index);
      ASSERT_EQ(a.sign, Flip(b.sign));
    }
  }
}

// Each letter gets 𝔰 equal slots overall; beyond degree 1 every field
// index is used for equal time in both directions.
TEST(ScheduleTest, SlotsAreEqualAndBalanced) {
  std::mt19937_64 rng(5);
  for (int n = 0; n < 200; ++n) {
    const ControlLabel label = RandomLabel(rng, 5, 3);
    const Schedule s = BuildSchedule(label, 1.0);
    ASSERT_EQ(static_cast<std::int64_t>(s.raw_segments().size()), label.switch_number());
    std::map<int, std::int64_t> net;
    Rational cursor(0);
    for (const Segment& seg : s.raw_segments()) {
      ASSERT_EQ(seg.start, cursor);
      ASSERT_EQ(seg.end - seg.start, Rational(1, label.switch_number()));
      cursor = seg.end;
      net[seg.index] += ToInt(seg.sign);
    }
    ASSERT_EQ(cursor, Rational(1));
    if (label.degree() > 1) {
      for (const auto& [i, v] : net) ASSERT_EQ(v, 0) << label.ToString();
    }
  }
}

}  // namespace
}  // namespace bracketflow
