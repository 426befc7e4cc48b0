#include "bracketflow/bracket.h"

#include <random>
#include <string>

#include <gtest/gtest.h>

namespace bracketflow {
namespace {

// Random bracket with `degree` letters drawn from X1..X_max_letter.
FormalBracket RandomBracket(std::mt19937_64& rng, int degree, int max_letter) {
  if (degree == 1) {
    return FormalBracket::Letter(std::uniform_int_distribution<int>(1, max_letter)(rng));
  }
  const int left = std::uniform_int_distribution<int>(1, degree - 1)(rng);
  return FormalBracket::Pair(RandomBracket(rng, left, max_letter),
                             RandomBracket(rng, degree - left, max_letter));
}

TEST(BracketTest, SwitchNumbersOfNestedExamples) {
  EXPECT_EQ(ParseBracket("[[X3,X4],[[X5,X6],X7]]").switch_number(), 28);
  EXPECT_EQ(ParseBracket("[[X5,X6],X7]").switch_number(), 10);
  EXPECT_EQ(ParseBracket("[X1,X2]").switch_number(), 4);
  EXPECT_EQ(ParseBracket("X9").switch_number(), 1);
}

TEST(BracketTest, Degrees) {
  EXPECT_EQ(ParseBracket("[[X1,X2],X3]").degree(), 3);
  EXPECT_EQ(ParseBracket("[[X1,X2],[X3,X4]]").degree(), 4);
  EXPECT_EQ(ParseBracket("[[[X1,X2],X3],X4]").degree(), 4);
  EXPECT_EQ(ParseBracket("[[X2,X3],X4]").degree(), 3);
  EXPECT_EQ(ParseBracket("[X3,[X4,X5]]").degree(), 3);
  EXPECT_EQ(ParseBracket("X1").degree(), 1);
}

TEST(BracketTest, WhitespaceAndRoundTrip) {
  const FormalBracket b = ParseBracket("  [ [X12 , X3],\tX1 ] ");
  EXPECT_EQ(b.ToString(), "[[X12,X3],X1]");
  EXPECT_EQ(ParseBracket(b.ToString()), b);
  EXPECT_EQ(b.max_letter(), 12);
  EXPECT_EQ(b.depth(), 2);
}

TEST(BracketTest, Factorize) {
  const auto [b1, b2] = ParseBracket("[[X3,X4],[[X5,X6],X7]]").Factorize();
  EXPECT_EQ(b1.ToString(), "[X3,X4]");
  EXPECT_EQ(b2.ToString(), "[[X5,X6],X7]");
  EXPECT_THROW(ParseBracket("X1").Factorize(), std::domain_error);
  EXPECT_THROW(ParseBracket("[X1,X2]").letter_index(), std::domain_error);
}

TEST(BracketTest, ParseErrorsCarryPositions) {
  const std::vector<std::pair<std::string, std::size_t>> cases = {
      {"[X1", 3}, {"", 0}, {"Y1", 0}, {"[X1,X2]]", 7}, {"X", 1}, {"[X1;X2]", 3}};
  for (const auto& [text, pos] : cases) {
    try {
      ParseBracket(text);
      ADD_FAILURE() << "accepted \"" << text << "\"";
    } catch (const ParseError& e) {
      EXPECT_EQ(e.position(), pos) << text;
    }
  }
  EXPECT_THROW(ParseBracket("X0"), ValidationError);
  EXPECT_THROW(FormalBracket::Letter(0), ValidationError);
}

TEST(BracketTest, SmoothnessBudgetFollowsNesting) {
  const SmoothnessBudget b = ComputeSmoothnessBudget(ParseBracket("[[X3,X4],[[X5,X6],X7]]"), 7);
  EXPECT_EQ(b.orders(), (std::vector<int>{0, 0, 2, 2, 3, 3, 2}));
  EXPECT_EQ(ComputeSmoothnessBudget(ParseBracket("X2"), 2).orders(), (std::vector<int>{0, 0}));
  // A repeated letter keeps its deepest requirement.
  EXPECT_EQ(ComputeSmoothnessBudget(ParseBracket("[X1,[X1,X2]]"), 2).orders(),
            (std::vector<int>{2, 2}));
  EXPECT_THROW(ComputeSmoothnessBudget(ParseBracket("[X1,X3]"), 2), ValidationError);
}

TEST(BracketTest, RandomBracketsSatisfyRecursions) {
  std::mt19937_64 rng(11);
  for (int n = 0; n < 500; ++n) {
    const int degree = std::uniform_int_distribution<int>(1, 7)(rng);
    const FormalBracket b = RandomBracket(rng, degree, 9);
    ASSERT_EQ(b.degree(), degree);
    ASSERT_EQ(ParseBracket(b.ToString()), b);
    if (b.is_letter()) {
      ASSERT_EQ(b.switch_number(), 1);
      continue;
    }
    const auto [b1, b2] = b.Factorize();
    ASSERT_EQ(b.switch_number(), 2 * (b1.switch_number() + b2.switch_number()));
    ASSERT_EQ(b.degree(), b1.degree() + b2.degree());
    ASSERT_EQ(b.switch_number() % 2, 0);
  }
}

}  // namespace
}  // namespace bracketflow
