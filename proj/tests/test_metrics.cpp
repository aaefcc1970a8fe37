#include <gtest/gtest.h>

#include "gog/metrics.hpp"

namespace gog {
namespace {

F1Scores f1(std::vector<int> pred, std::vector<int> truth, int c) { return f1_scores(pred, truth, c); }

TEST(F1, Perfect) {
  const auto s = f1({0, 1, 2, 1}, {0, 1, 2, 1}, 3);
  EXPECT_DOUBLE_EQ(s.macro, 1.0);
  EXPECT_DOUBLE_EQ(s.micro, 1.0);
}

TEST(F1, AllPredictedMajority) {
  const auto s = f1({0, 0, 0, 0}, {0, 0, 1, 1}, 2);
  EXPECT_NEAR(s.macro, (2.0 / 3.0) / 2.0, 1e-12);
  EXPECT_DOUBLE_EQ(s.micro, 0.5);
}

TEST(F1, AbsentClassScoresZero) {
  const auto s = f1({1, 1, 1}, {1, 1, 1}, 2);
  EXPECT_DOUBLE_EQ(s.macro, 0.5);
  EXPECT_DOUBLE_EQ(s.micro, 1.0);
}

TEST(F1, MatchesConfusionMatrixOracle) {
  // truth/pred pairs: (0,0) x3, (0,1) x1, (1,1) x2, (1,0) x2, (2,2) x1, (2,0) x1.
  const std::vector<int> truth{0, 0, 0, 0, 1, 1, 1, 1, 2, 2};
  const std::vector<int> pred{0, 0, 0, 1, 1, 1, 0, 0, 2, 0};
  // class 0: tp 3, fp 3, fn 1 -> 6/10; class 1: tp 2, fp 1, fn 2 -> 4/7; class 2: tp 1, fp 0, fn 1 -> 2/3.
  const auto s = f1_scores(pred, truth, 3);
  EXPECT_NEAR(s.macro, (0.6 + 4.0 / 7.0 + 2.0 / 3.0) / 3.0, 1e-12);
  EXPECT_DOUBLE_EQ(s.micro, 0.6);
}

TEST(F1, RejectsBadInput) {
  EXPECT_THROW(f1({0}, {0, 1}, 2), std::invalid_argument);
  EXPECT_THROW(f1({}, {}, 2), std::invalid_argument);
  EXPECT_THROW(f1({2}, {0}, 2), std::invalid_argument);
}

}  // namespace
}  // namespace gog
