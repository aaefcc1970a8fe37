#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "gog/error.hpp"
#include "gog/split.hpp"
#include "test_util.hpp"

namespace gog {
namespace {

std::vector<int> class_counts(const Dataset& ds, const std::vector<int>& items) {
  std::vector<int> c(static_cast<std::size_t>(ds.num_classes), 0);
  for (int g : items) ++c[ds.graphs[g].label()];
  return c;
}

TEST(Split, RatioRoundingIsMinorityFirst) {
  EXPECT_EQ(ratio_counts(50, 1, 9), (std::pair{5, 45}));
  EXPECT_EQ(ratio_counts(1000, 1, 9), (std::pair{100, 900}));
  EXPECT_EQ(ratio_counts(25, 5, 5), (std::pair{12, 13}));
  EXPECT_EQ(ratio_counts(47, 1, 9), (std::pair{4, 43}));
}

TEST(Split, ExactCountsDisjointAndDeterministic) {
  const Dataset ds = test::toy_dataset(30, 70);
  const Split a = make_imbalanced_split(ds, 0, 3, 27, 1.0, 11);
  const Split b = make_imbalanced_split(ds, 0, 3, 27, 1.0, 11);
  EXPECT_EQ(a, b);
  EXPECT_EQ(class_counts(ds, a.train), (std::vector<int>{3, 27}));
  EXPECT_EQ(class_counts(ds, a.val), (std::vector<int>{3, 27}));
  std::set<int> all;
  for (const auto* part : {&a.train, &a.val, &a.test})
    for (int g : *part) EXPECT_TRUE(all.insert(g).second) << "graph " << g << " appears twice";
  EXPECT_EQ(all.size(), ds.size());

  const Split c = make_imbalanced_split(ds, 0, 3, 27, 1.0, 12);
  EXPECT_NE(a.train, c.train);
}

TEST(Split, ShortClassReportsShortfall) {
  const Dataset ds = test::toy_dataset(5, 50);
  try {
    make_imbalanced_split(ds, 0, 4, 20, 1.0, 1);
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("class 0"), std::string::npos) << what;
    EXPECT_NE(what.find("3"), std::string::npos) << what;
  }
}

TEST(Split, MutagPaperCounts) {
  if (!test::have_dataset("MUTAG")) GTEST_SKIP() << "MUTAG not present";
  const Dataset ds = load_tudataset(test::kDataDir / "MUTAG", "MUTAG");
  const auto [n_min, n_maj] = ratio_counts(static_cast<int>(std::lround(0.25 * 188)), 1, 9);
  EXPECT_EQ(n_min, 4);  // round(0.25 * 188) = 47
  const Split s = make_imbalanced_split(ds, smallest_class(ds), 5, 45, 1.0, 3);
  EXPECT_EQ(class_counts(ds, s.train), (std::vector<int>{5, 45}));
}

TEST(Upsample, EvenMultiple) {
  const Dataset ds = test::toy_dataset(30, 100);
  const Split s = upsample_minority(make_imbalanced_split(ds, 0, 5, 45, 1.0, 2), ds);
  EXPECT_EQ(class_counts(ds, s.expanded_train()), (std::vector<int>{45, 45}));
  for (std::size_t i = 0; i < s.train.size(); ++i)
    EXPECT_EQ(s.train_counts[i], ds.graphs[s.train[i]].label() == 0 ? 9 : 1);
}

TEST(Upsample, RemainderRoundRobin) {
  const Dataset ds = test::toy_dataset(30, 70);
  const Split s = upsample_minority(make_imbalanced_split(ds, 0, 4, 45, 0.0, 2), ds);
  std::vector<int> minority;
  for (std::size_t i = 0; i < s.train.size(); ++i)
    if (ds.graphs[s.train[i]].label() == 0) minority.push_back(s.train_counts[i]);
  EXPECT_EQ(minority, (std::vector<int>{12, 11, 11, 11}));
}

TEST(Upsample, BalancedIsIdentity) {
  const Dataset ds = test::toy_dataset(50, 50);
  const Split s = upsample_minority(make_imbalanced_split(ds, 0, 20, 20, 1.0, 2), ds);
  for (int c : s.train_counts) EXPECT_EQ(c, 1);
  for (int c : s.val_counts) EXPECT_EQ(c, 1);
}

TEST(Upsample, ValidationBalancedToo) {
  const Dataset ds = test::toy_dataset(30, 70);
  const Split s = upsample_minority(make_imbalanced_split(ds, 0, 3, 27, 1.0, 5), ds);
  const auto c = class_counts(ds, s.expanded_val());
  EXPECT_LE(std::abs(c[0] - c[1]), 1);
}

TEST(Upsample, EmptyClassIsError) {
  const Dataset ds = test::toy_dataset(30, 70);
  ClassBudget budget{{0, 10}, {2, 2}};
  const Split s = make_split(ds, budget, 1);
  EXPECT_THROW(upsample_minority(s, ds), DataError);
}

}  // namespace
}  // namespace gog
