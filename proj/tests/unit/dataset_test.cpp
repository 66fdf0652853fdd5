#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "fixtures.hpp"
#include "intentmine/dataset.hpp"
#include "intentmine/error.hpp"

using namespace intentmine;

namespace {

UtteranceRecord record(std::string id, std::vector<double> e, std::optional<std::string> gold = {}) {
  return {std::move(id), "t", std::move(e), std::move(gold)};
}

ErrorCode code_of(std::vector<UtteranceRecord> records) {
  try {
    validate_dataset(std::move(records));
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::IoError;
}

}  // namespace

TEST(Dataset, AcceptsWellFormedRecords) {
  const auto ds = validate_dataset({record("a", {1, 0, 0, 0}), record("b", {0, 1, 0, 0}),
                                    record("c", {0, 0, 3, 4})});
  EXPECT_EQ(ds.size(), 3u);
  EXPECT_EQ(ds.dimension(), 4u);
  EXPECT_EQ(ds[2].id, "c");
  EXPECT_NEAR(ds.unit_row(2)[2], 0.6, 1e-15);
  EXPECT_NEAR(ds.unit_row(2)[3], 0.8, 1e-15);
}

TEST(Dataset, RejectsBadInput) {
  EXPECT_EQ(code_of({}), ErrorCode::EmptyDataset);
  EXPECT_EQ(code_of({record("a", {1, 2, 3, 4}), record("b", {1, 2, 3, 4, 5})}),
            ErrorCode::DimensionMismatch);
  EXPECT_EQ(code_of({record("a", {1, std::nan(""), 0})}), ErrorCode::NonFiniteValue);
  EXPECT_EQ(code_of({record("a", {1, std::numeric_limits<double>::infinity()})}),
            ErrorCode::NonFiniteValue);
  EXPECT_EQ(code_of({record("a", {1, 0}), record("a", {0, 1})}), ErrorCode::DuplicateId);
  EXPECT_EQ(code_of({record("a", {0, 0})}), ErrorCode::ZeroNormVector);
  EXPECT_EQ(code_of({record("a", {})}), ErrorCode::DimensionMismatch);
}

TEST(Dataset, ErrorNamesOffendingRecord) {
  try {
    validate_dataset({record("a", {1, 0}), record("b", {1, 0}), record("bad", {1, 0, 0})});
    FAIL();
  } catch (const Error& e) {
    ASSERT_TRUE(e.record().has_value());
    EXPECT_EQ(*e.record(), 2u);
    EXPECT_NE(std::string(e.what()).find("bad"), std::string::npos);
  }
}

TEST(Dataset, GoldIdsByFirstAppearance) {
  const auto ds = validate_dataset({record("a", {1, 0}, "greet"), record("b", {0, 1}, "bye"),
                                    record("c", {1, 1}, "greet")});
  EXPECT_TRUE(ds.has_gold_labels());
  EXPECT_EQ(ds.gold_ids(), (std::vector<int>{0, 1, 0}));
  EXPECT_EQ(ds.gold_names(), (std::vector<std::string>{"greet", "bye"}));

  const auto unlabeled = validate_dataset({record("a", {1, 0}, "x"), record("b", {0, 1})});
  EXPECT_FALSE(unlabeled.has_gold_labels());
  try {
    (void)unlabeled.gold_ids();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::LabelsMissing);
  }
}

TEST(Dataset, SubsetKeepsOrder) {
  const auto ds = fixtures::make_dataset({{1, 0}, {0, 1}, {1, 1}, {2, 1}});
  const std::vector<std::size_t> pick{3, 1};
  const auto sub = ds.subset(pick);
  ASSERT_EQ(sub.size(), 2u);
  EXPECT_EQ(sub[0].id, "r3");
  EXPECT_EQ(sub[1].id, "r1");
}

TEST(Normalize, Examples) {
  const std::vector<int> a{-1, 7, 7, 2};
  EXPECT_EQ(normalize_assignment(a), (ClusterAssignment{{-1, 0, 0, 1}, 2}));
  const std::vector<int> b{-1, -1};
  EXPECT_EQ(normalize_assignment(b), (ClusterAssignment{{-1, -1}, 0}));
  const std::vector<int> c{5, 5, 5};
  EXPECT_EQ(normalize_assignment(c), (ClusterAssignment{{0, 0, 0}, 1}));
}

TEST(Normalize, IdempotentAndPreservesPartition) {
  std::mt19937 gen(7);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<int> raw(40);
    for (int& x : raw) x = static_cast<int>(gen() % 9) - 2;  // some values < -1
    for (int& x : raw)
      if (x < 0) x = kNoise;
    const auto once = normalize_assignment(raw);
    EXPECT_EQ(normalize_assignment(once.labels), once);
    for (std::size_t i = 0; i < raw.size(); ++i) {
      EXPECT_EQ(once.labels[i] == kNoise, raw[i] == kNoise);
      for (std::size_t j = 0; j < raw.size(); ++j)
        if (raw[i] != kNoise && raw[j] != kNoise) EXPECT_EQ(raw[i] == raw[j], once.labels[i] == once.labels[j]);
    }
  }
}

TEST(Assignment, NoiseAndMembers) {
  const ClusterAssignment a{{0, -1, 1, 0, -1}, 2};
  EXPECT_EQ(a.noise_count(), 2u);
  EXPECT_DOUBLE_EQ(a.noise_fraction(), 0.4);
  const auto m = a.members();
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(m[0], (std::vector<std::size_t>{0, 3}));
  EXPECT_EQ(m[1], (std::vector<std::size_t>{2}));
}
