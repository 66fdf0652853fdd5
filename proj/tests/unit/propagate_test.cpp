#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <optional>
#include <vector>

#include "fixtures.hpp"
#include "intentmine/error.hpp"
#include "intentmine/propagate.hpp"
#include "intentmine/synthetic.hpp"

using namespace intentmine;

namespace {

LabelState labeled_state(const fixtures::Separable& s) {
  auto state = LabelState::unlabeled(s.dataset.size());
  state.label_cluster(0, "left", s.clusters);
  state.label_cluster(1, "right", s.clusters);
  return state;
}

std::vector<std::optional<std::string>> training_labels(const LabelState& state) {
  std::vector<std::optional<std::string>> out;
  for (const auto& l : state.utterance_labels) out.push_back(l ? std::optional(l->intent) : std::nullopt);
  return out;
}

}  // namespace

// Brute-force scan over directions in the x0/x1 plane confirms the fixture
// is linearly separable before trusting the classifier on it.
TEST(Propagate, FixtureIsSeparable) {
  const auto s = fixtures::separable(1);
  bool found = false;
  for (int step = 0; step < 360 && !found; ++step) {
    const double a = step * M_PI / 180.0;
    double min_right = 1e9, max_left = -1e9;
    for (std::size_t i = 0; i < s.dataset.size(); ++i) {
      const auto row = s.dataset[i].embedding;
      const double proj = std::cos(a) * row[0] + std::sin(a) * row[1];
      if (s.gold[i] == "right") min_right = std::min(min_right, proj);
      else max_left = std::max(max_left, proj);
    }
    found = min_right > max_left;
  }
  EXPECT_TRUE(found);
}

TEST(Train, SeparableReachesFullAccuracy) {
  const auto s = fixtures::separable(1);
  const auto state = labeled_state(s);
  const auto result = train_classifier(s.dataset, training_labels(state));
  EXPECT_DOUBLE_EQ(result.training_accuracy, 1.0);
  EXPECT_TRUE(result.converged);
  EXPECT_TRUE(result.warning.empty());
  EXPECT_EQ(result.model.intents(), (std::vector<std::string>{"left", "right"}));
  ASSERT_EQ(result.loss_checkpoints.size(), 11u);  // epoch 0, 50, ..., 500
  EXPECT_LT(result.loss_checkpoints.back(), result.loss_checkpoints.front());
}

TEST(Train, Deterministic) {
  const auto s = fixtures::separable(2);
  const auto labels = training_labels(labeled_state(s));
  const auto a = train_classifier(s.dataset, labels, {0.1, 200, 1e-3, 7, 50});
  const auto b = train_classifier(s.dataset, labels, {0.1, 200, 1e-3, 7, 50});
  EXPECT_TRUE(std::equal(a.model.weights().begin(), a.model.weights().end(), b.model.weights().begin()));
  EXPECT_TRUE(std::equal(a.model.bias().begin(), a.model.bias().end(), b.model.bias().begin()));
  EXPECT_EQ(a.loss_checkpoints, b.loss_checkpoints);
}

TEST(Train, NeedsTwoIntents) {
  const auto s = fixtures::separable(1);
  auto state = LabelState::unlabeled(s.dataset.size());
  state.label_cluster(0, "left", s.clusters);
  try {
    train_classifier(s.dataset, training_labels(state));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TooFewClasses);
  }
}

TEST(Train, DivergenceIsReported) {
  const auto s = fixtures::separable(3);
  const auto result = train_classifier(s.dataset, training_labels(labeled_state(s)), {60.0, 200, 0.5, 0, 10});
  EXPECT_FALSE(result.converged);
  EXPECT_FALSE(result.warning.empty());
}

TEST(Classifier, SoftmaxSumsToOne) {
  const IntentClassifier clf({"a", "b", "c"}, 2, {1, 2, -3, 0.5, 40, -40}, {0.1, 0.2, 0.3});
  for (const auto& x : std::vector<std::vector<double>>{{1, 0}, {0, 1}, {-5, 7}, {100, 100}}) {
    const auto p = clf.predict_proba(x);
    EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-9);
    for (double v : p) EXPECT_TRUE(v >= 0.0 && v <= 1.0);
  }
  EXPECT_THROW(IntentClassifier({"a"}, 2, {1, 2, 3}, {0}), Error);
  EXPECT_THROW(IntentClassifier({"a"}, 1, {NAN}, {0}), Error);
}

TEST(Propagate, Thresholds) {
  const auto s = fixtures::separable(1);
  const auto state = labeled_state(s);
  const auto model = train_classifier(s.dataset, training_labels(state)).model;

  const auto all = propagate_labels(model, s.dataset, state, 0.0);
  EXPECT_EQ(all.unlabeled_count(), 0u);
  EXPECT_EQ(all.count(LabelSource::Propagated), 20u);

  const auto none = propagate_labels(model, s.dataset, state, 1.0);
  EXPECT_EQ(none.count(LabelSource::Propagated), 0u);

  for (double threshold : {0.5, 0.7}) {
    const auto p = propagate_labels(model, s.dataset, state, threshold);
    for (std::size_t i = 20; i < 40; ++i) {
      const auto& label = p.utterance_labels[i];
      if (!label) continue;
      EXPECT_EQ(label->intent, s.gold[i]) << i;
      EXPECT_GE(label->confidence, threshold);
      EXPECT_EQ(label->source, LabelSource::Propagated);
    }
  }
  const auto half = propagate_labels(model, s.dataset, state, 0.5);
  EXPECT_EQ(half.unlabeled_count(), 0u);

  EXPECT_THROW(propagate_labels(model, s.dataset, state, 1.5), Error);
  EXPECT_THROW(propagate_labels(model, s.dataset, LabelState::unlabeled(3), 0.5), Error);
}

TEST(Propagate, MonotoneInThreshold) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto ds = synthetic::make_blob_dataset(6, {{30, 0.3}, {30, 0.3}, {20, 0.3}}, seed);
    const auto gold = ds.gold_ids();
    std::vector<int> raw(ds.size(), kNoise);
    for (std::size_t i = 0; i < ds.size(); i += 3) raw[i] = gold[i];
    const auto clusters = normalize_assignment(raw);
    auto state = LabelState::unlabeled(ds.size());
    for (int c = 0; c < clusters.num_clusters; ++c) state.label_cluster(c, "i" + std::to_string(c), clusters);
    const auto model = train_classifier(ds, training_labels(state), {0.1, 100, 1e-3, seed, 50}).model;
    const auto strict = propagate_labels(model, ds, state, 0.9);
    const auto loose = propagate_labels(model, ds, state, 0.5);
    for (std::size_t i = 0; i < ds.size(); ++i) {
      if (strict.utterance_labels[i]) {
        ASSERT_TRUE(loose.utterance_labels[i].has_value());
        EXPECT_EQ(*strict.utterance_labels[i], *loose.utterance_labels[i]);
      }
    }
    EXPECT_LE(loose.unlabeled_count(), strict.unlabeled_count());
  }
}

TEST(Propagate, ClusterLabelsAreNeverOverwritten) {
  const auto s = fixtures::separable(4);
  auto state = labeled_state(s);
  // Deliberately wrong cluster label on one member.
  state.utterance_labels[0] = UtteranceLabel{"right", 1.0, LabelSource::Cluster};
  const auto before = state;
  const auto model = train_classifier(s.dataset, training_labels(state)).model;
  auto after = propagate_labels(model, s.dataset, state, 0.0);
  after = propagate_labels(model, s.dataset, after, 0.0);
  for (std::size_t i = 0; i < s.dataset.size(); ++i)
    if (before.utterance_labels[i]) EXPECT_EQ(after.utterance_labels[i], before.utterance_labels[i]);
  after.clear_propagated();
  EXPECT_EQ(after, before);
}

TEST(LabelState, LabelAndRelabel) {
  const auto s = fixtures::separable(1);
  auto state = LabelState::unlabeled(s.dataset.size());
  state.label_cluster(1, "first", s.clusters);
  EXPECT_EQ(state.count(LabelSource::Cluster), 10u);
  state.label_cluster(1, "second", s.clusters);
  EXPECT_EQ(state.cluster_labels.at(1), "second");
  for (const auto& l : state.utterance_labels)
    if (l) EXPECT_EQ(l->intent, "second");
  EXPECT_THROW(state.label_cluster(2, "x", s.clusters), Error);
  EXPECT_THROW(state.label_cluster(0, "", s.clusters), Error);
  EXPECT_EQ(to_string(LabelSource::Propagated), "propagated");
  EXPECT_EQ(label_source_from_string("cluster"), LabelSource::Cluster);
  EXPECT_THROW(label_source_from_string("other"), Error);
}

TEST(Export, Counts) {
  const auto s = fixtures::separable(1);
  const auto empty = export_training_data(s.dataset, LabelState::unlabeled(s.dataset.size()));
  EXPECT_TRUE(empty.labeled.empty());
  EXPECT_EQ(empty.unlabeled.size(), s.dataset.size());

  const auto state = labeled_state(s);
  const auto mixed = export_training_data(s.dataset, state);
  EXPECT_EQ(mixed.labeled.size(), 20u);
  EXPECT_EQ(mixed.labeled.size() + mixed.unlabeled.size(), s.dataset.size());
  EXPECT_EQ(mixed.labeled.front().id, "r0");
  EXPECT_EQ(mixed.labeled.front().intent, "left");

  const auto model = train_classifier(s.dataset, training_labels(state)).model;
  const auto full = export_training_data(s.dataset, propagate_labels(model, s.dataset, state, 0.0));
  EXPECT_EQ(full.labeled.size(), s.dataset.size());
  EXPECT_TRUE(full.unlabeled.empty());
}
