#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "intentmine/dataset.hpp"

namespace intentmine {

enum class LabelSource { Cluster, Propagated };

std::string_view to_string(LabelSource source) noexcept;
LabelSource label_source_from_string(std::string_view text);

struct UtteranceLabel {
  std::string intent;
  double confidence = 1.0;
  LabelSource source = LabelSource::Cluster;

  friend bool operator==(const UtteranceLabel&, const UtteranceLabel&) = default;
};

/// Human cluster labels plus the per-utterance labels derived from them.
struct LabelState {
  std::map<int, std::string> cluster_labels;
  std::vector<std::optional<UtteranceLabel>> utterance_labels;

  static LabelState unlabeled(std::size_t n);

  /// Names cluster `cluster` and stamps every member (confidence 1,
  /// source=cluster), overwriting a previous name for that cluster.
  void label_cluster(int cluster, const std::string& intent, const ClusterAssignment& assignment);

  /// Forgets every propagated label; cluster-sourced labels stay.
  void clear_propagated();

  std::size_t count(LabelSource source) const noexcept;
  std::size_t unlabeled_count() const noexcept;

  friend bool operator==(const LabelState&, const LabelState&) = default;
};

struct TrainConfig {
  double learning_rate = 0.1;
  int epochs = 500;
  double l2 = 1e-3;
  std::uint64_t seed = 0;
  int checkpoint_every = 50;
};

/// Multinomial logistic regression over unit-normalized embeddings.
class IntentClassifier {
 public:
  IntentClassifier(std::vector<std::string> intents, std::size_t dimension,
                   std::vector<double> weights, std::vector<double> bias);

  const std::vector<std::string>& intents() const noexcept { return intents_; }
  std::size_t dimension() const noexcept { return dimension_; }
  std::span<const double> weights() const noexcept { return weights_; }  // intents x dimension
  std::span<const double> bias() const noexcept { return bias_; }

  /// Softmax probabilities over intents() for one feature row.
  std::vector<double> predict_proba(std::span<const double> features) const;

 private:
  std::vector<std::string> intents_;
  std::size_t dimension_;
  std::vector<double> weights_;
  std::vector<double> bias_;
};

struct TrainResult {
  IntentClassifier model;
  std::vector<double> loss_checkpoints;  // loss at epoch 0, every checkpoint_every, and the end
  bool converged = true;
  std::string warning;  // set when the loss went up between checkpoints
  double training_accuracy = 0.0;
};

/// Full-batch gradient descent with L2. `labels` is parallel to the dataset;
/// records without a label are ignored. Intents are ordered by first
/// appearance. Throws TooFewClasses with fewer than two distinct intents.
TrainResult train_classifier(const Dataset& dataset,
                             std::span<const std::optional<std::string>> labels,
                             const TrainConfig& config = {});

/// Labels every still-unlabeled record whose top probability reaches
/// `threshold`. Existing labels are left untouched.
LabelState propagate_labels(const IntentClassifier& classifier, const Dataset& dataset,
                            const LabelState& state, double threshold);

struct CorpusRow {
  std::string id;
  std::string text;
  std::string intent;
  double confidence = 0.0;
  LabelSource source = LabelSource::Cluster;
};

struct LabeledCorpus {
  std::vector<CorpusRow> labeled;
  std::vector<std::size_t> unlabeled;  // record indices
};

LabeledCorpus export_training_data(const Dataset& dataset, const LabelState& state);

}  // namespace intentmine
