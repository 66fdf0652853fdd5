#include "intentmine/propagate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>
#include <unordered_set>

#include "intentmine/detail/random.hpp"
#include "intentmine/error.hpp"

namespace intentmine {

std::string_view to_string(LabelSource source) noexcept {
  return source == LabelSource::Cluster ? "cluster" : "propagated";
}

LabelSource label_source_from_string(std::string_view text) {
  if (text == "cluster") return LabelSource::Cluster;
  if (text == "propagated") return LabelSource::Propagated;
  throw Error(ErrorCode::ParseError, "unknown label source '" + std::string(text) + "'");
}

LabelState LabelState::unlabeled(std::size_t n) {
  LabelState s;
  s.utterance_labels.resize(n);
  return s;
}

void LabelState::label_cluster(int cluster, const std::string& intent, const ClusterAssignment& assignment) {
  if (cluster < 0 || cluster >= assignment.num_clusters) {
    throw Error(ErrorCode::IndexOutOfRange, "cluster " + std::to_string(cluster));
  }
  if (intent.empty()) throw Error(ErrorCode::InvalidParams, "intent must be non-empty");
  if (utterance_labels.size() != assignment.labels.size()) {
    throw Error(ErrorCode::LengthMismatch, "label state does not match assignment");
  }
  cluster_labels[cluster] = intent;
  for (std::size_t i = 0; i < assignment.labels.size(); ++i) {
    if (assignment.labels[i] == cluster) utterance_labels[i] = UtteranceLabel{intent, 1.0, LabelSource::Cluster};
  }
}

void LabelState::clear_propagated() {
  for (auto& l : utterance_labels) {
    if (l && l->source == LabelSource::Propagated) l.reset();
  }
}

std::size_t LabelState::count(LabelSource source) const noexcept {
  return static_cast<std::size_t>(std::count_if(utterance_labels.begin(), utterance_labels.end(),
                                                 [&](const auto& l) { return l && l->source == source; }));
}

std::size_t LabelState::unlabeled_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(utterance_labels.begin(), utterance_labels.end(), [](const auto& l) { return !l; }));
}

IntentClassifier::IntentClassifier(std::vector<std::string> intents, std::size_t dimension,
                                   std::vector<double> weights, std::vector<double> bias)
    : intents_(std::move(intents)), dimension_(dimension), weights_(std::move(weights)), bias_(std::move(bias)) {
  if (weights_.size() != intents_.size() * dimension_ || bias_.size() != intents_.size()) {
    throw Error(ErrorCode::LengthMismatch, "classifier parameter shape");
  }
  for (double w : weights_) {
    if (!std::isfinite(w)) throw Error(ErrorCode::NonFiniteValue, "classifier weight");
  }
  for (double b : bias_) {
    if (!std::isfinite(b)) throw Error(ErrorCode::NonFiniteValue, "classifier bias");
  }
}

namespace {

// Softmax of W x + b, written into probs (size = classes).
void softmax_scores(std::span<const double> weights, std::span<const double> bias, std::size_t classes,
                    std::size_t dim, const double* x, std::vector<double>& probs) {
  probs.resize(classes);
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < classes; ++c) {
    double z = bias[c];
    const double* w = weights.data() + c * dim;
    for (std::size_t k = 0; k < dim; ++k) z += w[k] * x[k];
    probs[c] = z;
    top = std::max(top, z);
  }
  double sum = 0.0;
  for (double& p : probs) {
    p = std::exp(p - top);
    sum += p;
  }
  for (double& p : probs) p /= sum;
}

std::size_t argmax(const std::vector<double>& v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

}  // namespace

std::vector<double> IntentClassifier::predict_proba(std::span<const double> features) const {
  if (features.size() != dimension_) {
    throw Error(ErrorCode::DimensionMismatch,
                std::to_string(features.size()) + " features, classifier expects " + std::to_string(dimension_));
  }
  std::vector<double> probs;
  softmax_scores(weights_, bias_, intents_.size(), dimension_, features.data(), probs);
  return probs;
}

TrainResult train_classifier(const Dataset& dataset, std::span<const std::optional<std::string>> labels,
                             const TrainConfig& config) {
  if (labels.size() != dataset.size()) {
    throw Error(ErrorCode::LengthMismatch, "labels must be parallel to the dataset");
  }
  if (!(config.learning_rate > 0.0) || config.epochs < 1 || config.l2 < 0.0 || config.checkpoint_every < 1) {
    throw Error(ErrorCode::InvalidParams, "training configuration");
  }

  std::vector<std::string> intents;
  std::unordered_map<std::string, std::size_t> intent_id;
  std::vector<std::size_t> rows;
  std::vector<std::size_t> targets;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!labels[i]) continue;
    auto [it, inserted] = intent_id.try_emplace(*labels[i], intents.size());
    if (inserted) intents.push_back(*labels[i]);
    rows.push_back(i);
    targets.push_back(it->second);
  }
  if (intents.size() < 2) {
    throw Error(ErrorCode::TooFewClasses,
                "need at least 2 distinct intents, got " + std::to_string(intents.size()));
  }

  const std::size_t classes = intents.size();
  const std::size_t dim = dataset.dimension();
  const auto m = static_cast<double>(rows.size());

  detail::Rng rng(config.seed);
  std::vector<double> w(classes * dim);
  for (double& x : w) x = 0.01 * rng.normal();
  std::vector<double> b(classes, 0.0);

  std::vector<double> grad_w(classes * dim), grad_b(classes), probs;
  auto loss_and_grad = [&](bool want_grad) {
    double loss = 0.0;
    if (want_grad) {
      std::fill(grad_w.begin(), grad_w.end(), 0.0);
      std::fill(grad_b.begin(), grad_b.end(), 0.0);
    }
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const double* x = dataset.unit_row(rows[r]).data();
      softmax_scores(w, b, classes, dim, x, probs);
      loss -= std::log(std::max(probs[targets[r]], 1e-300));
      if (!want_grad) continue;
      for (std::size_t c = 0; c < classes; ++c) {
        const double g = probs[c] - (c == targets[r] ? 1.0 : 0.0);
        grad_b[c] += g;
        double* gw = grad_w.data() + c * dim;
        for (std::size_t k = 0; k < dim; ++k) gw[k] += g * x[k];
      }
    }
    double penalty = 0.0;
    for (double x : w) penalty += x * x;
    return loss / m + 0.5 * config.l2 * penalty;
  };

  std::vector<double> checkpoints;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const double loss = loss_and_grad(true);
    if (epoch % config.checkpoint_every == 0) checkpoints.push_back(loss);
    for (std::size_t k = 0; k < w.size(); ++k) w[k] -= config.learning_rate * (grad_w[k] / m + config.l2 * w[k]);
    for (std::size_t c = 0; c < classes; ++c) b[c] -= config.learning_rate * grad_b[c] / m;
  }
  checkpoints.push_back(loss_and_grad(false));

  bool converged = true;
  std::string warning;

  for (std::size_t k = 1; k < checkpoints.size(); ++k) {
    if (!std::isfinite(checkpoints[k]) || checkpoints[k] > checkpoints[k - 1]) {
      converged = false;
      warning = "DidNotConverge: loss rose from " + std::to_string(checkpoints[k - 1]) + " to " +
                std::to_string(checkpoints[k]) + " at checkpoint " +
                       std::to_string(k) + "; try a smaller learning rate";
      break;
    }
  }

  std::size_t correct = 0;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    softmax_scores(w, b, classes, dim, dataset.unit_row(rows[r]).data(), probs);
    correct += argmax(probs) == targets[r];
  }
  return TrainResult{IntentClassifier(std::move(intents), dim, std::move(w), std::move(b)),
                     std::move(checkpoints), converged, std::move(warning),
                     static_cast<double>(correct) / m};
}

LabelState propagate_labels(const IntentClassifier& classifier, const Dataset& dataset, const LabelState& state,
                            double threshold) {
  if (state.utterance_labels.size() != dataset.size()) {
    throw Error(ErrorCode::LengthMismatch, "label state does not match dataset");
  }
  if (!(threshold >= 0.0 && threshold <= 1.0)) throw Error(ErrorCode::InvalidParams, "threshold must be in [0, 1]");
  std::unordered_set<std::string> known;
  for (const auto& [cluster, intent] : state.cluster_labels) known.insert(intent);
  for (const auto& intent : classifier.intents()) {
    if (!known.contains(intent)) {
      throw Error(ErrorCode::InvalidParams, "classifier intent '" + intent + "' is not a cluster label");
    }
  }

  LabelState out = state;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    if (out.utterance_labels[i]) continue;
    const auto probs = classifier.predict_proba(dataset.unit_row(i));
    const std::size_t best = argmax(probs);
    if (probs[best] >= threshold) {
      out.utterance_labels[i] = UtteranceLabel{classifier.intents()[best], probs[best], LabelSource::Propagated};
    }
  }
  return out;
}

LabeledCorpus export_training_data(const Dataset& dataset, const LabelState& state) {
  if (state.utterance_labels.size() != dataset.size()) {
    throw Error(ErrorCode::LengthMismatch, "label state does not match dataset");
  }
  LabeledCorpus corpus;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const auto& label = state.utterance_labels[i];
    if (!label) {
      corpus.unlabeled.push_back(i);
      continue;
    }
    corpus.labeled.push_back(CorpusRow{dataset[i].id, dataset[i].text, label->intent, label->confidence, label->source});
  }
  return corpus;
}

}  // namespace intentmine
