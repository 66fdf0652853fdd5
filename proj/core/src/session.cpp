#include "intentmine/session.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>

#include "intentmine/error.hpp"
#include "intentmine/io.hpp"

namespace intentmine::api {

using nlohmann::json;

namespace {

Response error_response(int status, const std::string& message) {
  return Response{status, json{{"error", message}}.dump()};
}

Response ok(const json& body) { return Response{200, body.dump()}; }

const Response& no_session() {
  static const Response r = error_response(409, "no session loaded");
  return r;
}

bool blank(const std::string& s) { return s.find_first_not_of(" \t\r\n") == std::string::npos; }

}  // namespace

std::vector<std::size_t> nearest_to_centroid(const Dataset& dataset, std::span<const std::size_t> members,
                                             std::size_t count) {
  const std::size_t d = dataset.dimension();
  std::vector<double> centre(d, 0.0);
  for (std::size_t i : members) {
    const auto row = dataset.unit_row(i);
    for (std::size_t k = 0; k < d; ++k) centre[k] += row[k];
  }
  double norm = 0.0;
  for (double c : centre) norm += c * c;
  norm = std::sqrt(norm);

  std::vector<std::pair<double, std::size_t>> ranked;
  ranked.reserve(members.size());
  for (std::size_t i : members) {
    double dist = 0.0;
    if (norm > 0.0) {
      const auto row = dataset.unit_row(i);
      double dot = 0.0;
      for (std::size_t k = 0; k < d; ++k) dot += row[k] * centre[k];
      dist = std::clamp(1.0 - dot / norm, 0.0, 2.0);
    }
    ranked.emplace_back(dist, i);
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < std::min(count, ranked.size()); ++k) out.push_back(ranked[k].second);
  return out;
}

Session::Session(SessionOptions options) : options_(std::move(options)) {}

void Session::load(Dataset dataset, ClusterAssignment assignment) {
  if (assignment.labels.size() != dataset.size()) {
    throw Error(ErrorCode::LengthMismatch, "assignment does not match dataset");
  }
  std::unique_lock lock(mutex_);
  members_ = assignment.members();
  representatives_.clear();
  for (const auto& m : members_) {
    representatives_.push_back(nearest_to_centroid(dataset, m, options_.representatives));
  }
  state_ = LabelState::unlabeled(dataset.size());
  audit_.clear();
  assignment_ = std::move(assignment);
  dataset_ = std::move(dataset);
  restore_locked();
}

Response Session::load_from_request(const std::string& body) {
  const json req = json::parse(body, nullptr, false);
  if (req.is_discarded() || !req.is_object() || !req.contains("dataset") || !req.contains("assignment") ||
      !req["dataset"].is_string() || !req["assignment"].is_string()) {
    return error_response(400, "expected {\"dataset\": path, \"assignment\": path}");
  }
  try {
    Dataset ds = io::read_jsonl(req["dataset"].get<std::string>());
    ClusterAssignment a = io::read_assignment(req["assignment"].get<std::string>(), ds);
    load(std::move(ds), std::move(a));
  } catch (const Error& e) {
    return error_response(e.code() == ErrorCode::IoError ? 404 : 422, e.what());
  }
  return progress();
}

bool Session::loaded() const {
  std::shared_lock lock(mutex_);
  return dataset_.has_value();
}

json Session::summary_locked(int cluster) const {
  const auto c = static_cast<std::size_t>(cluster);
  json reps = json::array();
  for (std::size_t i : representatives_[c]) {
    reps.push_back({{"id", (*dataset_)[i].id}, {"text", (*dataset_)[i].text}});
  }
  const auto it = state_.cluster_labels.find(cluster);
  return {{"id", cluster},
          {"size", members_[c].size()},
          {"label", it == state_.cluster_labels.end() ? json(nullptr) : json(it->second)},
          {"representatives", reps}};
}

Response Session::clusters() const {
  std::shared_lock lock(mutex_);
  if (!dataset_) return no_session();
  std::vector<int> order(members_.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return members_[static_cast<std::size_t>(a)].size() > members_[static_cast<std::size_t>(b)].size();
  });
  json list = json::array();
  for (int c : order) list.push_back(summary_locked(c));
  return ok({{"clusters", list},
             {"total", dataset_->size()},
             {"noise", assignment_.noise_count()},
             {"noise_fraction", assignment_.noise_fraction()}});
}

Response Session::members(int cluster, std::size_t page, std::size_t page_size) const {
  std::shared_lock lock(mutex_);
  if (!dataset_) return no_session();
  if (cluster < 0 || static_cast<std::size_t>(cluster) >= members_.size()) {
    return error_response(404, "unknown cluster " + std::to_string(cluster));
  }
  if (page_size == 0) return error_response(400, "page_size must be >= 1");
  const auto& all = members_[static_cast<std::size_t>(cluster)];
  json rows = json::array();
  if (page < (all.size() + page_size - 1) / page_size) {
    const std::size_t begin = page * page_size;
    const std::size_t end = std::min(all.size(), begin + page_size);
    for (std::size_t k = begin; k < end; ++k) {
      const std::size_t i = all[k];
      const auto& label = state_.utterance_labels[i];
      json row = {{"index", i}, {"id", (*dataset_)[i].id}, {"text", (*dataset_)[i].text}};
      row["intent"] = label ? json(label->intent) : json(nullptr);
      rows.push_back(std::move(row));
    }
  }
  return ok({{"cluster", cluster},
             {"page", page},
             {"page_size", page_size},
             {"total", all.size()},
             {"members", rows}});
}

Response Session::label(int cluster, const std::string& body) {
  std::unique_lock lock(mutex_);
  if (!dataset_) return no_session();
  if (cluster < 0 || static_cast<std::size_t>(cluster) >= members_.size()) {
    return error_response(404, "unknown cluster " + std::to_string(cluster));
  }
  const json req = json::parse(body, nullptr, false);
  if (req.is_discarded() || !req.is_object()) return error_response(400, "expected a JSON object");
  const auto intent = req.find("intent");
  if (intent == req.end() || !intent->is_string() || blank(intent->get<std::string>())) {
    return error_response(422, "intent must be a non-empty string");
  }

  state_.label_cluster(cluster, intent->get<std::string>(), assignment_);
  audit_.push_back(AuditEntry{audit_.size() + 1, io::utc_timestamp(), "label", cluster, intent->get<std::string>(), 0.0});
  persist_locked();
  return ok(summary_locked(cluster));
}

Response Session::propagate(const std::string& body) {
  std::unique_lock lock(mutex_);
  if (!dataset_) return no_session();
  double threshold = options_.default_threshold;
  if (!blank(body)) {
    const json req = json::parse(body, nullptr, false);
    if (req.is_discarded() || !req.is_object()) return error_response(400, "expected a JSON object");
    if (const auto t = req.find("threshold"); t != req.end()) {
      if (!t->is_number()) return error_response(422, "threshold must be a number");
      threshold = t->get<double>();
    }
  }
  if (!(threshold >= 0.0 && threshold <= 1.0)) return error_response(422, "threshold must be in [0, 1]");

  std::vector<std::optional<std::string>> seeds(dataset_->size());
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    const auto& l = state_.utterance_labels[i];
    if (l && l->source == LabelSource::Cluster) seeds[i] = l->intent;
  }

  std::optional<TrainResult> trained;
  try {
    trained.emplace(train_classifier(*dataset_, seeds, options_.training));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::TooFewClasses) throw;
    return error_response(409, "TooFewClasses: label at least two clusters with distinct intents");
  }

  LabelState fresh = state_;
  fresh.clear_propagated();
  state_ = propagate_labels(trained->model, *dataset_, fresh, threshold);

  std::map<std::string, std::size_t> per_intent;
  for (const auto& l : state_.utterance_labels) {
    if (l && l->source == LabelSource::Propagated) ++per_intent[l->intent];
  }
  audit_.push_back(AuditEntry{audit_.size() + 1, io::utc_timestamp(), "propagate", kNoise, {}, threshold});
  persist_locked();

  json out = {{"threshold", threshold},
              {"propagated", state_.count(LabelSource::Propagated)},
              {"remaining_unlabeled", state_.unlabeled_count()},
              {"per_intent", per_intent},
              {"converged", trained->converged}};
  if (!trained->warning.empty()) out["warning"] = trained->warning;
  return ok(out);
}

Response Session::progress() const {
  std::shared_lock lock(mutex_);
  if (!dataset_) return no_session();
  return ok({{"total", dataset_->size()},
             {"clustered", dataset_->size() - assignment_.noise_count()},
             {"labeled", state_.count(LabelSource::Cluster)},
             {"propagated", state_.count(LabelSource::Propagated)},
             {"unlabeled", state_.unlabeled_count()}});
}

Response Session::export_corpus() const {
  std::shared_lock lock(mutex_);
  if (!dataset_) return no_session();
  std::ostringstream out;
  io::write_corpus_jsonl(out, export_training_data(*dataset_, state_));
  return Response{200, out.str(), "application/x-ndjson"};
}

std::vector<AuditEntry> Session::audit_log() const {
  std::shared_lock lock(mutex_);
  return audit_;
}

LabelState Session::label_state() const {
  std::shared_lock lock(mutex_);
  return state_;
}

void Session::persist_locked() const {
  if (!options_.state_path) return;
  json audit = json::array();
  for (const auto& a : audit_) {
    audit.push_back({{"sequence", a.sequence},
                     {"timestamp", a.timestamp},
                     {"action", a.action},
                     {"cluster", a.cluster},
                     {"intent", a.intent},
                     {"threshold", a.threshold}});
  }
  const json doc = {{"records", dataset_->size()},
                    {"num_clusters", assignment_.num_clusters},
                    {"labels", io::to_json(state_)},
                    {"audit", audit}};
  io::write_file_atomic(*options_.state_path, doc.dump() + "\n");
}

void Session::restore_locked() {
  if (!options_.state_path || !std::filesystem::exists(*options_.state_path)) return;
  const json doc = json::parse(io::read_file(*options_.state_path), nullptr, false);
  if (doc.is_discarded() || doc.value("records", std::size_t{0}) != dataset_->size() ||
      doc.value("num_clusters", -1) != assignment_.num_clusters) {
    return;  // state belongs to another dataset or clustering
  }
  LabelState restored = io::label_state_from_json(doc.at("labels"));
  if (restored.utterance_labels.size() != dataset_->size()) return;
  for (const auto& [cluster, intent] : restored.cluster_labels) {
    if (cluster < 0 || cluster >= assignment_.num_clusters) return;
  }
  state_ = std::move(restored);
  audit_.clear();
  for (const auto& a : doc.value("audit", json::array())) {
    audit_.push_back(AuditEntry{a.at("sequence").get<std::uint64_t>(), a.at("timestamp").get<std::string>(),
                                a.at("action").get<std::string>(), a.at("cluster").get<int>(),
                                a.at("intent").get<std::string>(), a.at("threshold").get<double>()});
  }
}

}  // namespace intentmine::api
