#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "intentmine/dataset.hpp"
#include "intentmine/propagate.hpp"

namespace intentmine::api {

struct Response {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

struct AuditEntry {
  std::uint64_t sequence = 0;
  std::string timestamp;
  std::string action;  // "label" or "propagate"
  int cluster = kNoise;
  std::string intent;
  double threshold = 0.0;
};

struct SessionOptions {
  std::optional<std::filesystem::path> state_path;  // persisted after each mutation
  TrainConfig training;
  double default_threshold = 0.7;
  std::size_t representatives = 3;
};

/// Backing store of the labeling service: one dataset, its clustering and the
/// labels assigned so far. Every handler returns a ready-to-send Response.
/// Readers share a lock; mutations are serialized and persisted before the
/// lock is released.
class Session {
 public:
  explicit Session(SessionOptions options = {});

  /// Replaces the loaded dataset. A persisted state file is picked up when it
  /// matches the dataset size and cluster ids.
  void load(Dataset dataset, ClusterAssignment assignment);
  /// POST /session {"dataset": path, "assignment": path}
  Response load_from_request(const std::string& body);

  bool loaded() const;

  Response clusters() const;                                                 // GET /clusters
  Response members(int cluster, std::size_t page, std::size_t page_size) const;  // GET /clusters/{id}/members
  Response label(int cluster, const std::string& body);                      // POST /clusters/{id}/label
  Response propagate(const std::string& body);                               // POST /propagate
  Response progress() const;                                                 // GET /progress
  Response export_corpus() const;                                            // GET /export

  std::vector<AuditEntry> audit_log() const;
  LabelState label_state() const;

 private:
  nlohmann::json summary_locked(int cluster) const;
  void persist_locked() const;
  void restore_locked();

  SessionOptions options_;
  mutable std::shared_mutex mutex_;
  std::optional<Dataset> dataset_;
  ClusterAssignment assignment_;
  std::vector<std::vector<std::size_t>> members_;
  std::vector<std::vector<std::size_t>> representatives_;
  LabelState state_;
  std::vector<AuditEntry> audit_;
};

/// Indices of the `count` members closest (cosine) to the mean of their unit
/// rows; ties keep record order.
std::vector<std::size_t> nearest_to_centroid(const Dataset& dataset,
                                             std::span<const std::size_t> members,
                                             std::size_t count);

}  // namespace intentmine::api
