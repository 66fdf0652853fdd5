#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace intentmine {

inline constexpr int kNoise = -1;

struct UtteranceRecord {
  std::string id;
  std::string text;
  std::vector<double> embedding;
  std::optional<std::string> gold_label;
};

/// Ordered, validated collection of utterances. Immutable once built; record
/// order is the ingestion order and every algorithm iterates in that order.
///
/// Alongside the raw embeddings the dataset keeps a row-major matrix of
/// unit-length copies, which is what the cosine-based algorithms consume.
class Dataset {
 public:
  std::size_t size() const noexcept { return records_.size(); }
  std::size_t dimension() const noexcept { return dimension_; }
  bool empty() const noexcept { return records_.empty(); }

  const std::vector<UtteranceRecord>& records() const noexcept { return records_; }
  const UtteranceRecord& operator[](std::size_t i) const { return records_[i]; }

  std::span<const double> unit_row(std::size_t i) const noexcept {
    return {unit_.data() + i * dimension_, dimension_};
  }
  std::span<const double> unit_matrix() const noexcept { return unit_; }

  bool has_gold_labels() const noexcept;

  /// Gold intents mapped to dense ids in order of first appearance.
  /// Throws LabelsMissing if any record lacks a gold label.
  std::vector<int> gold_ids() const;
  /// Intent names indexed by the ids returned from gold_ids().
  std::vector<std::string> gold_names() const;

  /// Rows `indices` as a new dataset (order preserved).
  Dataset subset(std::span<const std::size_t> indices) const;

 private:
  friend Dataset validate_dataset(std::vector<UtteranceRecord> records);

  std::vector<UtteranceRecord> records_;
  std::size_t dimension_ = 0;
  std::vector<double> unit_;
};

/// Checks ids, dimensions and finiteness, rejects zero-norm embeddings.
Dataset validate_dataset(std::vector<UtteranceRecord> records);

struct ClusterAssignment {
  std::vector<int> labels;
  int num_clusters = 0;

  std::size_t noise_count() const noexcept;
  double noise_fraction() const noexcept;
  /// members[c] lists record indices of cluster c in ascending order.
  std::vector<std::vector<std::size_t>> members() const;

  friend bool operator==(const ClusterAssignment&, const ClusterAssignment&) = default;
};

/// Remaps non-noise ids to 0..k-1 by first appearance; noise stays kNoise.
ClusterAssignment normalize_assignment(std::span<const int> raw_labels);

}  // namespace intentmine
