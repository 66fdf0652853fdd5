#include "intentmine/dataset.hpp"

#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "intentmine/error.hpp"

namespace intentmine {

Dataset validate_dataset(std::vector<UtteranceRecord> records) {
  if (records.empty()) throw Error(ErrorCode::EmptyDataset, "no records");

  const std::size_t dim = records.front().embedding.size();
  if (dim == 0) throw Error(ErrorCode::DimensionMismatch, records.front().id + " (empty embedding)", 0);

  std::unordered_set<std::string> seen;
  seen.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if (r.embedding.size() != dim) {
      throw Error(ErrorCode::DimensionMismatch,
                  r.id + " has " + std::to_string(r.embedding.size()) + " components, expected " +
                      std::to_string(dim),
                  i);
    }
    for (double v : r.embedding) {
      if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteValue, r.id, i);
    }
    if (!seen.insert(r.id).second) throw Error(ErrorCode::DuplicateId, r.id, i);
  }

  Dataset ds;
  ds.dimension_ = dim;
  ds.unit_.resize(records.size() * dim);
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& e = records[i].embedding;
    double sq = 0.0;
    for (double v : e) sq += v * v;
    const double norm = std::sqrt(sq);
    if (!(norm > 0.0) || !std::isfinite(norm)) throw Error(ErrorCode::ZeroNormVector, records[i].id, i);
    for (std::size_t k = 0; k < dim; ++k) ds.unit_[i * dim + k] = e[k] / norm;
  }
  ds.records_ = std::move(records);
  return ds;
}

bool Dataset::has_gold_labels() const noexcept {
  for (const auto& r : records_) {
    if (!r.gold_label) return false;
  }
  return !records_.empty();
}

std::vector<int> Dataset::gold_ids() const {
  std::unordered_map<std::string, int> ids;
  std::vector<int> out;
  out.reserve(records_.size());
  for (const auto& r : records_) {
    if (!r.gold_label) throw Error(ErrorCode::LabelsMissing, "record " + r.id + " has no gold label");
    auto [it, inserted] = ids.try_emplace(*r.gold_label, static_cast<int>(ids.size()));
    out.push_back(it->second);
  }
  return out;
}

std::vector<std::string> Dataset::gold_names() const {
  std::unordered_set<std::string> seen;
  std::vector<std::string> names;
  for (const auto& r : records_) {
    if (r.gold_label && seen.insert(*r.gold_label).second) names.push_back(*r.gold_label);
  }
  return names;
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  std::vector<UtteranceRecord> rows;
  rows.reserve(indices.size());
  for (std::size_t i : indices) {
    if (i >= size()) throw Error(ErrorCode::IndexOutOfRange, std::to_string(i));
    rows.push_back(records_[i]);
  }
  return validate_dataset(std::move(rows));
}

std::size_t ClusterAssignment::noise_count() const noexcept {
  std::size_t n = 0;
  for (int l : labels) n += (l == kNoise);
  return n;
}

double ClusterAssignment::noise_fraction() const noexcept {
  return labels.empty() ? 0.0 : static_cast<double>(noise_count()) / static_cast<double>(labels.size());
}

std::vector<std::vector<std::size_t>> ClusterAssignment::members() const {
  std::vector<std::vector<std::size_t>> out(static_cast<std::size_t>(num_clusters));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] >= 0 && labels[i] < num_clusters) out[static_cast<std::size_t>(labels[i])].push_back(i);
  }
  return out;
}

ClusterAssignment normalize_assignment(std::span<const int> raw_labels) {
  ClusterAssignment out;
  out.labels.reserve(raw_labels.size());
  std::unordered_map<int, int> remap;
  for (int raw : raw_labels) {
    if (raw < 0) {
      out.labels.push_back(kNoise);
      continue;
    }
    auto [it, inserted] = remap.try_emplace(raw, static_cast<int>(remap.size()));
    out.labels.push_back(it->second);
  }
  out.num_clusters = static_cast<int>(remap.size());
  return out;
}

}  // namespace intentmine
