#include "intentmine/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "intentmine/detail/random.hpp"
#include "intentmine/error.hpp"

namespace intentmine::synthetic {

std::vector<UtteranceRecord> make_blob_records(std::size_t dimension, const std::vector<Blob>& blobs,
                                               std::uint64_t seed) {
  if (dimension == 0) throw Error(ErrorCode::InvalidParams, "dimension must be >= 1");
  detail::Rng rng(seed);

  std::vector<std::vector<double>> centres;
  for (std::size_t b = 0; b < blobs.size(); ++b) {
    std::vector<double> c(dimension);
    double norm = 0.0;
    while (norm == 0.0) {
      for (double& x : c) x = rng.normal();
      norm = 0.0;
      for (double x : c) norm += x * x;
      norm = std::sqrt(norm);
    }
    for (double& x : c) x /= norm;
    centres.push_back(std::move(c));
  }

  std::vector<UtteranceRecord> records;
  for (std::size_t b = 0; b < blobs.size(); ++b) {
    for (std::size_t k = 0; k < blobs[b].size; ++k) {
      UtteranceRecord r;
      r.embedding.resize(dimension);
      for (std::size_t j = 0; j < dimension; ++j) r.embedding[j] = centres[b][j] + blobs[b].spread * rng.normal();
      r.gold_label = "intent_" + std::to_string(b);
      r.text = "utterance " + std::to_string(k) + " about intent " + std::to_string(b);
      records.push_back(std::move(r));
    }
  }

  // Fisher-Yates with the same generator, so ingestion order interleaves blobs.
  for (std::size_t i = records.size(); i > 1; --i) std::swap(records[i - 1], records[rng.index(i)]);
  for (std::size_t i = 0; i < records.size(); ++i) records[i].id = "u" + std::to_string(i);
  return records;
}

Dataset make_blob_dataset(std::size_t dimension, const std::vector<Blob>& blobs, std::uint64_t seed) {
  return validate_dataset(make_blob_records(dimension, blobs, seed));
}

Dataset make_benchmark_dataset(std::size_t n, std::uint64_t seed, std::size_t dimension,
                               std::size_t points_per_intent) {
  if (n == 0 || points_per_intent == 0) throw Error(ErrorCode::InvalidParams, "empty benchmark dataset");
  const std::size_t intents = std::max<std::size_t>(1, n / points_per_intent);
  std::vector<Blob> blobs(intents, Blob{n / intents, 0.03});
  for (std::size_t k = 0; k < n % intents; ++k) ++blobs[k].size;
  return make_blob_dataset(dimension, blobs, seed);
}

}  // namespace intentmine::synthetic
