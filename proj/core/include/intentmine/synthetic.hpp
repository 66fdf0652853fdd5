#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "intentmine/dataset.hpp"

namespace intentmine::synthetic {

struct Blob {
  std::size_t size = 0;
  double spread = 0.05;  // std-dev of per-component gaussian noise around a unit centre
};

/// Gaussian blobs around random unit directions, shuffled with the same seed.
/// Records get ids "u<index>", gold labels "intent_<blob>".
std::vector<UtteranceRecord> make_blob_records(std::size_t dimension, const std::vector<Blob>& blobs,
                                               std::uint64_t seed);
Dataset make_blob_dataset(std::size_t dimension, const std::vector<Blob>& blobs, std::uint64_t seed);

/// n points spread over roughly n / points_per_intent equal blobs; used by the
/// scaling benchmark.
Dataset make_benchmark_dataset(std::size_t n, std::uint64_t seed, std::size_t dimension = 32,
                               std::size_t points_per_intent = 200);

}  // namespace intentmine::synthetic
