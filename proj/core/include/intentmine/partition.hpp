#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "intentmine/dataset.hpp"
#include "intentmine/iter_dbscan.hpp"

namespace intentmine {

inline constexpr std::size_t kPartitionCellSize = 10000;

/// max(ceil(n / 10000), 3).
std::size_t partition_count(std::size_t n);

struct PartitionPlan {
  std::size_t k = 0;
  std::vector<std::size_t> assignment;  // per record, in [0, k)

  /// Record indices of each partition, ascending.
  std::vector<std::vector<std::size_t>> cells() const;
};

/// Spherical Lloyd iterations on the unit rows: points go to the centroid
/// with the smallest cosine distance. Seeded k-means++ style initialization.
/// Empty cells are dropped, so the returned k may be below the requested one.
PartitionPlan kmeans(const Dataset& dataset, std::size_t k, std::uint64_t seed,
                     int max_rounds = 100);

struct PartitionOptions {
  std::size_t threshold = kPartitionCellSize;
  std::size_t parallelism = 1;
  std::uint64_t seed = 0;
};

struct PartitionedResult {
  ClusterAssignment assignment;
  std::vector<IterationTrace> traces;               // one per partition
  std::vector<std::vector<std::size_t>> partitions;  // record indices per partition
};

/// Runs the iterative clustering directly when n <= threshold, otherwise on
/// each k-means cell independently (in parallel) and merges the results.
/// Output does not depend on `parallelism`.
PartitionedResult cluster_partitioned(const Dataset& dataset, const IterDbscanParams& params,
                                      const PartitionOptions& options = {});

}  // namespace intentmine
