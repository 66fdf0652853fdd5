#pragma once

#include <cstddef>
#include <span>

#include "intentmine/dataset.hpp"

namespace intentmine {

struct DbscanParams {
  double eps = 0.1;        // max cosine distance between neighbours
  int min_pts = 5;         // neighbourhood size (self-inclusive) for a core point
  int min_cluster_size = 3;

  void validate() const;
};

/// Classic DBSCAN over `active` (record indices into `dataset`).
///
/// Seeds are scanned in the order given by `active`; a border point belongs
/// to the first cluster that reaches it. Clusters smaller than
/// min_cluster_size are demoted to noise and the result is normalized. The
/// returned labels are parallel to `active`.
ClusterAssignment run_dbscan(const Dataset& dataset, std::span<const std::size_t> active,
                             const DbscanParams& params);

/// Same as above over every record.
ClusterAssignment run_dbscan(const Dataset& dataset, const DbscanParams& params);

}  // namespace intentmine
