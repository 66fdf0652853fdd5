#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "intentmine/dataset.hpp"

namespace intentmine {

/// Tunables of the iterative density-relaxation clustering.
struct IterDbscanParams {
  double initial_min_distance = 0.12;
  int initial_number_of_points = 15;
  double delta_min_distance = 0.01;
  int delta_number_of_points = 1;
  int min_points = 3;
  int max_iteration = 12;
  int min_cluster_size = 3;

  /// Throws InvalidParams.
  void validate() const;

  /// Schedule for 1-based round i. eps grows by delta_min_distance per round,
  /// min_pts shrinks by delta_number_of_points and never drops below min_points.
  double eps_at(int round) const noexcept;
  int min_pts_at(int round) const noexcept;

  friend bool operator==(const IterDbscanParams&, const IterDbscanParams&) = default;
};

struct IterationRound {
  int iteration = 0;
  double eps = 0.0;
  int min_pts = 0;
  int clusters_found = 0;
  std::size_t noise_remaining = 0;

  friend bool operator==(const IterationRound&, const IterationRound&) = default;
};

using IterationTrace = std::vector<IterationRound>;

struct IterDbscanResult {
  ClusterAssignment assignment;
  IterationTrace trace;
};

/// Runs DBSCAN repeatedly on whatever is still noise, relaxing density each
/// round, until min_pts reaches min_points, max_iteration rounds ran, or no
/// noise is left. Points clustered in a round keep that cluster.
IterDbscanResult run_iter_dbscan(const Dataset& dataset, const IterDbscanParams& params);

/// Restricted to `subset` (record indices). Labels are parallel to `subset`.
IterDbscanResult run_iter_dbscan(const Dataset& dataset, std::span<const std::size_t> subset,
                                 const IterDbscanParams& params);

/// 5 initial distances x max_iteration 10..15 x initial points 10..25, with
/// delta distance 0.01, delta points 1, min points 3, min cluster size 3.
/// Ordered distance-major, then max_iteration, then initial points.
std::vector<IterDbscanParams> default_grid();

}  // namespace intentmine
