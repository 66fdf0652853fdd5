#include "intentmine/iter_dbscan.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "intentmine/dbscan.hpp"
#include "intentmine/error.hpp"

namespace intentmine {

void IterDbscanParams::validate() const {
  auto fail = [](const std::string& why) { throw Error(ErrorCode::InvalidParams, why); };
  if (!std::isfinite(initial_min_distance) || initial_min_distance < 0.0) {
    fail("initial_min_distance must be >= 0");
  }
  if (min_points < 1) fail("min_points must be >= 1");
  if (initial_number_of_points < min_points) {
    fail("initial_number_of_points (" + std::to_string(initial_number_of_points) +
         ") must be >= min_points (" + std::to_string(min_points) + ")");
  }
  if (!std::isfinite(delta_min_distance) || delta_min_distance < 0.0) {
    fail("delta_min_distance must be >= 0");
  }
  if (delta_number_of_points < 0) fail("delta_number_of_points must be >= 0");
  if (max_iteration < 1) fail("max_iteration must be >= 1");
  if (min_cluster_size < 1) fail("min_cluster_size must be >= 1");
}

double IterDbscanParams::eps_at(int round) const noexcept {
  return initial_min_distance + static_cast<double>(round - 1) * delta_min_distance;
}

int IterDbscanParams::min_pts_at(int round) const noexcept {
  const long long k = static_cast<long long>(initial_number_of_points) -
                      static_cast<long long>(round - 1) * delta_number_of_points;
  return static_cast<int>(std::max<long long>(k, min_points));
}

IterDbscanResult run_iter_dbscan(const Dataset& dataset, std::span<const std::size_t> subset,
                                 const IterDbscanParams& params) {
  params.validate();
  if (subset.empty()) throw Error(ErrorCode::EmptyDataset, "nothing to cluster");

  IterDbscanResult result;
  std::vector<int> raw(subset.size(), kNoise);
  // Positions (into subset) still unclustered.
  std::vector<std::size_t> pending(subset.size());
  std::iota(pending.begin(), pending.end(), std::size_t{0});
  std::vector<std::size_t> active;
  int next_id = 0;

  for (int round = 1; round <= params.max_iteration && !pending.empty(); ++round) {
    const int min_pts = params.min_pts_at(round);
    if (min_pts == params.min_points) break;

    const DbscanParams step{params.eps_at(round), min_pts, params.min_cluster_size};
    active.resize(pending.size());
    std::transform(pending.begin(), pending.end(), active.begin(),
                   [&](std::size_t pos) { return subset[pos]; });
    const ClusterAssignment found = run_dbscan(dataset, active, step);

    std::vector<std::size_t> still_noise;
    for (std::size_t k = 0; k < pending.size(); ++k) {
      if (found.labels[k] == kNoise) {
        still_noise.push_back(pending[k]);
      } else {
        raw[pending[k]] = next_id + found.labels[k];
      }
    }
    next_id += found.num_clusters;
    pending = std::move(still_noise);

    result.trace.push_back(
        IterationRound{round, step.eps, step.min_pts, found.num_clusters, pending.size()});
  }

  result.assignment = normalize_assignment(raw);
  return result;
}

IterDbscanResult run_iter_dbscan(const Dataset& dataset, const IterDbscanParams& params) {
  if (dataset.empty()) throw Error(ErrorCode::EmptyDataset, "nothing to cluster");
  std::vector<std::size_t> all(dataset.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return run_iter_dbscan(dataset, all, params);
}

std::vector<IterDbscanParams> default_grid() {
  constexpr double kInitialDistances[] = {0.09, 0.12, 0.15, 0.20, 0.30};
  std::vector<IterDbscanParams> grid;
  grid.reserve(480);
  for (double distance : kInitialDistances) {
    for (int max_iteration = 10; max_iteration <= 15; ++max_iteration) {
      for (int points = 10; points <= 25; ++points) {
        IterDbscanParams p;
        p.initial_min_distance = distance;
        p.initial_number_of_points = points;
        p.delta_min_distance = 0.01;
        p.delta_number_of_points = 1;
        p.min_points = 3;
        p.max_iteration = max_iteration;
        p.min_cluster_size = 3;
        grid.push_back(p);
      }
    }
  }
  return grid;
}

}  // namespace intentmine
