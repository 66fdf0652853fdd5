#include "intentmine/dbscan.hpp"

#include <deque>
#include <numeric>
#include <string>
#include <vector>

#include "intentmine/error.hpp"
#include "intentmine/neighbors.hpp"

namespace intentmine {

void DbscanParams::validate() const {
  if (!(eps >= 0.0)) throw Error(ErrorCode::InvalidParams, "eps must be >= 0");
  if (min_pts < 1) throw Error(ErrorCode::InvalidParams, "min_pts must be >= 1");
  if (min_cluster_size < 1) throw Error(ErrorCode::InvalidParams, "min_cluster_size must be >= 1");
}

namespace {

constexpr int kUnvisited = -2;

}  // namespace

ClusterAssignment run_dbscan(const Dataset& dataset, std::span<const std::size_t> active,
                             const DbscanParams& params) {
  params.validate();
  if (active.empty()) throw Error(ErrorCode::EmptyActiveSet, "no points to cluster");

  const NeighborIndex index(dataset, active, params.eps);
  const std::size_t m = active.size();
  const auto min_pts = static_cast<std::size_t>(params.min_pts);

  std::vector<int> labels(m, kUnvisited);
  std::vector<std::size_t> neighbours;
  std::vector<std::size_t> grown;
  std::deque<std::size_t> frontier;
  int next_cluster = 0;

  for (std::size_t seed = 0; seed < m; ++seed) {
    if (labels[seed] != kUnvisited) continue;
    index.query(seed, neighbours);
    if (neighbours.size() < min_pts) {
      labels[seed] = kNoise;  // may still become a border point later
      continue;
    }

    const int cluster = next_cluster++;
    labels[seed] = cluster;
    frontier.clear();
    auto absorb = [&](const std::vector<std::size_t>& found) {
      for (std::size_t q : found) {
        if (labels[q] == kNoise) {
          labels[q] = cluster;  // border point, claimed by the first cluster to reach it
        } else if (labels[q] == kUnvisited) {
          labels[q] = cluster;
          frontier.push_back(q);
        }
      }
    };
    absorb(neighbours);
    while (!frontier.empty()) {
      const std::size_t p = frontier.front();
      frontier.pop_front();
      index.query(p, grown);
      if (grown.size() >= min_pts) absorb(grown);
    }
  }

  // Undersized clusters become noise.
  std::vector<std::size_t> sizes(static_cast<std::size_t>(next_cluster), 0);
  for (int l : labels) {
    if (l >= 0) ++sizes[static_cast<std::size_t>(l)];
  }
  const auto min_size = static_cast<std::size_t>(params.min_cluster_size);
  for (int& l : labels) {
    if (l >= 0 && sizes[static_cast<std::size_t>(l)] < min_size) l = kNoise;
  }
  return normalize_assignment(labels);
}

ClusterAssignment run_dbscan(const Dataset& dataset, const DbscanParams& params) {
  std::vector<std::size_t> all(dataset.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return run_dbscan(dataset, all, params);
}

}  // namespace intentmine
