#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "intentmine/dataset.hpp"

namespace intentmine {

/// 1 - a.b / (|a||b|), clamped to [0, 2].
/// Throws DimensionMismatch on unequal lengths and ZeroNormVector if either
/// vector is all zeros.
double cosine_distance(std::span<const double> a, std::span<const double> b);

/// Distance between two records of a dataset computed from their unit rows.
/// A record is always at distance 0 from itself.
double record_distance(const Dataset& dataset, std::size_t i, std::size_t j) noexcept;

/// Every record j with record_distance(index, j) <= eps, ascending, self
/// included. Exhaustive scan; this is the reference neighborhood.
std::vector<std::size_t> region_query(const Dataset& dataset, std::size_t index, double eps);

/// Exact eps-neighborhood queries restricted to a subset of records.
///
/// Positions handed in and out are offsets into `active`, not record indices.
/// Small subsets are scanned exhaustively. Larger ones are grouped into
/// angular buckets (centroid direction plus max angle to it); a bucket is
/// skipped only when the spherical triangle inequality proves none of its
/// members can be within eps, so the answer always equals the exhaustive scan.
class NeighborIndex {
 public:
  NeighborIndex(const Dataset& dataset, std::span<const std::size_t> active, double eps);

  /// Positions p with record_distance(active[pos], active[p]) <= eps, ascending.
  void query(std::size_t pos, std::vector<std::size_t>& out) const;

  std::size_t size() const noexcept { return active_.size(); }
  double eps() const noexcept { return eps_; }
  std::size_t bucket_count() const noexcept { return bucket_radius_.size(); }

  /// Subsets smaller than this are always scanned exhaustively.
  static constexpr std::size_t kBucketingThreshold = 512;

 private:
  void build_buckets();
  void scan_all(std::size_t pos, std::vector<std::size_t>& out) const;

  const Dataset* dataset_;
  std::vector<std::size_t> active_;
  double eps_;

  std::vector<double> centroid_;                       // bucket_count x dim, unit rows
  std::vector<double> bucket_radius_;                  // radians
  std::vector<double> min_cos_;                        // skip a bucket when q.centroid < this
  std::vector<std::vector<std::size_t>> bucket_members_;  // positions, ascending
};

}  // namespace intentmine
