#include "intentmine/neighbors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "intentmine/error.hpp"

namespace intentmine {

namespace {

inline double dot(const double* a, const double* b, std::size_t n) noexcept {
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) s += a[k] * b[k];
  return s;
}

inline double clamp_distance(double d) noexcept { return std::clamp(d, 0.0, 2.0); }

// Angular slack for the bucket bound. acos is ill-conditioned near 0, where a
// rounding error of ~1e-16 in the dot product moves the angle by ~1.5e-8.
constexpr double kAngleSlack = 1e-6;

}  // namespace

double cosine_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                std::to_string(a.size()) + " vs " + std::to_string(b.size()));
  }
  double ab = 0.0, aa = 0.0, bb = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    ab += a[k] * b[k];
    aa += a[k] * a[k];
    bb += b[k] * b[k];
  }
  if (aa == 0.0 || bb == 0.0) throw Error(ErrorCode::ZeroNormVector, "cosine distance undefined");
  return clamp_distance(1.0 - ab / (std::sqrt(aa) * std::sqrt(bb)));
}

double record_distance(const Dataset& dataset, std::size_t i, std::size_t j) noexcept {
  if (i == j) return 0.0;
  const std::size_t d = dataset.dimension();
  const double* base = dataset.unit_matrix().data();
  return clamp_distance(1.0 - dot(base + i * d, base + j * d, d));
}

std::vector<std::size_t> region_query(const Dataset& dataset, std::size_t index, double eps) {
  if (index >= dataset.size()) {
    throw Error(ErrorCode::IndexOutOfRange,
                std::to_string(index) + " >= " + std::to_string(dataset.size()));
  }
  if (!(eps >= 0.0)) throw Error(ErrorCode::InvalidParams, "eps must be >= 0");
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < dataset.size(); ++j) {
    if (record_distance(dataset, index, j) <= eps) out.push_back(j);
  }
  return out;
}

NeighborIndex::NeighborIndex(const Dataset& dataset, std::span<const std::size_t> active, double eps)
    : dataset_(&dataset), active_(active.begin(), active.end()), eps_(eps) {
  if (!(eps >= 0.0)) throw Error(ErrorCode::InvalidParams, "eps must be >= 0");
  for (std::size_t i : active_) {
    if (i >= dataset.size()) throw Error(ErrorCode::IndexOutOfRange, std::to_string(i));
  }
  if (active_.size() >= kBucketingThreshold && eps < 2.0) build_buckets();
}

void NeighborIndex::build_buckets() {
  const std::size_t m = active_.size();
  const std::size_t d = dataset_->dimension();
  const double* base = dataset_->unit_matrix().data();
  const std::size_t b = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(m))));

  // Farthest-first traversal for the initial centres (deterministic, covers
  // every well separated group), then a few spherical Lloyd rounds. Bucket
  // quality only affects speed, never the query result.
  centroid_.assign(b * d, 0.0);
  {
    std::vector<double> closest(m, -std::numeric_limits<double>::infinity());
    std::size_t pick = 0;
    for (std::size_t c = 0; c < b; ++c) {
      const double* centre = base + active_[pick] * d;
      std::copy(centre, centre + d, centroid_.begin() + static_cast<std::ptrdiff_t>(c * d));
      double lowest = std::numeric_limits<double>::infinity();
      for (std::size_t p = 0; p < m; ++p) {
        closest[p] = std::max(closest[p], dot(base + active_[p] * d, centre, d));
        if (closest[p] < lowest) {
          lowest = closest[p];
          pick = p;
        }
      }
    }
  }

  std::vector<std::size_t> owner(m, 0);
  std::vector<double> best_dot(m, 0.0);
  auto assign = [&] {
    for (std::size_t p = 0; p < m; ++p) {
      const double* row = base + active_[p] * d;
      double best = -std::numeric_limits<double>::infinity();
      std::size_t arg = 0;
      for (std::size_t c = 0; c < b; ++c) {
        const double s = dot(row, centroid_.data() + c * d, d);
        if (s > best) {
          best = s;
          arg = c;
        }
      }
      owner[p] = arg;
      best_dot[p] = best;
    }
  };

  constexpr int kRounds = 1;
  for (int round = 0; round < kRounds; ++round) {
    assign();
    std::vector<double> sum(b * d, 0.0);
    std::vector<std::size_t> count(b, 0);
    for (std::size_t p = 0; p < m; ++p) {
      const double* row = base + active_[p] * d;
      double* acc = sum.data() + owner[p] * d;
      for (std::size_t k = 0; k < d; ++k) acc[k] += row[k];
      ++count[owner[p]];
    }
    for (std::size_t c = 0; c < b; ++c) {
      if (count[c] == 0) continue;
      double* acc = sum.data() + c * d;
      const double norm = std::sqrt(dot(acc, acc, d));
      if (norm <= 0.0) continue;
      for (std::size_t k = 0; k < d; ++k) centroid_[c * d + k] = acc[k] / norm;
    }
  }
  assign();

  bucket_members_.assign(b, {});
  bucket_radius_.assign(b, 0.0);
  for (std::size_t p = 0; p < m; ++p) {
    bucket_members_[owner[p]].push_back(p);
    const double angle = std::acos(std::clamp(best_dot[p], -1.0, 1.0));
    bucket_radius_[owner[p]] = std::max(bucket_radius_[owner[p]], angle);
  }

  // angle(q, x) >= angle(q, centre) - radius, so a bucket can hold a
  // neighbour only if angle(q, centre) <= eps_angle + radius (+ slack).
  // Comparing cosines avoids an acos per bucket and query.
  const double eps_angle = std::acos(std::clamp(1.0 - eps_, -1.0, 1.0));
  min_cos_.resize(b);
  for (std::size_t c = 0; c < b; ++c) {
    const double reach = eps_angle + bucket_radius_[c] + kAngleSlack;
    min_cos_[c] = reach >= std::numbers::pi ? -std::numeric_limits<double>::infinity() : std::cos(reach);
  }
}

void NeighborIndex::scan_all(std::size_t pos, std::vector<std::size_t>& out) const {
  const std::size_t q = active_[pos];
  for (std::size_t p = 0; p < active_.size(); ++p) {
    if (record_distance(*dataset_, q, active_[p]) <= eps_) out.push_back(p);
  }
}

void NeighborIndex::query(std::size_t pos, std::vector<std::size_t>& out) const {
  out.clear();
  if (pos >= active_.size()) throw Error(ErrorCode::IndexOutOfRange, std::to_string(pos));
  if (bucket_radius_.empty()) {
    scan_all(pos, out);
    return;
  }

  const std::size_t d = dataset_->dimension();
  const std::size_t q = active_[pos];
  const double* row = dataset_->unit_matrix().data() + q * d;
  for (std::size_t c = 0; c < bucket_members_.size(); ++c) {
    if (bucket_members_[c].empty()) continue;
    // Small extra margin on the cosine comparison for rounding in the dot.
    if (dot(row, centroid_.data() + c * d, d) < min_cos_[c] - 1e-12) continue;
    for (std::size_t p : bucket_members_[c]) {
      if (record_distance(*dataset_, q, active_[p]) <= eps_) out.push_back(p);
    }
  }
  std::sort(out.begin(), out.end());
}

}  // namespace intentmine
