#include "intentmine/partition.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

#include "intentmine/detail/random.hpp"
#include "intentmine/error.hpp"

namespace intentmine {

std::size_t partition_count(std::size_t n) {
  const std::size_t cells = (n + kPartitionCellSize - 1) / kPartitionCellSize;
  return std::max<std::size_t>(cells, 3);
}

std::vector<std::vector<std::size_t>> PartitionPlan::cells() const {
  std::vector<std::vector<std::size_t>> out(k);
  for (std::size_t i = 0; i < assignment.size(); ++i) out[assignment[i]].push_back(i);
  return out;
}

namespace {

double dot(const double* a, const double* b, std::size_t n) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

PartitionPlan kmeans(const Dataset& dataset, std::size_t k, std::uint64_t seed, int max_rounds) {
  const std::size_t n = dataset.size();
  const std::size_t d = dataset.dimension();
  if (k == 0) throw Error(ErrorCode::InvalidParams, "k must be >= 1");
  if (k > n) {
    throw Error(ErrorCode::KTooLarge, "k=" + std::to_string(k) + " exceeds n=" + std::to_string(n));
  }
  const double* rows = dataset.unit_matrix().data();

  // k-means++ seeding: first centre uniform, later ones drawn proportional to
  // the squared distance to the nearest chosen centre.
  detail::Rng rng(seed);
  std::vector<double> centroids(k * d);
  std::vector<double> weight(n, std::numeric_limits<double>::infinity());
  std::size_t pick = rng.index(n);
  for (std::size_t c = 0; c < k; ++c) {
    std::copy(rows + pick * d, rows + (pick + 1) * d, centroids.begin() + static_cast<std::ptrdiff_t>(c * d));
    if (c + 1 == k) break;
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double dist = std::max(1.0 - dot(rows + i * d, centroids.data() + c * d, d), 0.0);
      weight[i] = std::min(weight[i], dist * dist);
      total += weight[i];
    }
    if (total <= 0.0) {
      pick = rng.index(n);  // every point coincides with a centre already
      continue;
    }
    double target = rng.uniform() * total;
    pick = n - 1;
    for (std::size_t i = 0; i < n; ++i) {
      target -= weight[i];
      if (target < 0.0 && weight[i] > 0.0) {
        pick = i;
        break;
      }
    }
  }

  // Lloyd rounds with Hamerly bounds. On unit vectors the Euclidean distance
  // sqrt(2 - 2 cos) is monotone in cosine distance, so bounds kept in
  // Euclidean terms decide when a point provably keeps its centroid and
  // the full scan can be skipped; the assignments equal plain Lloyd's.
  auto euclid = [](double cosine_dist) { return std::sqrt(std::max(0.0, 2.0 * cosine_dist)); };
  constexpr double kBoundSlack = 1e-9;

  std::vector<std::size_t> assignment(n, 0);
  std::vector<double> upper(n), lower(n);
  auto full_scan = [&](std::size_t i) {
    const double* row = rows + i * d;
    double best = std::numeric_limits<double>::infinity(), second = best;
    std::size_t arg = 0;
    for (std::size_t c = 0; c < k; ++c) {
      const double dist = 1.0 - dot(row, centroids.data() + c * d, d);
      if (dist < best) {
        second = best;
        best = dist;
        arg = c;
      } else if (dist < second) {
        second = dist;
      }
    }
    upper[i] = euclid(best);
    lower[i] = k > 1 ? euclid(second) : std::numeric_limits<double>::infinity();
    return arg;
  };
  for (std::size_t i = 0; i < n; ++i) assignment[i] = full_scan(i);

  std::vector<double> sum(k * d, 0.0);
  std::vector<std::size_t> count(k, 0);
  for (std::size_t i = 0; i < n; ++i) {
    double* acc = sum.data() + assignment[i] * d;
    for (std::size_t j = 0; j < d; ++j) acc[j] += rows[i * d + j];
    ++count[assignment[i]];
  }

  std::vector<double> moved(k, 0.0), previous(d);
  for (int round = 0; round < max_rounds; ++round) {
    for (std::size_t c = 0; c < k; ++c) {
      moved[c] = 0.0;
      if (count[c] == 0) continue;  // keep the old centre; an empty cell is dropped at the end
      const double* acc = sum.data() + c * d;
      const double norm = std::sqrt(dot(acc, acc, d));
      if (norm <= 0.0) continue;
      double* centre = centroids.data() + c * d;
      std::copy(centre, centre + d, previous.begin());
      double shift = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        centre[j] = acc[j] / norm;
        shift += (centre[j] - previous[j]) * (centre[j] - previous[j]);
      }
      moved[c] = std::sqrt(shift);
    }
    std::size_t fastest = 0;
    for (std::size_t c = 1; c < k; ++c) {
      if (moved[c] > moved[fastest]) fastest = c;
    }
    double runner_up = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      if (c != fastest) runner_up = std::max(runner_up, moved[c]);
    }

    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t a = assignment[i];
      upper[i] += moved[a];
      lower[i] -= a == fastest ? runner_up : moved[fastest];
      if (upper[i] + kBoundSlack < lower[i]) continue;
      upper[i] = euclid(1.0 - dot(rows + i * d, centroids.data() + a * d, d));
      if (upper[i] + kBoundSlack < lower[i]) continue;
      const std::size_t c = full_scan(i);
      if (c == a) continue;
      const double* row = rows + i * d;
      for (std::size_t j = 0; j < d; ++j) {
        sum[a * d + j] -= row[j];
        sum[c * d + j] += row[j];
      }
      --count[a];
      ++count[c];
      assignment[i] = c;
      changed = true;
    }
    if (!changed) break;
  }

  // Drop empty cells and renumber the rest in centroid order.
  std::vector<std::size_t> used(k, 0);
  for (std::size_t a : assignment) used[a] = 1;
  std::vector<std::size_t> renumber(k, 0);
  std::size_t live = 0;
  for (std::size_t c = 0; c < k; ++c) {
    if (used[c]) renumber[c] = live++;
  }
  for (std::size_t& a : assignment) a = renumber[a];
  return PartitionPlan{live, std::move(assignment)};
}

PartitionedResult cluster_partitioned(const Dataset& dataset, const IterDbscanParams& params,
                                      const PartitionOptions& options) {
  params.validate();
  if (dataset.empty()) throw Error(ErrorCode::EmptyDataset, "nothing to cluster");

  PartitionedResult result;
  const std::size_t n = dataset.size();
  if (n <= options.threshold) {
    auto single = run_iter_dbscan(dataset, params);
    result.assignment = std::move(single.assignment);
    result.traces.push_back(std::move(single.trace));
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), std::size_t{0});
    result.partitions.push_back(std::move(all));
    return result;
  }

  const PartitionPlan plan = kmeans(dataset, partition_count(n), options.seed);
  result.partitions = plan.cells();
  const std::size_t parts = result.partitions.size();

  std::vector<IterDbscanResult> outputs(parts);
  std::vector<std::exception_ptr> errors(parts);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t p = next.fetch_add(1); p < parts; p = next.fetch_add(1)) {
      try {
        outputs[p] = run_iter_dbscan(dataset, result.partitions[p], params);
      } catch (...) {
        errors[p] = std::current_exception();
      }
    }
  };
  const std::size_t workers = std::clamp<std::size_t>(options.parallelism, 1, parts);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  // Offset per-partition ids so they are globally unique, then normalize.
  std::vector<int> raw(n, kNoise);
  int offset = 0;
  for (std::size_t p = 0; p < parts; ++p) {
    const auto& cell = result.partitions[p];
    const auto& labels = outputs[p].assignment.labels;
    for (std::size_t k = 0; k < cell.size(); ++k) {
      if (labels[k] != kNoise) raw[cell[k]] = offset + labels[k];
    }
    offset += outputs[p].assignment.num_clusters;
    result.traces.push_back(std::move(outputs[p].trace));
  }
  result.assignment = normalize_assignment(raw);
  return result;
}

}  // namespace intentmine
