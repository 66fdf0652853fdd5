#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <vector>

#include "fixtures.hpp"
#include "intentmine/dbscan.hpp"
#include "intentmine/error.hpp"
#include "intentmine/iter_dbscan.hpp"
#include "intentmine/metrics.hpp"
#include "oracles.hpp"

using namespace intentmine;

namespace {

// 60 near-duplicates of e0 followed by 6 points spread around e7, pairwise
// cosine distance 0.105 within the sparse group.
fixtures::Points dense_and_sparse() {
  constexpr std::size_t dim = 8;
  fixtures::Points pts;
  for (std::size_t i = 0; i < 60; ++i) {
    std::vector<double> v(dim, 0.0);
    v[0] = 1.0;
    v[1 + i % 6] = 1e-3 * static_cast<double>(1 + i % 5);
    pts.push_back(v);
  }
  const double a = std::sqrt(0.105 / (1.0 - 0.105));
  for (std::size_t k = 0; k < 6; ++k) {
    std::vector<double> v(dim, 0.0);
    v[7] = 1.0;
    v[1 + k] = a;
    pts.push_back(v);
  }
  return pts;
}

IterDbscanParams imbalanced_params() {
  IterDbscanParams p;
  p.initial_min_distance = 0.09;
  p.initial_number_of_points = 10;
  p.delta_min_distance = 0.01;
  p.delta_number_of_points = 1;
  p.min_points = 3;
  p.max_iteration = 10;
  return p;
}

}  // namespace

TEST(IterDbscan, SingleRoundEqualsDbscan) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto ds = fixtures::make_dataset(fixtures::clumpy_points(120, 4, seed));
    IterDbscanParams p;
    p.initial_min_distance = 0.04;
    p.initial_number_of_points = 6;
    p.max_iteration = 1;
    const auto iter = run_iter_dbscan(ds, p);
    EXPECT_EQ(iter.assignment, run_dbscan(ds, {0.04, 6, 3}));
    ASSERT_EQ(iter.trace.size(), 1u);
    p.delta_min_distance = 0.0;
    p.delta_number_of_points = 0;
    EXPECT_EQ(run_iter_dbscan(ds, p).assignment, iter.assignment);
  }
}

TEST(IterDbscan, RecoversSparseBlob) {
  const auto pts = dense_and_sparse();
  const auto ds = fixtures::make_dataset(pts);
  const auto p = imbalanced_params();

  const auto single = run_dbscan(ds, {0.09, 10, 3});
  EXPECT_EQ(single.num_clusters, 1);
  for (std::size_t i = 60; i < 66; ++i) EXPECT_EQ(single.labels[i], kNoise);

  const auto iter = run_iter_dbscan(ds, p);
  EXPECT_EQ(iter.assignment.num_clusters, 2);
  EXPECT_EQ(iter.assignment.noise_count(), 0u);
  for (std::size_t i = 0; i < 60; ++i) EXPECT_EQ(iter.assignment.labels[i], 0);
  for (std::size_t i = 60; i < 66; ++i) EXPECT_EQ(iter.assignment.labels[i], 1);

  const auto table = oracle::distance_table(pts);
  EXPECT_EQ(iter.assignment.labels, oracle::iter_dbscan(table, 0.09, 10, 0.01, 1, 3, 10, 3));

  // Round 1 takes the dense blob; the sparse one appears once min_pts reaches 6 (round 5).
  ASSERT_EQ(iter.trace.size(), 5u);  // stops early: no noise left
  EXPECT_EQ(iter.trace[0].clusters_found, 1);
  EXPECT_EQ(iter.trace[0].noise_remaining, 6u);
  EXPECT_EQ(iter.trace[4].min_pts, 6);
  EXPECT_NEAR(iter.trace[4].eps, 0.13, 1e-12);
  EXPECT_EQ(iter.trace[4].clusters_found, 1);
  EXPECT_EQ(iter.trace[4].noise_remaining, 0u);
}

TEST(IterDbscan, OrthogonalStaysNoise) {
  fixtures::Points pts(12, std::vector<double>(12, 0.0));
  for (std::size_t i = 0; i < 12; ++i) pts[i][i] = 1.0;
  const auto ds = fixtures::make_dataset(pts);
  IterDbscanParams p;  // K0 = 15, min_points = 3: rounds with min_pts 15..4
  p.max_iteration = 15;
  const auto r = run_iter_dbscan(ds, p);
  EXPECT_EQ(r.assignment.noise_count(), 12u);
  ASSERT_EQ(r.trace.size(), 12u);
  for (const auto& round : r.trace) {
    EXPECT_EQ(round.clusters_found, 0);
    EXPECT_EQ(round.noise_remaining, 12u);
  }
  p.max_iteration = 5;
  EXPECT_EQ(run_iter_dbscan(ds, p).trace.size(), 5u);
}

TEST(IterDbscan, ScheduleAndOracle) {
  for (std::uint64_t seed = 20; seed < 28; ++seed) {
    const auto pts = fixtures::clumpy_points(160, seed % 2 ? 3 : 12, seed);
    const auto ds = fixtures::make_dataset(pts);
    const auto table = oracle::distance_table(pts);
    IterDbscanParams p;
    p.initial_min_distance = 0.01;
    p.initial_number_of_points = 12;
    p.delta_min_distance = 0.01;
    p.delta_number_of_points = 2;
    p.min_points = 3;
    p.max_iteration = 8;
    const auto r = run_iter_dbscan(ds, p);
    EXPECT_EQ(r.assignment.labels, oracle::iter_dbscan(table, 0.01, 12, 0.01, 2, 3, 8, 3)) << seed;

    std::size_t previous_noise = ds.size();
    for (std::size_t i = 0; i < r.trace.size(); ++i) {
      const int round = static_cast<int>(i) + 1;
      EXPECT_EQ(r.trace[i].iteration, round);
      EXPECT_NEAR(r.trace[i].eps, 0.01 + 0.01 * (round - 1), 1e-12);
      EXPECT_EQ(r.trace[i].min_pts, 12 - 2 * (round - 1));
      EXPECT_GT(r.trace[i].min_pts, p.min_points);
      EXPECT_LE(r.trace[i].noise_remaining, previous_noise);
      previous_noise = r.trace[i].noise_remaining;
    }
    EXPECT_EQ(previous_noise, r.assignment.noise_count());
    int total = 0;
    for (const auto& round : r.trace) total += round.clusters_found;
    EXPECT_EQ(total, r.assignment.num_clusters);
  }
}

// Everything DBSCAN clusters at the initial parameters stays clustered, and
// DBSCAN's clusters survive unchanged.
TEST(IterDbscan, DominatesSingleShot) {
  for (std::uint64_t seed = 40; seed < 46; ++seed) {
    const auto ds = fixtures::make_dataset(fixtures::clumpy_points(200, 5, seed));
    IterDbscanParams p;
    p.initial_min_distance = 0.02;
    p.initial_number_of_points = 10;
    const auto iter = run_iter_dbscan(ds, p);
    const auto single = run_dbscan(ds, {0.02, 10, 3});
    for (std::size_t i = 0; i < ds.size(); ++i) {
      if (single.labels[i] == kNoise) continue;
      EXPECT_NE(iter.assignment.labels[i], kNoise);
      for (std::size_t j = 0; j < ds.size(); ++j)
        if (single.labels[j] != kNoise)
          EXPECT_EQ(single.labels[i] == single.labels[j],
                    iter.assignment.labels[i] == iter.assignment.labels[j]);
    }
    EXPECT_LE(iter.assignment.noise_count(), single.noise_count());
  }
}

TEST(IterDbscan, SubsetLabelsAreParallel) {
  const auto ds = fixtures::make_dataset(dense_and_sparse());
  std::vector<std::size_t> subset;
  for (std::size_t i = 30; i < 66; ++i) subset.push_back(i);
  const auto r = run_iter_dbscan(ds, subset, imbalanced_params());
  ASSERT_EQ(r.assignment.labels.size(), subset.size());
  EXPECT_EQ(r.assignment.num_clusters, 2);
  EXPECT_EQ(r.assignment.labels.front(), 0);
  EXPECT_EQ(r.assignment.labels.back(), 1);
}

TEST(IterDbscan, ParamValidation) {
  const auto ds = fixtures::make_dataset({{1, 0}, {0, 1}});
  auto p = imbalanced_params();
  p.initial_number_of_points = 2;
  p.min_points = 5;
  try {
    run_iter_dbscan(ds, p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidParams);
  }
  p = imbalanced_params();
  p.max_iteration = 0;
  EXPECT_THROW(run_iter_dbscan(ds, p), Error);
  p = imbalanced_params();
  p.delta_min_distance = -0.01;
  EXPECT_THROW(run_iter_dbscan(ds, p), Error);
  EXPECT_THROW(run_iter_dbscan(ds, std::span<const std::size_t>{}, imbalanced_params()), Error);
}

TEST(DefaultGrid, Shape) {
  const auto grid = default_grid();
  ASSERT_EQ(grid.size(), 480u);
  std::set<double> distances;
  std::set<int> iterations, points;
  for (const auto& p : grid) {
    EXPECT_DOUBLE_EQ(p.delta_min_distance, 0.01);
    EXPECT_EQ(p.delta_number_of_points, 1);
    EXPECT_EQ(p.min_points, 3);
    EXPECT_EQ(p.min_cluster_size, 3);
    EXPECT_NO_THROW(p.validate());
    distances.insert(p.initial_min_distance);
    iterations.insert(p.max_iteration);
    points.insert(p.initial_number_of_points);
  }
  EXPECT_EQ(distances, (std::set<double>{0.09, 0.12, 0.15, 0.20, 0.30}));
  EXPECT_EQ(iterations.size(), 6u);
  EXPECT_EQ(*iterations.begin(), 10);
  EXPECT_EQ(*iterations.rbegin(), 15);
  EXPECT_EQ(points.size(), 16u);
  EXPECT_EQ(*points.begin(), 10);
  EXPECT_EQ(*points.rbegin(), 25);
  EXPECT_DOUBLE_EQ(grid.front().initial_min_distance, 0.09);
  EXPECT_EQ(grid[1].initial_number_of_points, 11);
  EXPECT_EQ(grid[16].max_iteration, 11);
}
