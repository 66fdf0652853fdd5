#pragma once

// Reference implementations used only by the tests. They share nothing with
// the library beyond plain vectors, so an agreement is meaningful.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <numeric>
#include <vector>

namespace oracle {

using Points = std::vector<std::vector<double>>;

inline double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  double dot = 0, na = 0, nb = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    dot += a[k] * b[k];
    na += a[k] * a[k];
    nb += b[k] * b[k];
  }
  return std::clamp(1.0 - dot / (std::sqrt(na) * std::sqrt(nb)), 0.0, 2.0);
}

inline std::vector<std::vector<double>> distance_table(const Points& pts) {
  const std::size_t n = pts.size();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) d[i][j] = d[j][i] = cosine(pts[i], pts[j]);
  return d;
}

inline std::vector<int> relabel_first_seen(const std::vector<int>& raw) {
  std::map<int, int> seen;
  std::vector<int> out(raw.size(), -1);
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] < 0) continue;
    auto [it, fresh] = seen.emplace(raw[i], static_cast<int>(seen.size()));
    out[i] = it->second;
  }
  return out;
}

// Graph formulation of DBSCAN: clusters are connected components of core
// points, numbered by their smallest member; a border point takes the
// lowest-numbered component adjacent to it.
inline std::vector<int> dbscan(const std::vector<std::vector<double>>& dist, double eps, int min_pts,
                               int min_cluster_size) {
  const std::size_t n = dist.size();
  std::vector<bool> core(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    int count = 0;
    for (std::size_t j = 0; j < n; ++j) count += dist[i][j] <= eps ? 1 : 0;
    core[i] = count >= min_pts;
  }

  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (core[i] && core[j] && dist[i][j] <= eps) {
        const auto a = find(i), b = find(j);
        parent[std::max(a, b)] = std::min(a, b);
      }

  // Roots are the smallest member, so component order = order of roots.
  std::map<std::size_t, int> rank;
  for (std::size_t i = 0; i < n; ++i)
    if (core[i] && find(i) == i) rank.emplace(i, static_cast<int>(rank.size()));

  std::vector<int> label(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    if (core[i]) {
      label[i] = rank.at(find(i));
      continue;
    }
    int best = -1;
    for (std::size_t j = 0; j < n; ++j)
      if (core[j] && dist[i][j] <= eps) {
        const int r = rank.at(find(j));
        if (best < 0 || r < best) best = r;
      }
    label[i] = best;
  }

  std::map<int, int> sizes;
  for (int l : label)
    if (l >= 0) ++sizes[l];
  for (int& l : label)
    if (l >= 0 && sizes[l] < min_cluster_size) l = -1;
  return relabel_first_seen(label);
}

// Unrolled iterative relaxation on top of the graph DBSCAN above.
inline std::vector<int> iter_dbscan(const std::vector<std::vector<double>>& dist, double eps0, int k0,
                                    double d_eps, int d_k, int min_points, int max_iteration,
                                    int min_cluster_size) {
  const std::size_t n = dist.size();
  std::vector<int> label(n, -1);
  std::vector<std::size_t> pending(n);
  std::iota(pending.begin(), pending.end(), 0);
  int next = 0;
  for (int round = 1; round <= max_iteration && !pending.empty(); ++round) {
    const double eps = eps0 + (round - 1) * d_eps;
    const int k = std::max(k0 - (round - 1) * d_k, min_points);
    if (k == min_points) break;
    std::vector<std::vector<double>> sub(pending.size(), std::vector<double>(pending.size()));
    for (std::size_t a = 0; a < pending.size(); ++a)
      for (std::size_t b = 0; b < pending.size(); ++b) sub[a][b] = dist[pending[a]][pending[b]];
    const auto local = dbscan(sub, eps, k, min_cluster_size);
    int found = 0;
    std::vector<std::size_t> rest;
    for (std::size_t a = 0; a < pending.size(); ++a) {
      if (local[a] < 0) {
        rest.push_back(pending[a]);
      } else {
        label[pending[a]] = next + local[a];
        found = std::max(found, local[a] + 1);
      }
    }
    next += found;
    pending = std::move(rest);
  }
  return relabel_first_seen(label);
}

// Best one-to-one class/cluster matching by trying every injection.
inline double accuracy_by_enumeration(const std::vector<int>& gold, const std::vector<int>& pred) {
  std::vector<int> classes(gold.begin(), gold.end()), clusters(pred.begin(), pred.end());
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  std::sort(clusters.begin(), clusters.end());
  clusters.erase(std::unique(clusters.begin(), clusters.end()), clusters.end());
  while (clusters.size() < classes.size()) clusters.push_back(1 << 30);  // unmatched slots
  std::size_t best = 0;
  std::vector<int> perm = clusters;
  do {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < gold.size(); ++i) {
      const auto c = std::lower_bound(classes.begin(), classes.end(), gold[i]) - classes.begin();
      hits += perm[static_cast<std::size_t>(c)] == pred[i] ? 1 : 0;
    }
    best = std::max(best, hits);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return static_cast<double>(best) / static_cast<double>(gold.size());
}

}  // namespace oracle
