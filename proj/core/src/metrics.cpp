#include "intentmine/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <unordered_map>
#include <unordered_set>

#include "intentmine/dataset.hpp"
#include "intentmine/error.hpp"

namespace intentmine {

namespace {

void check_lengths(std::span<const int> gold, std::span<const int> predicted) {
  if (gold.size() != predicted.size()) {
    throw Error(ErrorCode::LengthMismatch,
                std::to_string(gold.size()) + " gold vs " + std::to_string(predicted.size()) + " predicted");
  }
}

double choose2(std::size_t x) {
  const auto v = static_cast<double>(x);
  return v * (v - 1.0) / 2.0;
}

double entropy(std::span<const std::size_t> sums, double n) {
  double h = 0.0;
  for (std::size_t s : sums) {
    if (s == 0) continue;
    const double p = static_cast<double>(s) / n;
    h -= p * std::log(p);
  }
  return h;
}

bool identical_partitions(const ContingencyTable& t) {
  // Identical up to relabeling iff every non-empty row and column holds exactly one non-zero cell.
  if (t.rows != t.cols) return false;
  for (std::size_t i = 0; i < t.rows; ++i) {
    std::size_t nonzero = 0;
    for (std::size_t j = 0; j < t.cols; ++j) nonzero += t.at(i, j) != 0;
    if (nonzero != 1) return false;
  }
  for (std::size_t j = 0; j < t.cols; ++j) {
    std::size_t nonzero = 0;
    for (std::size_t i = 0; i < t.rows; ++i) nonzero += t.at(i, j) != 0;
    if (nonzero != 1) return false;
  }
  return true;
}

}  // namespace

ContingencyTable ContingencyTable::build(std::span<const int> gold, std::span<const int> predicted) {
  check_lengths(gold, predicted);
  ContingencyTable t;
  std::unordered_map<int, std::size_t> row_of, col_of;
  std::vector<std::size_t> ri(gold.size()), ci(gold.size());
  for (std::size_t k = 0; k < gold.size(); ++k) {
    auto [r, rnew] = row_of.try_emplace(gold[k], t.row_labels.size());
    if (rnew) t.row_labels.push_back(gold[k]);
    auto [c, cnew] = col_of.try_emplace(predicted[k], t.col_labels.size());
    if (cnew) t.col_labels.push_back(predicted[k]);
    ri[k] = r->second;
    ci[k] = c->second;
  }
  t.rows = t.row_labels.size();
  t.cols = t.col_labels.size();
  t.total = gold.size();
  t.counts.assign(t.rows * t.cols, 0);
  t.row_sums.assign(t.rows, 0);
  t.col_sums.assign(t.cols, 0);
  for (std::size_t k = 0; k < gold.size(); ++k) {
    ++t.counts[ri[k] * t.cols + ci[k]];
    ++t.row_sums[ri[k]];
    ++t.col_sums[ci[k]];
  }
  return t;
}

ContingencyTable make_contingency(std::span<const int> gold, std::span<const int> predicted,
                                  NoiseMode mode) {
  check_lengths(gold, predicted);
  std::vector<int> g, p;
  g.reserve(gold.size());
  p.reserve(gold.size());
  int fresh = 0;
  for (int l : predicted) fresh = std::max(fresh, l + 1);
  for (std::size_t k = 0; k < gold.size(); ++k) {
    if (predicted[k] == kNoise) {
      if (mode == NoiseMode::Exclude) continue;
      g.push_back(gold[k]);
      p.push_back(fresh++);
    } else {
      g.push_back(gold[k]);
      p.push_back(predicted[k]);
    }
  }
  if (g.empty()) throw Error(ErrorCode::EmptyInput, "no points to score");
  return ContingencyTable::build(g, p);
}

double nmi(std::span<const int> gold, std::span<const int> predicted, NoiseMode mode) {
  const auto t = make_contingency(gold, predicted, mode);
  const auto n = static_cast<double>(t.total);
  const double hy = entropy(t.row_sums, n);
  const double hc = entropy(t.col_sums, n);
  if (hy + hc == 0.0) return 1.0;  // both partitions are a single block

  double mi = 0.0;
  for (std::size_t i = 0; i < t.rows; ++i) {
    for (std::size_t j = 0; j < t.cols; ++j) {
      const std::size_t nij = t.at(i, j);
      if (nij == 0) continue;
      const auto v = static_cast<double>(nij);
      mi += v / n * std::log(n * v / (static_cast<double>(t.row_sums[i]) * static_cast<double>(t.col_sums[j])));
    }
  }
  return std::clamp(2.0 * mi / (hy + hc), 0.0, 1.0);
}

double ari(std::span<const int> gold, std::span<const int> predicted, NoiseMode mode) {
  const auto t = make_contingency(gold, predicted, mode);
  double index = 0.0;
  for (std::size_t c : t.counts) index += choose2(c);
  double sum_a = 0.0, sum_b = 0.0;
  for (std::size_t a : t.row_sums) sum_a += choose2(a);
  for (std::size_t b : t.col_sums) sum_b += choose2(b);
  const double pairs = choose2(t.total);
  const double expected = pairs > 0.0 ? sum_a * sum_b / pairs : 0.0;
  const double max_index = 0.5 * (sum_a + sum_b);
  const double denom = max_index - expected;
  if (denom == 0.0) return identical_partitions(t) ? 1.0 : 0.0;
  return (index - expected) / denom;
}

std::vector<int> max_weight_assignment(std::span<const double> weights, std::size_t rows,
                                       std::size_t cols) {
  if (weights.size() != rows * cols) throw Error(ErrorCode::LengthMismatch, "weight matrix shape");
  if (rows == 0 || cols == 0) return std::vector<int>(rows, -1);

  // Shortest augmenting path Hungarian method (potentials u, v) on cost =
  // max - weight. Requires n <= m, so the smaller side becomes the rows.
  const bool transposed = rows > cols;
  const std::size_t n = transposed ? cols : rows;
  const std::size_t m = transposed ? rows : cols;
  double wmax = 0.0;
  for (double w : weights) wmax = std::max(wmax, w);
  auto cost = [&](std::size_t i, std::size_t j) {
    const double w = transposed ? weights[j * cols + i] : weights[i * cols + j];
    return wmax - w;
  };

  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<std::size_t> match(m + 1, 0), way(m + 1, 0);  // match[j] = row (1-based) owning column j
  for (std::size_t i = 1; i <= n; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(m + 1, kInf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = match[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> out(rows, -1);
  for (std::size_t j = 1; j <= m; ++j) {
    if (match[j] == 0) continue;
    const std::size_t small = match[j] - 1, large = j - 1;
    if (transposed) {
      out[large] = static_cast<int>(small);
    } else {
      out[small] = static_cast<int>(large);
    }
  }
  return out;
}

double clustering_accuracy(std::span<const int> gold, std::span<const int> predicted, NoiseMode mode) {
  const auto t = make_contingency(gold, predicted, mode);
  std::vector<double> w(t.counts.begin(), t.counts.end());
  const auto match = max_weight_assignment(w, t.rows, t.cols);
  std::size_t hit = 0;
  for (std::size_t i = 0; i < t.rows; ++i) {
    if (match[i] >= 0) hit += t.at(i, static_cast<std::size_t>(match[i]));
  }
  return static_cast<double>(hit) / static_cast<double>(t.total);
}

PrecisionRecallF1 cluster_prf(std::span<const int> gold, std::span<const int> predicted, NoiseMode mode) {
  const auto t = make_contingency(gold, predicted, mode);
  std::size_t col_best = 0, row_best = 0;
  for (std::size_t j = 0; j < t.cols; ++j) {
    std::size_t best = 0;
    for (std::size_t i = 0; i < t.rows; ++i) best = std::max(best, t.at(i, j));
    col_best += best;
  }
  for (std::size_t i = 0; i < t.rows; ++i) {
    std::size_t best = 0;
    for (std::size_t j = 0; j < t.cols; ++j) best = std::max(best, t.at(i, j));
    row_best += best;
  }
  const auto n = static_cast<double>(t.total);
  PrecisionRecallF1 out;
  out.precision = static_cast<double>(col_best) / n;
  out.recall = static_cast<double>(row_best) / n;
  const double s = out.precision + out.recall;
  out.f1 = s > 0.0 ? 2.0 * out.precision * out.recall / s : 0.0;
  return out;
}

int intents_found(std::span<const int> gold, std::span<const int> predicted) {
  check_lengths(gold, predicted);
  std::unordered_map<int, std::unordered_map<int, std::size_t>> per_cluster;
  for (std::size_t k = 0; k < gold.size(); ++k) {
    if (predicted[k] == kNoise) continue;
    ++per_cluster[predicted[k]][gold[k]];
  }
  std::unordered_set<int> found;
  for (const auto& [cluster, counts] : per_cluster) {
    int best_label = 0;
    std::size_t best = 0;
    for (const auto& [label, c] : counts) {
      if (c > best || (c == best && label < best_label)) {
        best = c;
        best_label = label;
      }
    }
    found.insert(best_label);
  }
  return static_cast<int>(found.size());
}

EvalReport evaluate(std::span<const int> gold, std::span<const int> predicted, NoiseMode mode) {
  check_lengths(gold, predicted);
  if (gold.empty()) throw Error(ErrorCode::EmptyInput, "no points to score");
  EvalReport r;
  std::size_t noise = 0;
  std::unordered_set<int> clusters;
  for (int p : predicted) {
    if (p == kNoise) {
      ++noise;
    } else {
      clusters.insert(p);
    }
  }
  r.num_clusters = static_cast<int>(clusters.size());
  r.noise_fraction = static_cast<double>(noise) / static_cast<double>(predicted.size());
  r.intents_total = static_cast<int>(std::unordered_set<int>(gold.begin(), gold.end()).size());
  r.intents_found = intents_found(gold, predicted);

  if (mode == NoiseMode::Exclude && noise == predicted.size()) return r;  // nothing left to score
  r.nmi = nmi(gold, predicted, mode);
  r.ari = ari(gold, predicted, mode);
  r.acc = clustering_accuracy(gold, predicted, mode);
  const auto prf = cluster_prf(gold, predicted, mode);
  r.precision = prf.precision;
  r.recall = prf.recall;
  r.f1 = prf.f1;
  return r;
}

nlohmann::json to_json(const EvalReport& r) {
  return {{"nmi", r.nmi},
          {"ari", r.ari},
          {"acc", r.acc},
          {"precision", r.precision},
          {"recall", r.recall},
          {"f1", r.f1},
          {"intents_total", r.intents_total},
          {"intents_found", r.intents_found},
          {"num_clusters", r.num_clusters},
          {"noise_fraction", r.noise_fraction}};
}

EvalReport eval_report_from_json(const nlohmann::json& j) {
  EvalReport r;
  r.nmi = j.at("nmi").get<double>();
  r.ari = j.at("ari").get<double>();
  r.acc = j.at("acc").get<double>();
  r.precision = j.at("precision").get<double>();
  r.recall = j.at("recall").get<double>();
  r.f1 = j.at("f1").get<double>();
  r.intents_total = j.at("intents_total").get<int>();
  r.intents_found = j.at("intents_found").get<int>();
  r.num_clusters = j.at("num_clusters").get<int>();
  r.noise_fraction = j.at("noise_fraction").get<double>();
  return r;
}

std::vector<std::string> eval_report_columns() {
  return {"nmi", "ari", "acc", "precision", "recall", "f1",
          "intents_total", "intents_found", "num_clusters", "noise_fraction"};
}

std::vector<std::string> eval_report_values(const EvalReport& r) {
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return std::string(buf);
  };
  return {num(r.nmi), num(r.ari), num(r.acc), num(r.precision), num(r.recall), num(r.f1),
          std::to_string(r.intents_total), std::to_string(r.intents_found),
          std::to_string(r.num_clusters), num(r.noise_fraction)};
}

}  // namespace intentmine
