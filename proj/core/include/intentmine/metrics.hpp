#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace intentmine {

/// How predicted noise (kNoise) enters the partition-comparison metrics.
enum class NoiseMode {
  Singleton,  // every noise point is its own predicted cluster
  Exclude,    // noise points are dropped before scoring
};

/// Counts n_ij of (gold class i, predicted cluster j). Rows and columns are
/// dense ids in order of first appearance.
struct ContingencyTable {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t total = 0;
  std::vector<std::size_t> counts;  // rows x cols, row-major
  std::vector<std::size_t> row_sums;
  std::vector<std::size_t> col_sums;
  std::vector<int> row_labels;  // original gold label of each row
  std::vector<int> col_labels;  // original predicted label of each column

  std::size_t at(std::size_t i, std::size_t j) const { return counts[i * cols + j]; }

  /// Plain table; every value, including kNoise, is an ordinary label.
  static ContingencyTable build(std::span<const int> gold, std::span<const int> predicted);
};

/// Applies the noise mode and builds the table. Throws LengthMismatch, and
/// EmptyInput when nothing is left to score.
ContingencyTable make_contingency(std::span<const int> gold, std::span<const int> predicted,
                                  NoiseMode mode);

/// 2 I(Y;C) / (H(Y) + H(C)) with natural logs; 1 when both sides are trivial.
double nmi(std::span<const int> gold, std::span<const int> predicted,
           NoiseMode mode = NoiseMode::Singleton);

/// Adjusted Rand index. When the expected-index denominator vanishes the
/// result is 1 for identical partitions and 0 otherwise.
double ari(std::span<const int> gold, std::span<const int> predicted,
           NoiseMode mode = NoiseMode::Singleton);

/// Best one-to-one cluster/class matching over n (Hungarian on the table).
double clustering_accuracy(std::span<const int> gold, std::span<const int> predicted,
                           NoiseMode mode = NoiseMode::Singleton);

struct PrecisionRecallF1 {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// precision = sum_j max_i n_ij / n, recall = sum_i max_j n_ij / n.
PrecisionRecallF1 cluster_prf(std::span<const int> gold, std::span<const int> predicted,
                              NoiseMode mode = NoiseMode::Singleton);

/// Gold classes that are the majority of at least one non-noise cluster.
/// Ties go to the smallest gold label.
int intents_found(std::span<const int> gold, std::span<const int> predicted);

/// Maximum-weight matching on a rows x cols weight matrix (row-major).
/// Returns, for each row, the matched column or -1 when rows > cols.
std::vector<int> max_weight_assignment(std::span<const double> weights, std::size_t rows,
                                       std::size_t cols);

struct EvalReport {
  double nmi = 0.0;
  double ari = 0.0;
  double acc = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  int intents_total = 0;
  int intents_found = 0;
  int num_clusters = 0;
  double noise_fraction = 0.0;
};

EvalReport evaluate(std::span<const int> gold, std::span<const int> predicted,
                    NoiseMode mode = NoiseMode::Singleton);

nlohmann::json to_json(const EvalReport& report);
EvalReport eval_report_from_json(const nlohmann::json& j);

/// Column names / values of EvalReport for CSV output, same order.
std::vector<std::string> eval_report_columns();
std::vector<std::string> eval_report_values(const EvalReport& report);

}  // namespace intentmine
