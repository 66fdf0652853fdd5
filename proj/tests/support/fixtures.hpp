#pragma once

#include <unistd.h>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "intentmine/dataset.hpp"

namespace fixtures {

using Points = std::vector<std::vector<double>>;

inline intentmine::Dataset make_dataset(const Points& points,
                                        const std::vector<std::string>& gold = {}) {
  std::vector<intentmine::UtteranceRecord> records;
  for (std::size_t i = 0; i < points.size(); ++i) {
    intentmine::UtteranceRecord r;
    r.id = "r" + std::to_string(i);
    r.text = "text " + std::to_string(i);
    r.embedding = points[i];
    if (!gold.empty()) r.gold_label = gold[i];
    records.push_back(std::move(r));
  }
  return intentmine::validate_dataset(std::move(records));
}

inline Points points_of(const intentmine::Dataset& ds) {
  Points out;
  for (const auto& r : ds.records()) out.push_back(r.embedding);
  return out;
}

// Loose clumps plus uniform background, so every run has cores, borders and
// noise. Coordinates are in the positive orthant-ish region to keep cosine
// distances spread over [0, 1].
inline Points clumpy_points(std::size_t n, std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const std::size_t centres = 3 + seed % 4;
  Points c(centres, std::vector<double>(dim));
  for (auto& v : c)
    for (auto& x : v) x = unit(gen);
  Points pts;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> v(dim);
    if (i % 5 == 4) {
      for (auto& x : v) x = unit(gen);
    } else {
      const auto& centre = c[gen() % centres];
      const double spread = 0.05 + 0.1 * static_cast<double>(i % 3);
      for (std::size_t k = 0; k < dim; ++k) v[k] = centre[k] + spread * normal(gen);
    }
    pts.push_back(std::move(v));
  }
  return pts;
}

// Class "left" has x0 <= -0.5, class "right" x0 >= 0.5, the rest is noise in
// three more coordinates. Points alternate so labeled and held-out halves mix.
struct Separable {
  intentmine::Dataset dataset;
  std::vector<std::string> gold;
  intentmine::ClusterAssignment clusters;  // first 10 of each class clustered, rest noise
};

inline Separable separable(std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Points pts;
  std::vector<std::string> gold;
  std::vector<int> labels;
  for (int i = 0; i < 40; ++i) {
    const bool right = i % 2 == 1;
    std::vector<double> v{(right ? 1.0 : -1.0) * (0.5 + 0.5 * std::abs(u(gen))), 0.5 * u(gen), 0.5 * u(gen),
                          0.5 * u(gen)};
    pts.push_back(v);
    gold.push_back(right ? "right" : "left");
    labels.push_back(i < 20 ? (right ? 1 : 0) : intentmine::kNoise);
  }
  return {make_dataset(pts, gold), gold, intentmine::normalize_assignment(labels)};
}

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("intentmine_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace fixtures
