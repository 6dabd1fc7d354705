#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ftl/pool.hpp"

namespace ftl::grouping {

/// Row-major point matrix; one row per record.
struct PointMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  std::span<const double> row(std::size_t i) const {
    return {data.data() + i * cols, cols};
  }
  std::span<double> row(std::size_t i) { return {data.data() + i * cols, cols}; }
};

/// Copies a pool's embeddings into a matrix; errors when the pool has none.
PointMatrix collect_embeddings(const pool::EvaluationPool& pool);

struct GroupAssignment {
  int group_count = 0;
  std::vector<int> labels;            // per record, in [0, group_count)
  std::vector<double> weights;        // group size / |D|
  std::vector<std::vector<double>> centroids;
};

/// Lloyd's iterations from seeded k-means++ starts, run to an assignment
/// fixpoint or 100 iterations. Empty clusters are reseeded to the point
/// farthest from its current centroid. Deterministic given the seed.
GroupAssignment kmeans(const PointMatrix& points, int g, std::uint64_t seed);

/// Mean silhouette over all points under Euclidean distance; singleton
/// clusters contribute 0. Requires at least two groups.
double silhouette(const PointMatrix& points, const GroupAssignment& assignment);

/// Runs kmeans for every candidate g and keeps the assignment with maximum
/// mean silhouette; ties break toward smaller g.
GroupAssignment select_group_count(const PointMatrix& points, std::span<const int> g_candidates,
                                   std::uint64_t seed);

/// The default silhouette search range [2, min(20, |D|/10)].
std::vector<int> default_group_range(std::size_t pool_size);

struct DensityScores {
  std::vector<double> scores;  // strictly positive, higher = denser
  int neighbor_k = 0;
};

/// Inverse mean distance to the neighbor_k nearest other points
/// (+ eta = 1e-9 to keep duplicate points finite).
DensityScores density_scores(const PointMatrix& points, int neighbor_k);

}  // namespace ftl::grouping
