#include "ftl/grouping.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "ftl/rng.hpp"

namespace ftl::grouping {

namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

std::size_t count_distinct(const PointMatrix& points) {
  std::vector<std::size_t> order(points.rows);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&points](std::size_t a, std::size_t b) {
    const auto ra = points.row(a);
    const auto rb = points.row(b);
    return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
  });
  std::size_t distinct = points.rows == 0 ? 0 : 1;
  for (std::size_t i = 1; i < points.rows; ++i) {
    const auto prev = points.row(order[i - 1]);
    const auto cur = points.row(order[i]);
    if (!std::equal(prev.begin(), prev.end(), cur.begin())) ++distinct;
  }
  return distinct;
}

// Nearest centroid by squared distance; ties go to the lowest index.
int nearest_center(const PointMatrix& points, std::size_t i,
                   const std::vector<std::vector<double>>& centers) {
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centers.size(); ++c) {
    const double d = squared_distance(points.row(i), centers[c]);
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(c);
    }
  }
  return best;
}

std::vector<std::vector<double>> kmeanspp_init(const PointMatrix& points, int g, Rng& rng) {
  const std::size_t n = points.rows;
  std::vector<std::vector<double>> centers;
  centers.reserve(static_cast<std::size_t>(g));

  const std::size_t first = rng.uniform_below(n);
  centers.emplace_back(points.row(first).begin(), points.row(first).end());

  std::vector<double> dist2(n);
  for (std::size_t i = 0; i < n; ++i)
    dist2[i] = squared_distance(points.row(i), centers[0]);

  while (centers.size() < static_cast<std::size_t>(g)) {
    double total = 0.0;
    for (double d : dist2) total += d;
    std::size_t next = 0;
    if (total > 0.0) {
      const double r = rng.uniform() * total;
      double acc = 0.0;
      next = n - 1;
      for (std::size_t i = 0; i < n; ++i) {
        acc += dist2[i];
        if (r < acc) {
          next = i;
          break;
        }
      }
    } else {
      next = rng.uniform_below(n);  // all remaining coincide with a center
    }
    centers.emplace_back(points.row(next).begin(), points.row(next).end());
    for (std::size_t i = 0; i < n; ++i)
      dist2[i] = std::min(dist2[i], squared_distance(points.row(i), centers.back()));
  }
  return centers;
}

}  // namespace

PointMatrix collect_embeddings(const pool::EvaluationPool& pool) {
  if (!pool.has_embeddings())
    throw std::invalid_argument("pool '" + pool.name + "' has no embeddings");
  PointMatrix m;
  m.rows = pool.size();
  m.cols = pool.embedding_dim();
  m.data.resize(m.rows * m.cols);
  for (std::size_t i = 0; i < m.rows; ++i) {
    const auto& e = *pool.records[i].embedding;
    std::copy(e.begin(), e.end(), m.row(i).begin());
  }
  return m;
}

GroupAssignment kmeans(const PointMatrix& points, int g, std::uint64_t seed) {
  if (points.rows == 0) throw std::invalid_argument("kmeans: no points");
  if (g < 1) throw std::invalid_argument("kmeans: g must be >= 1");
  if (static_cast<std::size_t>(g) > points.rows ||
      static_cast<std::size_t>(g) > count_distinct(points))
    throw std::invalid_argument("kmeans: g exceeds number of distinct points");

  const std::size_t n = points.rows;
  Rng rng(mix_seed(seed));
  auto centers = kmeanspp_init(points, g, rng);

  std::vector<int> labels(n, -1);
  std::vector<int> prev(n, -2);
  std::vector<std::size_t> counts(static_cast<std::size_t>(g), 0);

  for (int iter = 0; iter < 100; ++iter) {
    for (std::size_t i = 0; i < n; ++i) labels[i] = nearest_center(points, i, centers);

    std::fill(counts.begin(), counts.end(), 0);
    for (int l : labels) ++counts[static_cast<std::size_t>(l)];

    // Reseed each empty cluster to the point farthest from its centroid.
    for (std::size_t c = 0; c < counts.size(); ++c) {
      if (counts[c] > 0) continue;
      std::size_t far = 0;
      double far_d = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (counts[static_cast<std::size_t>(labels[i])] <= 1) continue;
        const double d =
            squared_distance(points.row(i), centers[static_cast<std::size_t>(labels[i])]);
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      --counts[static_cast<std::size_t>(labels[far])];
      centers[c].assign(points.row(far).begin(), points.row(far).end());
      labels[far] = static_cast<int>(c);
      ++counts[c];
    }

    if (labels == prev) break;
    prev = labels;

    for (auto& c : centers) std::fill(c.begin(), c.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      auto& c = centers[static_cast<std::size_t>(labels[i])];
      const auto r = points.row(i);
      for (std::size_t d = 0; d < c.size(); ++d) c[d] += r[d];
    }
    for (std::size_t c = 0; c < centers.size(); ++c) {
      for (auto& v : centers[c]) v /= static_cast<double>(counts[c]);
    }
  }

  GroupAssignment out;
  out.group_count = g;
  out.labels = std::move(labels);
  out.centroids = std::move(centers);
  out.weights.resize(static_cast<std::size_t>(g));
  for (std::size_t c = 0; c < counts.size(); ++c)
    out.weights[c] = static_cast<double>(counts[c]) / static_cast<double>(n);
  return out;
}

double silhouette(const PointMatrix& points, const GroupAssignment& assignment) {
  if (assignment.group_count < 2) throw std::invalid_argument("silhouette: need at least 2 groups");
  if (assignment.labels.size() != points.rows)
    throw std::invalid_argument("silhouette: labels do not match points");

  const std::size_t n = points.rows;
  const auto groups = static_cast<std::size_t>(assignment.group_count);
  std::vector<std::size_t> counts(groups, 0);
  for (int l : assignment.labels) {
    if (l < 0 || l >= assignment.group_count)
      throw std::invalid_argument("silhouette: label out of range");
    ++counts[static_cast<std::size_t>(l)];
  }
  for (std::size_t c = 0; c < groups; ++c) {
    if (counts[c] == 0) throw std::invalid_argument("silhouette: empty group");
  }

  double total = 0.0;
  std::vector<double> sum_to(groups);
  for (std::size_t i = 0; i < n; ++i) {
    const auto own = static_cast<std::size_t>(assignment.labels[i]);
    if (counts[own] == 1) continue;  // singleton contributes 0

    std::fill(sum_to.begin(), sum_to.end(), 0.0);
    const auto ri = points.row(i);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      sum_to[static_cast<std::size_t>(assignment.labels[j])] +=
          std::sqrt(squared_distance(ri, points.row(j)));
    }

    const double a = sum_to[own] / static_cast<double>(counts[own] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < groups; ++c) {
      if (c == own) continue;
      b = std::min(b, sum_to[c] / static_cast<double>(counts[c]));
    }
    const double denom = std::max(a, b);
    if (denom == 0.0)
      throw std::runtime_error("silhouette: degenerate geometry (zero distances)");
    total += (b - a) / denom;
  }
  return total / static_cast<double>(n);
}

GroupAssignment select_group_count(const PointMatrix& points, std::span<const int> g_candidates,
                                   std::uint64_t seed) {
  if (g_candidates.empty()) throw std::invalid_argument("select_group_count: empty range");
  std::vector<int> candidates(g_candidates.begin(), g_candidates.end());
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  const int upper = static_cast<int>(std::min<std::size_t>(20, points.rows / 10));
  for (int g : candidates) {
    if (g < 2 || g > upper)
      throw std::invalid_argument("select_group_count: candidate " + std::to_string(g) +
                                  " outside [2, " + std::to_string(upper) + "]");
  }

  struct Scored {
    GroupAssignment assignment;
    double score;
  };
  std::vector<std::future<Scored>> futures;
  futures.reserve(candidates.size());
  for (int g : candidates) {
    futures.push_back(std::async(std::launch::async, [&points, g, seed]() {
      auto a = kmeans(points, g, seed);
      const double s = silhouette(points, a);
      return Scored{std::move(a), s};
    }));
  }

  // Candidates are ascending, so strictly-better keeps the smallest g on ties.
  GroupAssignment best;
  double best_score = -std::numeric_limits<double>::infinity();
  for (auto& f : futures) {
    auto scored = f.get();
    if (scored.score > best_score) {
      best_score = scored.score;
      best = std::move(scored.assignment);
    }
  }
  return best;
}

std::vector<int> default_group_range(std::size_t pool_size) {
  const int upper = static_cast<int>(std::min<std::size_t>(20, pool_size / 10));
  std::vector<int> range;
  for (int g = 2; g <= upper; ++g) range.push_back(g);
  return range;
}

DensityScores density_scores(const PointMatrix& points, int neighbor_k) {
  if (neighbor_k < 1) throw std::invalid_argument("density_scores: neighbor_k must be >= 1");
  if (points.rows <= static_cast<std::size_t>(neighbor_k))
    throw std::invalid_argument("density_scores: need more points than neighbor_k");

  constexpr double eta = 1e-9;
  const std::size_t n = points.rows;
  const auto k = static_cast<std::size_t>(neighbor_k);

  DensityScores out;
  out.neighbor_k = neighbor_k;
  out.scores.resize(n);

  std::vector<double> dist(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t m = 0;
    const auto ri = points.row(i);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      dist[m++] = squared_distance(ri, points.row(j));
    }
    std::nth_element(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k - 1),
                     dist.end());
    // Fixed accumulation order keeps the score permutation-equivariant.
    std::sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k));
    double mean = 0.0;
    for (std::size_t t = 0; t < k; ++t) mean += std::sqrt(dist[t]);
    mean /= static_cast<double>(k);
    out.scores[i] = 1.0 / (mean + eta);
  }
  return out;
}

}  // namespace ftl::grouping
