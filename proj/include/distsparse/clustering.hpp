#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "distsparse/error.hpp"
#include "distsparse/graph.hpp"

namespace distsparse {

struct ClusterAssignment {
  std::vector<std::size_t> labels;
  std::size_t k = 0;
};

// n x k matrix whose columns are eigenvectors of L (or the normalized L) for
// the k smallest eigenvalues, ascending. Each column is signed so its first
// non-negligible entry is positive.
inline Eigen::MatrixXd spectral_embedding(const WeightedGraph& g, std::size_t k,
                                          bool normalized = false) {
  const std::size_t n = g.num_vertices();
  if (k < 1 || k > n)
    throw InvalidArgument("k=" + std::to_string(k) + " outside [1," +
                          std::to_string(n) + "]");
  const auto L = normalized ? normalized_laplacian(g) : laplacian(g);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(L.matrix);
  Eigen::MatrixXd X = es.eigenvectors().leftCols(static_cast<Eigen::Index>(k));
  for (Eigen::Index c = 0; c < X.cols(); ++c) {
    const double cutoff = 1e-12 * X.col(c).cwiseAbs().maxCoeff();
    for (Eigen::Index r = 0; r < X.rows(); ++r) {
      if (std::abs(X(r, c)) > cutoff) {
        if (X(r, c) < 0) X.col(c) *= -1.0;
        break;
      }
    }
  }
  return X;
}

struct KMeansRun {
  ClusterAssignment assignment;
  std::vector<double> objective;  // sum of squared distances after each update
  std::size_t iterations = 0;
};

inline constexpr std::size_t kKMeansMaxIterations = 100;

// Lloyd's algorithm on the rows of `points` from k-means++ seeding. Stops at
// an assignment fixpoint or after kKMeansMaxIterations. Nearest-centroid ties
// go to the lowest cluster index; an emptied cluster takes over the point
// farthest from its centroid.
inline KMeansRun kmeans_run(const Eigen::MatrixXd& points, std::size_t k,
                            std::uint64_t seed) {
  const auto n = static_cast<std::size_t>(points.rows());
  if (k < 1) throw InvalidArgument("k must be positive");
  if (n < k)
    throw InvalidArgument("cannot form " + std::to_string(k) +
                          " clusters from " + std::to_string(n) + " points");

  const auto dim = points.cols();
  std::mt19937_64 rng(seed);
  Eigen::MatrixXd centers(static_cast<Eigen::Index>(k), dim);

  // k-means++ seeding.
  std::vector<bool> chosen(n, false);
  std::size_t first = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
  centers.row(0) = points.row(static_cast<Eigen::Index>(first));
  chosen[first] = true;
  std::vector<double> d2(n, std::numeric_limits<double>::infinity());
  for (std::size_t c = 1; c < k; ++c) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      d2[i] = std::min(
          d2[i],
          (points.row(ii) - centers.row(static_cast<Eigen::Index>(c - 1)))
              .squaredNorm());
      total += d2[i];
    }
    std::size_t pick = n;
    if (total > 0.0) {
      std::discrete_distribution<std::size_t> dist(d2.begin(), d2.end());
      pick = dist(rng);
    } else {
      for (std::size_t i = 0; i < n && pick == n; ++i)
        if (!chosen[i]) pick = i;
    }
    chosen[pick] = true;
    centers.row(static_cast<Eigen::Index>(c)) =
        points.row(static_cast<Eigen::Index>(pick));
  }

  KMeansRun run;
  run.assignment.k = k;
  auto& labels = run.assignment.labels;
  std::vector<std::size_t> previous;
  std::vector<double> dist(n);

  for (std::size_t it = 0; it < kKMeansMaxIterations; ++it) {
    labels.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < k; ++c) {
        const double d = (points.row(static_cast<Eigen::Index>(i)) -
                          centers.row(static_cast<Eigen::Index>(c)))
                             .squaredNorm();
        if (d < best) {
          best = d;
          labels[i] = c;
        }
      }
      dist[i] = best;
    }

    std::vector<std::size_t> size(k, 0);
    for (auto l : labels) ++size[l];
    for (std::size_t c = 0; c < k; ++c) {
      if (size[c] != 0) continue;
      std::size_t far = n;
      for (std::size_t i = 0; i < n; ++i)
        if (size[labels[i]] > 1 && (far == n || dist[i] > dist[far])) far = i;
      --size[labels[far]];
      labels[far] = c;
      dist[far] = 0.0;
      size[c] = 1;
    }

    if (labels == previous) break;
    previous = labels;
    ++run.iterations;

    centers.setZero();
    for (std::size_t i = 0; i < n; ++i)
      centers.row(static_cast<Eigen::Index>(labels[i])) +=
          points.row(static_cast<Eigen::Index>(i));
    for (std::size_t c = 0; c < k; ++c)
      centers.row(static_cast<Eigen::Index>(c)) /= static_cast<double>(size[c]);

    double obj = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      obj += (points.row(static_cast<Eigen::Index>(i)) -
              centers.row(static_cast<Eigen::Index>(labels[i])))
                 .squaredNorm();
    run.objective.push_back(obj);
  }
  return run;
}

inline ClusterAssignment kmeans(const Eigen::MatrixXd& points, std::size_t k,
                                std::uint64_t seed) {
  return kmeans_run(points, k, seed).assignment;
}

inline ClusterAssignment spectral_clustering(const WeightedGraph& g,
                                             std::size_t k, std::uint64_t seed,
                                             bool normalized = false) {
  return kmeans(spectral_embedding(g, k, normalized), k, seed);
}

// Total weight of edges whose endpoints carry different labels.
inline double multicut_weight(const WeightedGraph& g,
                              const ClusterAssignment& a) {
  if (a.labels.size() != g.num_vertices())
    throw DimensionMismatch(std::to_string(a.labels.size()) +
                            " labels for a graph on " +
                            std::to_string(g.num_vertices()) + " vertices");
  double cut = 0.0;
  for (const auto& e : g.edges())
    if (a.labels[e.edge.u] != a.labels[e.edge.v]) cut += e.weight;
  return cut;
}

// Adjusted Rand index from the pair-counting contingency table.
inline double adjusted_rand_index(const ClusterAssignment& a,
                                  const ClusterAssignment& b) {
  if (a.labels.size() != b.labels.size())
    throw DimensionMismatch("label vectors of length " +
                            std::to_string(a.labels.size()) + " and " +
                            std::to_string(b.labels.size()));
  const std::size_t n = a.labels.size();
  auto pairs = [](double x) { return x * (x - 1.0) / 2.0; };

  std::map<std::pair<std::size_t, std::size_t>, double> table;
  std::map<std::size_t, double> rows;
  std::map<std::size_t, double> cols;
  for (std::size_t i = 0; i < n; ++i) {
    table[{a.labels[i], b.labels[i]}] += 1.0;
    rows[a.labels[i]] += 1.0;
    cols[b.labels[i]] += 1.0;
  }
  double index = 0.0;
  for (const auto& [_, c] : table) index += pairs(c);
  double sum_a = 0.0;
  for (const auto& [_, c] : rows) sum_a += pairs(c);
  double sum_b = 0.0;
  for (const auto& [_, c] : cols) sum_b += pairs(c);

  const double total = pairs(static_cast<double>(n));
  if (total == 0.0) return 1.0;
  const double expected = sum_a * sum_b / total;
  const double max_index = 0.5 * (sum_a + sum_b);
  // Only reachable when both partitions are all-singletons or one block.
  if (max_index == expected) return 1.0;
  return (index - expected) / (max_index - expected);
}

}  // namespace distsparse
