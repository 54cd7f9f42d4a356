#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "distsparse/error.hpp"
#include "distsparse/graph.hpp"
#include "distsparse/overlap.hpp"

namespace distsparse {

// Eigenvalues below this fraction of the largest are treated as zero.
inline constexpr double kKernelRelTol = 1e-10;

struct SparsifierResult {
  WeightedGraph h;
  double epsilon_target = 0.0;
  // Smallest epsilon for which h is an epsilon-spectral sparsifier of its
  // source graph; +inf when none exists.
  double epsilon_certified = 0.0;
  std::optional<std::uint64_t> seed;
};

struct UnionSparsifier {
  WeightedGraph h;
  double epsilon = 0.0;  // max certified epsilon over the parts
  double epsilon_prime = 0.0;
  std::size_t c1 = 0;
  std::size_t ck = 0;
};

namespace detail {

inline double kernel_threshold(const Eigen::VectorXd& eigenvalues) {
  const double top = eigenvalues.size() ? eigenvalues.maxCoeff() : 0.0;
  return kKernelRelTol * std::max(top, 0.0);
}

}  // namespace detail

// R(u,v) = (e_u - e_v)^T L^+ (e_u - e_v) for every edge, in g.edges() order.
// The pseudoinverse handles disconnected graphs component by component.
inline std::vector<double> effective_resistances(const WeightedGraph& g) {
  const auto L = laplacian(g).matrix;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(L);
  const Eigen::VectorXd& lambda = es.eigenvalues();
  const Eigen::MatrixXd& U = es.eigenvectors();
  const double tol = detail::kernel_threshold(lambda);

  Eigen::VectorXd inv = Eigen::VectorXd::Zero(lambda.size());
  for (Eigen::Index i = 0; i < lambda.size(); ++i)
    if (lambda[i] > tol) inv[i] = 1.0 / lambda[i];
  const Eigen::MatrixXd pinv = U * inv.asDiagonal() * U.transpose();

  std::vector<double> r;
  r.reserve(g.num_edges());
  for (const auto& e : g.edges()) {
    const auto u = e.edge.u;
    const auto v = e.edge.v;
    r.push_back(pinv(u, u) + pinv(v, v) - 2.0 * pinv(u, v));
  }
  return r;
}

// Smallest epsilon with (1-eps) x'L_G x <= x'L_H x <= (1+eps) x'L_G x for all
// x. Computed from the spectrum of L_G^{+/2} L_H L_G^{+/2} on range(L_G).
// Returns +inf when some x in ker(L_G) has x'L_H x > 0.
inline double verify_epsilon(const WeightedGraph& g, const WeightedGraph& h) {
  if (g.num_vertices() != h.num_vertices())
    throw DimensionMismatch("graphs on " + std::to_string(g.num_vertices()) +
                            " and " + std::to_string(h.num_vertices()) +
                            " vertices");
  const Eigen::MatrixXd LG = laplacian(g).matrix;
  const Eigen::MatrixXd LH = laplacian(h).matrix;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(LG);
  const Eigen::VectorXd& lambda = es.eigenvalues();
  const Eigen::MatrixXd& U = es.eigenvectors();
  const double tol = detail::kernel_threshold(lambda);

  // Eigenvalues are ascending, so the kernel is a leading block.
  Eigen::Index rank_start = 0;
  while (rank_start < lambda.size() && lambda[rank_start] <= tol) ++rank_start;
  const Eigen::Index rank = lambda.size() - rank_start;

  if (rank_start > 0) {
    const double scale = LH.size() ? LH.cwiseAbs().maxCoeff() : 0.0;
    const Eigen::MatrixXd leak = LH * U.leftCols(rank_start);
    if (scale > 0.0 && leak.cwiseAbs().maxCoeff() > 1e-8 * scale)
      return std::numeric_limits<double>::infinity();
  }
  if (rank == 0) return 0.0;

  Eigen::VectorXd inv_sqrt = lambda.tail(rank).cwiseSqrt().cwiseInverse();
  const Eigen::MatrixXd P = U.rightCols(rank) * inv_sqrt.asDiagonal();
  Eigen::MatrixXd M = P.transpose() * LH * P;
  M = 0.5 * (M + M.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ms(M, Eigen::EigenvaluesOnly);
  const double mu_min = ms.eigenvalues()[0];
  const double mu_max = ms.eigenvalues()[rank - 1];
  return std::max(1.0 - mu_min, mu_max - 1.0);
}

struct ErSamplingOptions {
  double constant = 9.0;
};

// Number of samples drawn by sparsify_er: ceil(C n ln n / eps^2).
inline std::size_t er_sample_count(std::size_t n, double epsilon,
                                   double constant) {
  const double nn = static_cast<double>(n);
  return static_cast<std::size_t>(
      std::ceil(constant * nn * std::log(nn) / (epsilon * epsilon)));
}

// Spectral sparsifier by effective-resistance sampling: q edges drawn with
// replacement with p_e proportional to w(e) R(e); each draw adds
// w(e) / (q p_e). If the draws touch every edge the input is returned
// unchanged with epsilon_certified = 0.
inline SparsifierResult sparsify_er(const WeightedGraph& g, double epsilon,
                                    std::uint64_t seed,
                                    ErSamplingOptions opts = {}) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw InvalidArgument("epsilon must lie in (0,1), got " +
                          std::to_string(epsilon));
  if (!(opts.constant > 0.0) || !std::isfinite(opts.constant))
    throw InvalidArgument("sampling constant must be positive");
  if (g.num_edges() == 0)
    throw PreconditionError("cannot sparsify a graph without edges");

  const auto r = effective_resistances(g);
  const auto& edges = g.edges();
  std::vector<double> p(edges.size());
  double total = 0.0;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    p[i] = edges[i].weight * r[i];
    total += p[i];
  }
  for (auto& x : p) x /= total;

  const std::size_t q = er_sample_count(g.num_vertices(), epsilon, opts.constant);
  std::mt19937_64 rng(seed);
  std::discrete_distribution<std::size_t> pick(p.begin(), p.end());
  std::vector<std::size_t> hits(edges.size(), 0);
  for (std::size_t s = 0; s < q; ++s) ++hits[pick(rng)];

  const auto support = static_cast<std::size_t>(
      std::count_if(hits.begin(), hits.end(), [](auto c) { return c > 0; }));
  if (support >= edges.size()) return {g, epsilon, 0.0, seed};

  std::vector<WeightedEdge> kept;
  kept.reserve(support);
  const double qd = static_cast<double>(q);
  for (std::size_t i = 0; i < edges.size(); ++i)
    if (hits[i] > 0)
      kept.push_back({edges[i].edge, static_cast<double>(hits[i]) *
                                         edges[i].weight / (qd * p[i])});
  WeightedGraph h(g.num_vertices(), std::move(kept));
  const double certified = verify_epsilon(g, h);
  return {std::move(h), epsilon, certified, seed};
}

// The trivial sparsifier H = G.
inline SparsifierResult exact_sparsifier(const WeightedGraph& g) {
  return {g, 0.0, 0.0, std::nullopt};
}

// Approximation factor of the union of per-part eps-sparsifiers whose parts
// have extreme overlapping cardinalities c1 and ck:
//   max(1 - (1-eps)/ck, (1+eps)/c1 - 1, eps).
inline double epsilon_prime(double epsilon, std::size_t c1, std::size_t ck) {
  if (!(epsilon >= 0.0 && epsilon < 1.0))
    throw InvalidArgument("epsilon must lie in [0,1), got " +
                          std::to_string(epsilon));
  if (c1 < 1 || c1 > ck)
    throw InvalidArgument("need 1 <= c1 <= ck, got c1=" + std::to_string(c1) +
                          " ck=" + std::to_string(ck));
  const double lower = 1.0 - (1.0 - epsilon) / static_cast<double>(ck);
  const double upper = (1.0 + epsilon) / static_cast<double>(c1) - 1.0;
  return std::max({lower, upper, epsilon});
}

// H = (V, union D_i, h) with h(e) = sum_i h_i(e) / (c1 ck), where parts[i]
// sparsifies the subgraph induced by f.sets()[i].
inline UnionSparsifier union_sparsifiers(std::span<const SparsifierResult> parts,
                                         const EdgeFamily& f) {
  if (parts.empty()) throw InvalidArgument("no parts to combine");
  if (parts.size() != f.size())
    throw InvalidArgument(std::to_string(parts.size()) + " parts for a family of " +
                          std::to_string(f.size()) + " sets");

  const auto partition = overlapping_cardinality_partition(f);
  const std::size_t c1 = partition.c1();
  const std::size_t ck = partition.ck();

  std::map<Edge, double> sum;
  double eps = 0.0;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const auto& part = parts[i];
    if (part.h.num_vertices() != f.base().num_vertices())
      throw DimensionMismatch("part " + std::to_string(i + 1) + " has " +
                              std::to_string(part.h.num_vertices()) +
                              " vertices, graph has " +
                              std::to_string(f.base().num_vertices()));
    for (const auto& e : part.h.edges()) {
      if (!f.sets()[i].contains(e.edge))
        throw PreconditionError("part " + std::to_string(i + 1) +
                                " contains an edge outside its set");
      sum[e.edge] += e.weight;
    }
    if (!(part.epsilon_certified >= 0.0 && part.epsilon_certified < 1.0))
      throw PreconditionError("part " + std::to_string(i + 1) +
                              " is not a spectral sparsifier (certified eps " +
                              std::to_string(part.epsilon_certified) + ")");
    eps = std::max(eps, part.epsilon_certified);
  }

  const double scale = static_cast<double>(c1 * ck);
  std::vector<WeightedEdge> edges;
  edges.reserve(sum.size());
  for (const auto& [e, w] : sum) edges.push_back({e, w / scale});

  return {WeightedGraph(f.base().num_vertices(), std::move(edges)), eps,
          epsilon_prime(eps, c1, ck), c1, ck};
}

}  // namespace distsparse
