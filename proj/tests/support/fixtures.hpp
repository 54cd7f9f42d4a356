#pragma once

// Test-only generators and independent oracles. Nothing here calls the
// library routine it is used to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include <Eigen/Dense>

#include "distsparse/distsparse.hpp"

namespace distsparse::testing {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline std::size_t uniform_index(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

// Erdos-Renyi graph with weights in [0.5, 2]; at least one edge.
inline WeightedGraph random_graph(std::size_t n, double p, Rng& rng) {
  std::vector<WeightedEdge> edges;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v)
      if (uniform(rng, 0, 1) < p) edges.push_back({{u, v}, uniform(rng, 0.5, 2.0)});
  if (edges.empty()) edges.push_back({{0, 1}, 1.0});
  return WeightedGraph(n, std::move(edges));
}

// Random spanning path plus Erdos-Renyi extras.
inline WeightedGraph random_connected_graph(std::size_t n, double p, Rng& rng) {
  std::vector<Vertex> order(n);
  std::iota(order.begin(), order.end(), Vertex{0});
  std::shuffle(order.begin(), order.end(), rng);
  std::set<Edge> used;
  std::vector<WeightedEdge> edges;
  for (std::size_t i = 1; i < n; ++i) {
    Edge e(order[i - 1], order[i]);
    used.insert(e);
    edges.push_back({e, uniform(rng, 0.5, 2.0)});
  }
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v)
      if (!used.contains(Edge(u, v)) && uniform(rng, 0, 1) < p)
        edges.push_back({{u, v}, uniform(rng, 0.5, 2.0)});
  return WeightedGraph(n, std::move(edges));
}

inline WeightedGraph complete_graph(std::size_t n, double w = 1.0) {
  std::vector<WeightedEdge> edges;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v) edges.push_back({{u, v}, w});
  return WeightedGraph(n, std::move(edges));
}

inline WeightedGraph two_triangles() {
  return WeightedGraph(6, {{{0, 1}, 1.0}, {{1, 2}, 1.0}, {{0, 2}, 1.0},
                           {{3, 4}, 1.0}, {{4, 5}, 1.0}, {{3, 5}, 1.0}});
}

// Each edge joins a random nonempty subset of the t sites; every site ends
// up with at least one edge.
inline EdgeFamily random_covering_family(const WeightedGraph& g, std::size_t t,
                                         Rng& rng) {
  SetFamily<Edge> sets(t);
  for (const auto& e : g.edges()) {
    bool any = false;
    for (auto& s : sets)
      if (uniform(rng, 0, 1) < 0.5) {
        s.insert(e.edge);
        any = true;
      }
    if (!any) sets[uniform_index(rng, 0, t - 1)].insert(e.edge);
  }
  for (auto& s : sets)
    if (s.empty())
      s.insert(g.edges()[uniform_index(rng, 0, g.num_edges() - 1)].edge);
  return EdgeFamily(g, std::move(sets));
}

struct PlantedGraph {
  WeightedGraph graph;
  ClusterAssignment labels;
};

// `blocks` groups of `block_size` vertices; unit-weight edges inside a block
// with probability p_in and across blocks with probability p_out.
inline PlantedGraph planted_blocks(std::size_t blocks, std::size_t block_size,
                                   double p_in, double p_out,
                                   std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t n = blocks * block_size;
  PlantedGraph out;
  out.labels.k = blocks;
  for (std::size_t v = 0; v < n; ++v) out.labels.labels.push_back(v / block_size);
  std::vector<WeightedEdge> edges;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v) {
      const bool same = u / block_size == v / block_size;
      if (uniform(rng, 0, 1) < (same ? p_in : p_out))
        edges.push_back({{u, v}, 1.0});
    }
  out.graph = WeightedGraph(n, std::move(edges));
  return out;
}

// The fixture used for clustering: three blocks of ten.
inline PlantedGraph planted_three_blocks(std::uint64_t seed = 7) {
  return planted_blocks(3, 10, 0.9, 0.05, seed);
}

// Allocates every edge of g as a sunflower: a random kernel of `lambda`
// edges shared by all sites, the rest split into petals of ell - lambda
// edges. Requires (m - lambda) divisible by (ell - lambda).
inline EdgeFamily star_allocation(const WeightedGraph& g, std::size_t ell,
                                  std::size_t lambda, Rng& rng) {
  std::vector<Edge> edges;
  for (const auto& e : g.edges()) edges.push_back(e.edge);
  std::shuffle(edges.begin(), edges.end(), rng);
  const std::size_t petal = ell - lambda;
  const std::size_t sites = (edges.size() - lambda) / petal;
  EdgeSet kernel(edges.begin(), edges.begin() + static_cast<long>(lambda));
  SetFamily<Edge> sets;
  for (std::size_t i = 0; i < sites; ++i) {
    EdgeSet s = kernel;
    for (std::size_t k = 0; k < petal; ++k) s.insert(edges[lambda + i * petal + k]);
    sets.push_back(std::move(s));
  }
  return EdgeFamily(g, std::move(sets));
}

// Star allocation of the whole planted graph with sets of three edges:
// kernel size 1 when m - 1 is even, 2 otherwise.
inline EdgeFamily planted_star_allocation(const WeightedGraph& g,
                                          std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t lambda = (g.num_edges() - 1) % 2 == 0 ? 1 : 2;
  return star_allocation(g, 3, lambda, rng);
}

// Star family with ell = 3, lambda = 1, s = 9 on 19 edges drawn from g; the
// base graph is the subgraph those edges induce on all of V.
inline EdgeFamily small_star_family(const WeightedGraph& g, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Edge> edges;
  for (const auto& e : g.edges()) edges.push_back(e.edge);
  std::shuffle(edges.begin(), edges.end(), rng);
  edges.resize(19);
  const auto base = induced_subgraph(g, edges);
  return star_allocation(base, 3, 1, rng);
}

// Integer sunflower: kernel {0..lambda-1}, petals of the given sizes drawn
// from fresh elements.
inline SetFamily<int> int_sunflower(std::size_t lambda,
                                    const std::vector<std::size_t>& petals) {
  SetFamily<int> out;
  int next = static_cast<int>(lambda);
  for (auto size : petals) {
    std::set<int> s;
    for (std::size_t k = 0; k < lambda; ++k) s.insert(static_cast<int>(k));
    for (std::size_t k = 0; k < size; ++k) s.insert(next++);
    out.push_back(std::move(s));
  }
  return out;
}

inline SetFamily<int> random_int_sunflower(std::size_t s, Rng& rng,
                                           std::size_t max_kernel = 3,
                                           std::size_t max_petal = 3) {
  std::vector<std::size_t> petals(s);
  for (auto& p : petals) p = uniform_index(rng, 0, max_petal);
  return int_sunflower(uniform_index(rng, 0, max_kernel), petals);
}

// Sunflower with exactly one deviant pair: sets a and b share an extra
// element outside the kernel, so E_a and E_b meet in K' != K.
inline SetFamily<int> near_sunflower(std::size_t s, Rng& rng) {
  auto f = random_int_sunflower(s, rng);
  const std::size_t a = uniform_index(rng, 0, s - 1);
  std::size_t b = uniform_index(rng, 0, s - 2);
  if (b >= a) ++b;
  f[a].insert(100000);
  f[b].insert(100000);
  return f;
}

// Fully random small family over {0..universe-1}.
inline SetFamily<int> random_int_family(std::size_t s, int universe, Rng& rng) {
  SetFamily<int> out(s);
  for (auto& set : out)
    for (int x = 0; x < universe; ++x)
      if (uniform(rng, 0, 1) < 0.4) set.insert(x);
  return out;
}

// The i-th vertex pair in lexicographic order; turns integer families into
// edge families over a complete graph.
inline Edge nth_pair(std::size_t i) {
  Vertex v = 1;
  while (i >= v) {
    i -= v;
    ++v;
  }
  return Edge(static_cast<Vertex>(i), v);
}

inline EdgeFamily edge_family_from_ints(const SetFamily<int>& family) {
  std::set<Edge> all;
  SetFamily<Edge> sets;
  for (const auto& s : family) {
    EdgeSet es;
    for (int x : s) es.insert(nth_pair(static_cast<std::size_t>(x)));
    all.insert(es.begin(), es.end());
    sets.push_back(std::move(es));
  }
  Vertex n = 0;
  for (const auto& e : all) n = std::max<Vertex>(n, e.v + 1);
  std::vector<WeightedEdge> edges;
  for (const auto& e : all) edges.push_back({e, 1.0 + 0.25 * (e.u + e.v)});
  return EdgeFamily(WeightedGraph(n, std::move(edges)), std::move(sets));
}

// Worked example: nine subsets of {1..7}.
inline SetFamily<int> example1_family() {
  return {{1, 2, 3}, {2, 3, 4}, {4, 5, 1}, {3, 2, 6}, {4, 7, 1},
          {2, 3},    {5, 6, 7}, {1, 3, 5}, {2, 4}};
}

// Element a of the worked example becomes the edge (0, a).
inline Edge example_edge(int a) { return Edge(0, static_cast<Vertex>(a)); }

inline EdgeFamily example1_edge_family() {
  std::vector<WeightedEdge> edges;
  for (int a = 1; a <= 7; ++a) edges.push_back({example_edge(a), 1.0});
  SetFamily<Edge> sets;
  for (const auto& s : example1_family()) {
    EdgeSet es;
    for (int a : s) es.insert(example_edge(a));
    sets.push_back(std::move(es));
  }
  return EdgeFamily(WeightedGraph(8, std::move(edges)), std::move(sets));
}

// ---------------------------------------------------------------------------
// Oracles

template <typename T>
std::size_t naive_occurrence(const SetFamily<T>& family, const T& a) {
  std::size_t c = 0;
  for (const auto& s : family)
    for (const auto& x : s)
      if (x == a) {
        ++c;
        break;
      }
  return c;
}

// Dense Laplacian assembled entry by entry from the edge-sum definition.
inline Eigen::MatrixXd brute_laplacian(std::size_t n,
                                       const std::vector<WeightedEdge>& edges) {
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      for (const auto& e : edges) {
        const bool touches_x = e.edge.u == x || e.edge.v == x;
        if (x == y && touches_x) L(x, y) += e.weight;
        if (x != y && ((e.edge.u == x && e.edge.v == y) ||
                       (e.edge.u == y && e.edge.v == x)))
          L(x, y) -= e.weight;
      }
  return L;
}

// Both sides of the decomposition identity computed without the library's
// partition or Laplacian routines.
inline double brute_decomposition_residual(const EdgeFamily& f) {
  const std::size_t n = f.base().num_vertices();
  Eigen::MatrixXd lhs = Eigen::MatrixXd::Zero(n, n);
  for (const auto& s : f.sets()) {
    std::vector<WeightedEdge> es;
    for (const auto& e : s) es.push_back({e, *f.base().weight(e)});
    lhs += brute_laplacian(n, es);
  }
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t c = 1; c <= f.size(); ++c) {
    std::vector<WeightedEdge> cls;
    for (const auto& e : f.base().edges())
      if (naive_occurrence(f.sets(), e.edge) == c) cls.push_back(e);
    rhs += static_cast<double>(c) * brute_laplacian(n, cls);
  }
  return (lhs - rhs).cwiseAbs().maxCoeff();
}

// max over random x of |x'L_H x / x'L_G x - 1|; a lower bound on the exact
// relative spectral error.
inline double rayleigh_lower_bound(const WeightedGraph& g, const WeightedGraph& h,
                                   std::size_t samples, Rng& rng) {
  std::normal_distribution<double> normal;
  Eigen::VectorXd x(static_cast<Eigen::Index>(g.num_vertices()));
  double best = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = normal(rng);
    double qg = 0.0;
    double qh = 0.0;
    for (const auto& e : g.edges()) {
      const double d = x[e.edge.u] - x[e.edge.v];
      qg += e.weight * d * d;
    }
    for (const auto& e : h.edges()) {
      const double d = x[e.edge.u] - x[e.edge.v];
      qh += e.weight * d * d;
    }
    if (qg > 0.0) best = std::max(best, std::abs(qh / qg - 1.0));
  }
  return best;
}

// ARI from explicit enumeration of all vertex pairs.
inline double brute_ari(const std::vector<std::size_t>& a,
                        const std::vector<std::size_t>& b) {
  double same_same = 0, same_diff = 0, diff_same = 0, diff_diff = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      const bool sa = a[i] == a[j];
      const bool sb = b[i] == b[j];
      if (sa && sb) ++same_same;
      else if (sa) ++same_diff;
      else if (sb) ++diff_same;
      else ++diff_diff;
    }
  const double num = 2.0 * (diff_diff * same_same - same_diff * diff_same);
  const double den = (diff_diff + same_diff) * (same_diff + same_same) +
                     (diff_diff + diff_same) * (diff_same + same_same);
  return den == 0.0 ? 1.0 : num / den;
}

}  // namespace distsparse::testing
