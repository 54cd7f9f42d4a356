#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "distsparse/error.hpp"

namespace distsparse {

using Vertex = std::uint32_t;

// Unordered vertex pair; always stored with u < v so that the pair is the
// edge identity regardless of the order it was written in.
struct Edge {
  Vertex u = 0;
  Vertex v = 0;

  Edge() = default;
  Edge(Vertex a, Vertex b) : u(std::min(a, b)), v(std::max(a, b)) {}

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

using EdgeSet = std::set<Edge>;

struct WeightedEdge {
  Edge edge;
  double weight = 0.0;

  friend bool operator==(const WeightedEdge&, const WeightedEdge&) = default;
};

// G = (V, E, w) with V = {0, ..., n-1}. Immutable once built; the edge list
// is kept sorted by pair so lookups are binary searches.
class WeightedGraph {
 public:
  WeightedGraph() = default;

  // Throws InvalidArgument on a self-loop, duplicate pair, vertex >= n or a
  // weight that is not strictly positive and finite.
  WeightedGraph(std::size_t n, std::vector<WeightedEdge> edges)
      : n_(n), edges_(std::move(edges)) {
    for (const auto& e : edges_) {
      if (e.edge.u == e.edge.v)
        throw InvalidArgument("self-loop at vertex " + std::to_string(e.edge.u));
      if (e.edge.v >= n_)
        throw InvalidArgument("vertex " + std::to_string(e.edge.v) +
                              " out of range for n=" + std::to_string(n_));
      if (!(e.weight > 0.0) || !std::isfinite(e.weight))
        throw InvalidArgument("non-positive weight on edge (" +
                              std::to_string(e.edge.u) + "," +
                              std::to_string(e.edge.v) + ")");
    }
    std::sort(edges_.begin(), edges_.end(),
              [](const auto& a, const auto& b) { return a.edge < b.edge; });
    auto dup = std::adjacent_find(
        edges_.begin(), edges_.end(),
        [](const auto& a, const auto& b) { return a.edge == b.edge; });
    if (dup != edges_.end())
      throw InvalidArgument("duplicate edge (" + std::to_string(dup->edge.u) +
                            "," + std::to_string(dup->edge.v) + ")");
  }

  std::size_t num_vertices() const noexcept { return n_; }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  const std::vector<WeightedEdge>& edges() const noexcept { return edges_; }

  std::optional<double> weight(const Edge& e) const {
    auto it = find(e);
    if (it == edges_.end()) return std::nullopt;
    return it->weight;
  }

  bool has_edge(const Edge& e) const { return find(e) != edges_.end(); }

  EdgeSet edge_set() const {
    EdgeSet out;
    for (const auto& e : edges_) out.insert(out.end(), e.edge);
    return out;
  }

  // Same edge set, every weight multiplied by alpha (> 0).
  WeightedGraph scaled(double alpha) const {
    auto edges = edges_;
    for (auto& e : edges) e.weight *= alpha;
    return WeightedGraph(n_, std::move(edges));
  }

  friend bool operator==(const WeightedGraph&, const WeightedGraph&) = default;

 private:
  std::vector<WeightedEdge>::const_iterator find(const Edge& e) const {
    auto it = std::lower_bound(
        edges_.begin(), edges_.end(), e,
        [](const WeightedEdge& a, const Edge& b) { return a.edge < b; });
    if (it != edges_.end() && it->edge == e) return it;
    return edges_.end();
  }

  std::size_t n_ = 0;
  std::vector<WeightedEdge> edges_;
};

struct LaplacianMatrix {
  Eigen::MatrixXd matrix;
  bool normalized = false;

  std::size_t size() const noexcept {
    return static_cast<std::size_t>(matrix.rows());
  }
};

// Parses the edge-list format:
//   # comment
//   n <count>          (optional, first non-comment line)
//   u v w              (one edge per line)
// Without a header n is max vertex id + 1.
inline WeightedGraph load_graph(std::string_view text) {
  std::vector<WeightedEdge> edges;
  std::set<Edge> seen;
  std::optional<std::size_t> header_n;
  std::size_t max_id_plus_one = 0;
  bool first_content = true;
  std::size_t line_no = 0;

  std::istringstream doc{std::string(text)};
  std::string line;
  while (std::getline(doc, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();

    auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;

    std::istringstream in(line);
    if (first_content && line[first] == 'n') {
      std::string tag;
      long long count = -1;
      std::string rest;
      in >> tag >> count;
      if (tag != "n" || in.fail() || count <= 0 || (in >> rest))
        throw ParseError(line_no, "malformed header, expected 'n <count>'");
      header_n = static_cast<std::size_t>(count);
      first_content = false;
      continue;
    }
    first_content = false;

    long long u = -1;
    long long v = -1;
    double w = 0.0;
    std::string rest;
    in >> u >> v;
    if (in.fail() || u < 0 || v < 0 ||
        u > std::numeric_limits<Vertex>::max() - 1 ||
        v > std::numeric_limits<Vertex>::max() - 1)
      throw ParseError(line_no, "malformed edge, expected 'u v w'");
    // Read the weight as a token so "nan"/"inf" are rejected uniformly.
    std::string wtok;
    if (!(in >> wtok) || (in >> rest))
      throw ParseError(line_no, "malformed edge, expected 'u v w'");
    try {
      std::size_t used = 0;
      w = std::stod(wtok, &used);
      if (used != wtok.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ParseError(line_no, "malformed weight '" + wtok + "'");
    }
    if (!(w > 0.0) || !std::isfinite(w))
      throw ParseError(line_no, "weight must be positive, got " + wtok);
    if (u == v)
      throw ParseError(line_no, "self-loop at vertex " + std::to_string(u));
    Edge e(static_cast<Vertex>(u), static_cast<Vertex>(v));
    if (!seen.insert(e).second)
      throw ParseError(line_no, "duplicate edge (" + std::to_string(e.u) +
                                    "," + std::to_string(e.v) + ")");
    edges.push_back({e, w});
    max_id_plus_one = std::max<std::size_t>(max_id_plus_one, e.v + 1);
  }

  std::size_t n = max_id_plus_one;
  if (header_n) {
    if (*header_n < max_id_plus_one)
      throw ParseError(0, "header n=" + std::to_string(*header_n) +
                              " smaller than largest vertex id + 1 (" +
                              std::to_string(max_id_plus_one) + ")");
    n = *header_n;
  }
  if (n == 0) throw ParseError(0, "empty graph: no edges and no header");
  return WeightedGraph(n, std::move(edges));
}

// Inverse of load_graph. Always writes the header so isolated trailing
// vertices survive a round trip; weights are printed with 17 significant
// digits.
inline std::string format_edge_list(const WeightedGraph& g) {
  std::ostringstream out;
  out << "n " << g.num_vertices() << '\n';
  out << std::setprecision(17);
  for (const auto& e : g.edges())
    out << e.edge.u << ' ' << e.edge.v << ' ' << e.weight << '\n';
  return out.str();
}

inline Eigen::VectorXd weighted_degrees(const WeightedGraph& g) {
  Eigen::VectorXd d = Eigen::VectorXd::Zero(
      static_cast<Eigen::Index>(g.num_vertices()));
  for (const auto& e : g.edges()) {
    d[e.edge.u] += e.weight;
    d[e.edge.v] += e.weight;
  }
  return d;
}

// L = D - W.
inline LaplacianMatrix laplacian(const WeightedGraph& g) {
  const auto n = static_cast<Eigen::Index>(g.num_vertices());
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : g.edges()) {
    const auto u = e.edge.u;
    const auto v = e.edge.v;
    L(u, v) -= e.weight;
    L(v, u) -= e.weight;
    L(u, u) += e.weight;
    L(v, v) += e.weight;
  }
  return {std::move(L), false};
}

// D^{-1/2} L D^{-1/2}. Rows and columns of isolated vertices are zero.
inline LaplacianMatrix normalized_laplacian(const WeightedGraph& g) {
  auto L = laplacian(g).matrix;
  const Eigen::VectorXd d = weighted_degrees(g);
  Eigen::VectorXd inv_sqrt(d.size());
  for (Eigen::Index i = 0; i < d.size(); ++i)
    inv_sqrt[i] = d[i] > 0.0 ? 1.0 / std::sqrt(d[i]) : 0.0;
  L = inv_sqrt.asDiagonal() * L * inv_sqrt.asDiagonal();
  return {std::move(L), true};
}

inline double quadratic_form(const LaplacianMatrix& L,
                             const Eigen::VectorXd& x) {
  if (static_cast<std::size_t>(x.size()) != L.size())
    throw DimensionMismatch("vector of length " + std::to_string(x.size()) +
                            " against " + std::to_string(L.size()) + "x" +
                            std::to_string(L.size()) + " Laplacian");
  return x.dot(L.matrix * x);
}

// Edge-sum form sum_{uv} w(u,v) (x_u - x_v)^2, no matrix needed.
inline double quadratic_form(const WeightedGraph& g, const Eigen::VectorXd& x) {
  if (static_cast<std::size_t>(x.size()) != g.num_vertices())
    throw DimensionMismatch("vector of length " + std::to_string(x.size()) +
                            " against graph with n=" +
                            std::to_string(g.num_vertices()));
  double s = 0.0;
  for (const auto& e : g.edges()) {
    const double d = x[e.edge.u] - x[e.edge.v];
    s += e.weight * d * d;
  }
  return s;
}

// G_S = (V, S, w restricted to S).
template <typename EdgeRange>
WeightedGraph induced_subgraph(const WeightedGraph& g, const EdgeRange& subset) {
  std::vector<WeightedEdge> edges;
  for (const Edge& e : subset) {
    auto w = g.weight(e);
    if (!w)
      throw PreconditionError("edge (" + std::to_string(e.u) + "," +
                              std::to_string(e.v) + ") not in graph");
    edges.push_back({e, *w});
  }
  return WeightedGraph(g.num_vertices(), std::move(edges));
}

// Components ordered by smallest member; members ascending.
inline std::vector<std::vector<Vertex>> connected_components(
    const WeightedGraph& g) {
  const std::size_t n = g.num_vertices();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (const auto& e : g.edges()) {
    auto a = find(e.edge.u);
    auto b = find(e.edge.v);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<std::vector<Vertex>> out;
  std::vector<std::size_t> slot(n, n);
  for (std::size_t v = 0; v < n; ++v) {
    auto r = find(v);
    if (slot[r] == n) {
      slot[r] = out.size();
      out.emplace_back();
    }
    out[slot[r]].push_back(static_cast<Vertex>(v));
  }
  return out;
}

}  // namespace distsparse
