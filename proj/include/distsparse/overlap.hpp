#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <set>
#include <vector>

#include <Eigen/Dense>

#include "distsparse/error.hpp"
#include "distsparse/graph.hpp"

namespace distsparse {

// Family-of-sets calculus. Everything here is generic over the element type
// so the same code runs on edge sets and on the small integer families used
// in worked examples.
template <typename T>
using SetFamily = std::vector<std::set<T>>;

// Number of sets of the family that contain `a`.
template <typename T>
std::size_t occurrence_number(const SetFamily<T>& family, const T& a) {
  return static_cast<std::size_t>(std::count_if(
      family.begin(), family.end(),
      [&](const std::set<T>& s) { return s.contains(a); }));
}

template <typename T>
std::set<T> family_union(const SetFamily<T>& family) {
  std::set<T> out;
  for (const auto& s : family) out.insert(s.begin(), s.end());
  return out;
}

// k when every member of `subset` occurs in exactly k sets, 0 otherwise.
// Throws on an empty subset or one that reaches outside the family union.
template <typename T, typename Range>
std::size_t overlapping_cardinality(const SetFamily<T>& family,
                                    const Range& subset) {
  bool first = true;
  std::size_t k = 0;
  bool uniform = true;
  for (const T& a : subset) {
    const auto c = occurrence_number(family, a);
    if (c == 0)
      throw PreconditionError("subset element not in any set of the family");
    if (first) {
      k = c;
      first = false;
    } else if (c != k) {
      uniform = false;
    }
  }
  if (first)
    throw InvalidArgument("overlapping cardinality of the empty set is undefined");
  return uniform ? k : 0;
}

template <typename T>
struct OverlapClass {
  std::size_t cardinality = 0;
  std::set<T> members;
};

// Partition of the family union by occurrence number, classes in strictly
// increasing cardinality.
template <typename T>
struct OverlapPartition {
  std::vector<OverlapClass<T>> classes;

  std::size_t c1() const { return classes.front().cardinality; }
  std::size_t ck() const { return classes.back().cardinality; }

  std::vector<std::size_t> cardinalities() const {
    std::vector<std::size_t> out;
    out.reserve(classes.size());
    for (const auto& c : classes) out.push_back(c.cardinality);
    return out;
  }
};

template <typename T>
OverlapPartition<T> overlapping_cardinality_partition(
    const SetFamily<T>& family) {
  std::map<T, std::size_t> counts;
  for (const auto& s : family)
    for (const auto& a : s) ++counts[a];
  std::map<std::size_t, std::set<T>> by_count;
  for (const auto& [a, c] : counts) by_count[c].insert(a);
  OverlapPartition<T> out;
  for (auto& [c, members] : by_count)
    out.classes.push_back({c, std::move(members)});
  return out;
}

// The sites' inputs E_1, ..., E_t over a shared graph. Every set is a
// nonempty subset of E(base) and together they cover E(base).
class EdgeFamily {
 public:
  EdgeFamily(WeightedGraph base, SetFamily<Edge> sets)
      : base_(std::move(base)), sets_(std::move(sets)) {
    if (sets_.empty()) throw InvalidArgument("edge family has no sets");
    EdgeSet covered;
    for (std::size_t i = 0; i < sets_.size(); ++i) {
      if (sets_[i].empty())
        throw InvalidArgument("set " + std::to_string(i + 1) + " is empty");
      for (const auto& e : sets_[i]) {
        if (!base_.has_edge(e))
          throw PreconditionError("set " + std::to_string(i + 1) +
                                  " references edge (" + std::to_string(e.u) +
                                  "," + std::to_string(e.v) +
                                  ") absent from the graph");
        covered.insert(e);
      }
    }
    if (covered.size() != base_.num_edges())
      throw PreconditionError("sets cover " + std::to_string(covered.size()) +
                              " of " + std::to_string(base_.num_edges()) +
                              " graph edges");
  }

  const WeightedGraph& base() const noexcept { return base_; }
  const SetFamily<Edge>& sets() const noexcept { return sets_; }
  std::size_t size() const noexcept { return sets_.size(); }

 private:
  WeightedGraph base_;
  SetFamily<Edge> sets_;
};

inline std::size_t occurrence_number(const EdgeFamily& f, const Edge& a) {
  return occurrence_number(f.sets(), a);
}

template <typename Range>
std::size_t overlapping_cardinality(const EdgeFamily& f, const Range& subset) {
  return overlapping_cardinality(f.sets(), subset);
}

inline OverlapPartition<Edge> overlapping_cardinality_partition(
    const EdgeFamily& f) {
  return overlapping_cardinality_partition(f.sets());
}

// Max-abs entry of  sum_i L(G_i) - sum_j c_j L(G'_{c_j}).  The decomposition
// identity says this is zero for every family.
inline double combined_laplacian_residual(const EdgeFamily& f) {
  const auto n = static_cast<Eigen::Index>(f.base().num_vertices());
  Eigen::MatrixXd lhs = Eigen::MatrixXd::Zero(n, n);
  for (const auto& s : f.sets())
    lhs += laplacian(induced_subgraph(f.base(), s)).matrix;
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n, n);
  for (const auto& cls : overlapping_cardinality_partition(f).classes)
    rhs += static_cast<double>(cls.cardinality) *
           laplacian(induced_subgraph(f.base(), cls.members)).matrix;
  if (n == 0) return 0.0;
  return (lhs - rhs).cwiseAbs().maxCoeff();
}

}  // namespace distsparse
