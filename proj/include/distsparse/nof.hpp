#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <iterator>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "distsparse/error.hpp"
#include "distsparse/graph.hpp"
#include "distsparse/overlap.hpp"
#include "distsparse/sparsifier.hpp"

// Number-On-Forehead blackboard simulator. Site ids are 1-based throughout:
// site j holds sets()[j-1] on its forehead and sees every other set.
namespace distsparse::nof {

// ---------------------------------------------------------------------------
// Set-system machinery

template <typename T>
struct SiteView {
  std::size_t site = 0;
  std::vector<std::size_t> sources;  // site ids of the visible sets
  SetFamily<T> visible;
};

template <typename T>
SiteView<T> site_view(const SetFamily<T>& family, std::size_t j) {
  const std::size_t s = family.size();
  if (s < 2)
    throw InvalidArgument("NOF model needs at least two sites, got " +
                          std::to_string(s));
  if (j < 1 || j > s)
    throw InvalidArgument("site " + std::to_string(j) + " out of range [1," +
                          std::to_string(s) + "]");
  SiteView<T> view;
  view.site = j;
  for (std::size_t i = 1; i <= s; ++i) {
    if (i == j) continue;
    view.sources.push_back(i);
    view.visible.push_back(family[i - 1]);
  }
  return view;
}

template <typename T>
struct DeltaSystemReport {
  bool is_delta = false;
  std::set<T> kernel;  // meaningful when is_delta
  bool is_weak_delta = false;
  std::size_t lambda = 0;  // meaningful when is_weak_delta
  std::size_t ell = 0;     // largest set size
};

namespace detail {

template <typename T>
std::set<T> intersect(const std::set<T>& a, const std::set<T>& b) {
  std::set<T> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::inserter(out, out.end()));
  return out;
}

}  // namespace detail

// Sunflower test: every pairwise intersection equals the intersection of all
// sets. Also reports the weaker property that all pairwise intersections
// have one common size.
template <typename T>
DeltaSystemReport<T> is_delta_system(const SetFamily<T>& sets) {
  if (sets.size() < 2)
    throw PreconditionError("delta-system test needs at least two sets, got " +
                            std::to_string(sets.size()));
  DeltaSystemReport<T> r;
  std::set<T> kernel = sets[0];
  for (std::size_t i = 1; i < sets.size(); ++i)
    kernel = detail::intersect(kernel, sets[i]);
  for (const auto& s : sets) r.ell = std::max(r.ell, s.size());

  bool delta = true;
  bool weak = true;
  std::size_t lambda = 0;
  bool have_lambda = false;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (std::size_t k = i + 1; k < sets.size(); ++k) {
      const auto meet = detail::intersect(sets[i], sets[k]);
      if (meet != kernel) delta = false;
      if (!have_lambda) {
        lambda = meet.size();
        have_lambda = true;
      } else if (meet.size() != lambda) {
        weak = false;
      }
    }
  }
  r.is_delta = delta;
  r.is_weak_delta = weak;
  if (weak) r.lambda = lambda;
  if (delta) r.kernel = std::move(kernel);
  return r;
}

// Smallest family size at which a weak delta-system with sets of size at most
// ell is forced to be a delta-system.
constexpr std::size_t deza_threshold(std::size_t ell) {
  return ell * ell - ell + 2;
}

// Site count the broadcast and exchange protocols require.
constexpr std::size_t protocol_threshold(std::size_t ell) {
  return deza_threshold(ell) + 1;
}

// Delta_j: the petal union of site j's view, (union of F_j) \ kernel(F_j).
template <typename T>
std::set<T> symmetric_difference_on_site(const SetFamily<T>& family,
                                         std::size_t j) {
  const auto view = site_view(family, j);
  const auto report = is_delta_system(view.visible);
  if (!report.is_delta)
    throw PreconditionError("view of site " + std::to_string(j) +
                            " is not a delta-system");
  std::set<T> out;
  for (const auto& s : view.visible)
    for (const auto& a : s)
      if (!report.kernel.contains(a)) out.insert(a);
  return out;
}

// Every view of a sunflower is a sunflower with the same kernel.
template <typename T>
bool lemma2_check(const SetFamily<T>& family) {
  if (family.size() < 3)
    throw PreconditionError("needs at least three sets");
  const auto whole = is_delta_system(family);
  if (!whole.is_delta) throw PreconditionError("family is not a delta-system");
  for (std::size_t j = 1; j <= family.size(); ++j) {
    const auto r = is_delta_system(site_view(family, j).visible);
    if (!r.is_delta || r.kernel != whole.kernel) return false;
  }
  return true;
}

// (every view is a sunflower) => (the family is a sunflower), evaluated on
// the input. Only meaningful for four or more sets: {1,2},{2,3},{1,3} has
// sunflower views but is not one itself.
template <typename T>
bool lemma3_check(const SetFamily<T>& family) {
  if (family.size() < 4)
    throw PreconditionError("needs at least four sets, got " +
                            std::to_string(family.size()));
  for (std::size_t j = 1; j <= family.size(); ++j)
    if (!is_delta_system(site_view(family, j).visible).is_delta) return true;
  return is_delta_system(family).is_delta;
}

// delta(j) = |intersection of F_j| / |union of F_j|.
template <typename T>
double overlapping_coefficient(const SetFamily<T>& family, std::size_t j) {
  const auto view = site_view(family, j);
  const auto all = family_union(view.visible);
  if (all.empty())
    throw PreconditionError("view of site " + std::to_string(j) + " is empty");
  std::set<T> meet = view.visible.front();
  for (const auto& s : view.visible) meet = detail::intersect(meet, s);
  return static_cast<double>(meet.size()) / static_cast<double>(all.size());
}

template <typename T>
double greatest_overlapping_coefficient(const SetFamily<T>& family) {
  double best = 0.0;
  for (std::size_t j = 1; j <= family.size(); ++j)
    best = std::max(best, overlapping_coefficient(family, j));
  return best;
}

// ---------------------------------------------------------------------------
// Blackboard

enum class PayloadKind { kBit, kEdgeSet, kWeightedEdgeSet };

inline const char* to_string(PayloadKind k) {
  switch (k) {
    case PayloadKind::kBit: return "bit";
    case PayloadKind::kEdgeSet: return "edge_set";
    case PayloadKind::kWeightedEdgeSet: return "weighted_edge_set";
  }
  return "unknown";
}

struct BlackboardWrite {
  std::size_t round = 0;
  std::size_t site = 0;
  PayloadKind kind = PayloadKind::kBit;
  bool bit = false;
  std::vector<WeightedEdge> edges;
  std::uint64_t bit_cost = 0;
  std::uint64_t edge_cost = 0;
};

// ceil(log2 n) bits name a vertex.
constexpr std::uint64_t vertex_id_bits(std::size_t n) {
  return n <= 1 ? 0 : static_cast<std::uint64_t>(std::bit_width(n - 1));
}

// Two vertex ids, plus a 64-bit double when the weight travels too.
constexpr std::uint64_t edge_encoding_bits(std::size_t n, bool weighted) {
  return 2 * vertex_id_bits(n) + (weighted ? 64 : 0);
}

// Append-only log of blackboard writes for one protocol run.
class Transcript {
 public:
  explicit Transcript(std::size_t num_vertices = 0) : n_(num_vertices) {}

  void write_bit(std::size_t round, std::size_t site, bool value) {
    BlackboardWrite w;
    w.round = round;
    w.site = site;
    w.kind = PayloadKind::kBit;
    w.bit = value;
    w.bit_cost = 1;
    append(std::move(w));
  }

  void write_edges(std::size_t round, std::size_t site,
                   std::vector<WeightedEdge> edges, bool weighted) {
    BlackboardWrite w;
    w.round = round;
    w.site = site;
    w.kind = weighted ? PayloadKind::kWeightedEdgeSet : PayloadKind::kEdgeSet;
    w.edge_cost = edges.size();
    w.bit_cost = w.edge_cost * edge_encoding_bits(n_, weighted);
    w.edges = std::move(edges);
    append(std::move(w));
  }

  const std::vector<BlackboardWrite>& writes() const noexcept { return writes_; }
  std::size_t num_vertices() const noexcept { return n_; }
  std::size_t rounds() const noexcept {
    return writes_.empty() ? 0 : writes_.back().round;
  }

  std::uint64_t bit_cost() const {
    std::uint64_t s = 0;
    for (const auto& w : writes_) s += w.bit_cost;
    return s;
  }
  std::uint64_t edge_cost() const {
    std::uint64_t s = 0;
    for (const auto& w : writes_) s += w.edge_cost;
    return s;
  }
  std::uint64_t edge_cost(std::size_t round) const {
    std::uint64_t s = 0;
    for (const auto& w : writes_)
      if (w.round == round) s += w.edge_cost;
    return s;
  }

 private:
  void append(BlackboardWrite w) {
    if (w.round < 1 || w.round < rounds())
      throw InvalidArgument("blackboard rounds must be >= 1 and nondecreasing");
    writes_.push_back(std::move(w));
  }

  std::size_t n_;
  std::vector<BlackboardWrite> writes_;
};

// ---------------------------------------------------------------------------
// Protocols

struct SunflowerVerification {
  Transcript transcript;
  bool verdict = false;
};

// Sites 1..s-1 each announce whether their view is a sunflower; the family is
// one iff every announced bit is 1. Three views already cover every pair of
// sets once s >= 4, so the silent site loses nothing.
template <typename T>
SunflowerVerification protocol_verify_sunflower(const SetFamily<T>& family,
                                                   std::size_t num_vertices = 0) {
  const std::size_t s = family.size();
  if (s < 4)
    throw PreconditionError("sunflower verification needs s >= 4, got " +
                            std::to_string(s));
  SunflowerVerification out{Transcript(num_vertices), true};
  for (std::size_t i = 1; i < s; ++i) {
    const bool bit = is_delta_system(site_view(family, i).visible).is_delta;
    out.transcript.write_bit(1, i, bit);
    out.verdict = out.verdict && bit;
  }
  return out;
}

inline SunflowerVerification protocol_verify_sunflower(const EdgeFamily& f) {
  return protocol_verify_sunflower(f.sets(), f.base().num_vertices());
}

struct SunflowerShape {
  std::size_t ell = 0;
  std::size_t lambda = 0;
};

// Checks the structural preconditions shared by the broadcast and exchange
// protocols and names the first one that fails.
inline SunflowerShape check_protocol_preconditions(const EdgeFamily& f,
                                                   std::size_t j) {
  const std::size_t s = f.size();
  if (j < 1 || j > s)
    throw InvalidArgument("site " + std::to_string(j) + " out of range [1," +
                          std::to_string(s) + "]");
  const std::size_t ell = f.sets().front().size();
  for (std::size_t i = 0; i < s; ++i)
    if (f.sets()[i].size() != ell)
      throw PreconditionError("size mismatch: set " + std::to_string(i + 1) +
                              " has " + std::to_string(f.sets()[i].size()) +
                              " edges, set 1 has " + std::to_string(ell));
  if (s < protocol_threshold(ell))
    throw PreconditionError("threshold unmet: s=" + std::to_string(s) +
                            " < ell^2 - ell + 3 = " +
                            std::to_string(protocol_threshold(ell)));
  const auto report = is_delta_system(f.sets());
  if (!report.is_weak_delta)
    throw PreconditionError("not a weak delta-system");
  if (!report.is_delta)
    throw PreconditionError("weak delta-system above threshold is not a sunflower");
  return {ell, report.lambda};
}

namespace detail {

inline std::vector<WeightedEdge> with_weights(const WeightedGraph& g,
                                              const EdgeSet& edges) {
  std::vector<WeightedEdge> out;
  out.reserve(edges.size());
  for (const auto& e : edges) out.push_back({e, *g.weight(e)});
  return out;
}

// Edges a site can see directly: everything on the other foreheads.
inline std::map<Edge, double> visible_edges(const EdgeFamily& f, std::size_t site) {
  std::map<Edge, double> out;
  for (const auto& s : site_view(f.sets(), site).visible)
    for (const auto& e : s) out.emplace(e, *f.base().weight(e));
  return out;
}

inline WeightedGraph to_graph(std::size_t n, const std::map<Edge, double>& edges) {
  std::vector<WeightedEdge> out;
  out.reserve(edges.size());
  for (const auto& [e, w] : edges) out.push_back({e, w});
  return WeightedGraph(n, std::move(out));
}

inline std::size_t first_site_except(std::size_t j) { return j == 1 ? 2 : 1; }

}  // namespace detail

struct BroadcastResult {
  Transcript transcript;
  std::vector<WeightedGraph> reconstructions;  // index site-1
  std::size_t ell = 0;
  std::size_t lambda = 0;
  std::size_t view_union_size = 0;  // |union of F_j|
  double delta = 0.0;               // overlapping coefficient of site j
};

// Round 1: site j writes Delta_j and every other site rebuilds E from its
// view plus the board. Round 2: the lowest-numbered other site writes E_j so
// site j can rebuild E too.
inline BroadcastResult protocol_broadcast_graph(const EdgeFamily& f,
                                                std::size_t j) {
  const auto shape = check_protocol_preconditions(f, j);
  const std::size_t s = f.size();
  const std::size_t n = f.base().num_vertices();

  BroadcastResult out;
  out.transcript = Transcript(n);
  out.ell = shape.ell;
  out.lambda = shape.lambda;
  out.view_union_size = family_union(site_view(f.sets(), j).visible).size();
  out.delta = overlapping_coefficient(f.sets(), j);

  const EdgeSet delta_j = symmetric_difference_on_site(f.sets(), j);
  out.transcript.write_edges(1, j, detail::with_weights(f.base(), delta_j), true);
  const auto& board_delta = out.transcript.writes().back().edges;

  out.reconstructions.resize(s);
  for (std::size_t i = 1; i <= s; ++i) {
    if (i == j) continue;
    auto known = detail::visible_edges(f, i);
    for (const auto& e : board_delta) known.emplace(e.edge, e.weight);
    out.reconstructions[i - 1] = detail::to_graph(n, known);
  }

  const std::size_t writer = detail::first_site_except(j);
  out.transcript.write_edges(2, writer,
                             detail::with_weights(f.base(), f.sets()[j - 1]), true);
  auto known = detail::visible_edges(f, j);
  for (const auto& e : out.transcript.writes().back().edges)
    known.emplace(e.edge, e.weight);
  out.reconstructions[j - 1] = detail::to_graph(n, known);
  return out;
}

// Per-site RNG seed derived from the run seed.
inline std::uint64_t site_seed(std::uint64_t seed, std::size_t site) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(site)};
  std::uint32_t words[2];
  seq.generate(std::begin(words), std::end(words));
  return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

struct ExchangeResult {
  Transcript transcript;
  std::vector<UnionSparsifier> site_sparsifiers;  // index site-1
  SparsifierResult delta_part;                 // site j's sparsifier of Delta_j
  std::vector<SparsifierResult> forehead_parts;  // sparsifier of E_j each site combined
  std::size_t round2_writer = 0;
  double delta = 0.0;
};

// Two-round sparsifier exchange. Round 1: site j sparsifies (V, Delta_j) and
// writes it. Every other site sparsifies (V, E_j), which it can see, and
// combines both pieces into a union sparsifier. Round 2: the lowest-numbered
// other site writes its sparsifier of E_j so site j can do the same.
//
// Certified epsilons are measured by the simulator against the true part
// graphs; they are not part of the communication.
inline ExchangeResult protocol_sparsifier_exchange(const EdgeFamily& f,
                                                   std::size_t j, double epsilon,
                                                   std::uint64_t seed,
                                                   ErSamplingOptions opts = {}) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw InvalidArgument("epsilon must lie in (0,1), got " +
                          std::to_string(epsilon));
  check_protocol_preconditions(f, j);
  const std::size_t s = f.size();
  const std::size_t n = f.base().num_vertices();
  const WeightedGraph& g = f.base();

  auto sparsify_part = [&](const EdgeSet& edges, std::size_t site) {
    const auto sub = induced_subgraph(g, edges);
    const auto part_seed = site_seed(seed, site);
    if (sub.num_edges() == 0)
      return SparsifierResult{sub, epsilon, 0.0, part_seed};
    return sparsify_er(sub, epsilon, part_seed, opts);
  };

  ExchangeResult out;
  out.transcript = Transcript(n);
  out.delta = overlapping_coefficient(f.sets(), j);

  const EdgeSet delta_j = symmetric_difference_on_site(f.sets(), j);
  const EdgeSet& forehead = f.sets()[j - 1];
  out.delta_part = sparsify_part(delta_j, j);
  out.transcript.write_edges(1, j, out.delta_part.h.edges(), true);

  // Union of sparsifiers over the two-part family {Delta_j, E_j}; an empty
  // Delta_j contributes nothing and is dropped.
  auto combine = [&](const SparsifierResult& forehead_part) {
    SetFamily<Edge> sets;
    std::vector<SparsifierResult> parts;
    if (!delta_j.empty()) {
      sets.push_back(delta_j);
      parts.push_back(out.delta_part);
    }
    sets.push_back(forehead);
    parts.push_back(forehead_part);
    return union_sparsifiers(parts, EdgeFamily(g, std::move(sets)));
  };

  out.site_sparsifiers.resize(s);
  out.forehead_parts.resize(s);
  for (std::size_t i = 1; i <= s; ++i) {
    if (i == j) continue;
    out.forehead_parts[i - 1] = sparsify_part(forehead, i);
    out.site_sparsifiers[i - 1] = combine(out.forehead_parts[i - 1]);
  }

  out.round2_writer = detail::first_site_except(j);
  const auto& written = out.forehead_parts[out.round2_writer - 1];
  out.transcript.write_edges(2, out.round2_writer, written.h.edges(), true);
  out.forehead_parts[j - 1] = written;
  out.site_sparsifiers[j - 1] = combine(written);
  return out;
}

}  // namespace distsparse::nof
