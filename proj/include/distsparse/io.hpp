#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "distsparse/clustering.hpp"
#include "distsparse/error.hpp"
#include "distsparse/graph.hpp"
#include "distsparse/nof.hpp"
#include "distsparse/overlap.hpp"
#include "distsparse/sparsifier.hpp"

// File formats: edge-list files, family documents, label files and the JSON
// shapes of reports.
namespace distsparse::io {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

class IoError : public Error {
 public:
  explicit IoError(const std::string& detail) : Error("io_error", detail) {}
};

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& path,
                       const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << content;
}

inline WeightedGraph read_graph(const std::filesystem::path& path) {
  return load_graph(read_file(path));
}

inline json edge_json(const Edge& e) { return json::array({e.u, e.v}); }

inline json weighted_edges_json(const std::vector<WeightedEdge>& edges) {
  json out = json::array();
  for (const auto& e : edges) out.push_back({e.edge.u, e.edge.v, e.weight});
  return out;
}

template <typename Range>
json edges_json(const Range& edges) {
  json out = json::array();
  for (const Edge& e : edges) out.push_back(edge_json(e));
  return out;
}

// Non-finite values have no JSON spelling; they are written as null.
inline json number_or_null(double x) {
  return std::isfinite(x) ? json(x) : json(nullptr);
}

// "sets": [[[u,v], ...], ...] against an already loaded graph.
inline EdgeFamily parse_family_sets(const json& sets, WeightedGraph base) {
  if (!sets.is_array()) throw ParseError(0, "\"sets\" must be an array");
  SetFamily<Edge> family;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    const auto& s = sets[i];
    if (!s.is_array())
      throw ParseError(0, "set " + std::to_string(i + 1) + " must be an array");
    EdgeSet edges;
    for (const auto& pair : s) {
      if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_unsigned() ||
          !pair[1].is_number_unsigned())
        throw ParseError(0, "set " + std::to_string(i + 1) +
                                ": edges must be [u, v] pairs of vertex ids");
      const auto u = pair[0].get<std::uint64_t>();
      const auto v = pair[1].get<std::uint64_t>();
      if (u > std::numeric_limits<Vertex>::max() ||
          v > std::numeric_limits<Vertex>::max())
        throw ParseError(0, "vertex id out of range in set " + std::to_string(i + 1));
      edges.insert(Edge(static_cast<Vertex>(u), static_cast<Vertex>(v)));
    }
    family.push_back(std::move(edges));
  }
  return EdgeFamily(std::move(base), std::move(family));
}

// { "graph": "<path>", "sets": [...] }. A relative graph path is resolved
// against the directory holding the family document.
inline EdgeFamily read_family(const std::filesystem::path& path) {
  json doc;
  try {
    doc = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw ParseError(0, path.string() + ": " + e.what());
  }
  if (!doc.is_object() || !doc.contains("graph") || !doc["graph"].is_string() ||
      !doc.contains("sets"))
    throw ParseError(0, path.string() +
                            ": family document needs \"graph\" and \"sets\"");
  std::filesystem::path graph_path = doc["graph"].get<std::string>();
  if (graph_path.is_relative()) graph_path = path.parent_path() / graph_path;
  return parse_family_sets(doc["sets"], read_graph(graph_path));
}

inline json family_json(const std::string& graph_path, const EdgeFamily& f) {
  json sets = json::array();
  for (const auto& s : f.sets()) sets.push_back(edges_json(s));
  return {{"graph", graph_path}, {"sets", sets}};
}

// Accepts a bare array of labels or an object with a "labels" array.
inline ClusterAssignment parse_labels(const json& doc) {
  const json& arr = doc.is_object() && doc.contains("labels") ? doc["labels"] : doc;
  if (!arr.is_array()) throw ParseError(0, "labels must be a JSON array");
  ClusterAssignment a;
  for (const auto& x : arr) {
    if (!x.is_number_unsigned())
      throw ParseError(0, "labels must be non-negative integers");
    a.labels.push_back(x.get<std::size_t>());
    a.k = std::max(a.k, a.labels.back() + 1);
  }
  return a;
}

inline ClusterAssignment read_labels(const std::filesystem::path& path) {
  try {
    return parse_labels(json::parse(read_file(path)));
  } catch (const json::parse_error& e) {
    throw ParseError(0, path.string() + ": " + e.what());
  }
}

inline json partition_json(const OverlapPartition<Edge>& p) {
  json classes = json::array();
  for (const auto& c : p.classes)
    classes.push_back({{"cardinality", c.cardinality},
                       {"edges", edges_json(c.members)}});
  return {{"classes", classes}, {"cardinalities", p.cardinalities()}};
}

inline json transcript_json(const nof::Transcript& t) {
  json rounds = json::array();
  for (std::size_t r = 1; r <= t.rounds(); ++r) {
    json writes = json::array();
    for (const auto& w : t.writes()) {
      if (w.round != r) continue;
      json entry = {{"site", w.site},
                    {"kind", nof::to_string(w.kind)},
                    {"bit_cost", w.bit_cost},
                    {"edge_cost", w.edge_cost}};
      if (w.kind == nof::PayloadKind::kBit)
        entry["bit"] = w.bit;
      else
        entry["edges"] = weighted_edges_json(w.edges);
      writes.push_back(std::move(entry));
    }
    rounds.push_back({{"round", r}, {"writes", std::move(writes)}});
  }
  return {{"rounds", std::move(rounds)},
          {"bit_cost", t.bit_cost()},
          {"edge_cost", t.edge_cost()}};
}

// JSON sidecar written next to a sparsifier edge list.
inline json sparsifier_json(const SparsifierResult& r) {
  json out = {{"epsilon_target", r.epsilon_target},
              {"epsilon_certified", number_or_null(r.epsilon_certified)},
              {"edges", r.h.num_edges()}};
  out["seed"] = r.seed ? json(*r.seed) : json(nullptr);
  return out;
}

}  // namespace distsparse::io
