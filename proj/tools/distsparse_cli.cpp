// Command-line front end: one subcommand per library operation, JSON reports
// on stdout (or --out), structured JSON errors on failure.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "distsparse/distsparse.hpp"
#include "distsparse/io.hpp"

namespace ds = distsparse;
namespace io = distsparse::io;
using json = nlohmann::json;

namespace {

struct RunConfig {
  std::string graph;
  std::string family;
  std::string sparsifier;
  std::vector<std::string> parts;
  std::vector<std::string> label_files;
  std::string out;
  double epsilon = 0.0;
  std::uint64_t seed = 0;
  double constant = 9.0;
  std::size_t k = 0;
  std::size_t site = 0;
  bool normalized = false;
};

json report(json body) {
  json out = {{"schema", io::kSchemaVersion}};
  out.update(body);
  return out;
}

void emit(const json& doc, const std::string& path) {
  const std::string text = doc.dump(2) + "\n";
  if (path.empty())
    std::cout << text;
  else
    io::write_file(path, text);
}

json error_object(const std::string& kind, const std::string& detail) {
  return {{"error", kind}, {"detail", detail}};
}

json laplacian_report(const RunConfig& cfg) {
  const auto g = io::read_graph(cfg.graph);
  const auto L = cfg.normalized ? ds::normalized_laplacian(g) : ds::laplacian(g);
  json rows = json::array();
  for (Eigen::Index i = 0; i < L.matrix.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < L.matrix.cols(); ++j) row.push_back(L.matrix(i, j));
    rows.push_back(std::move(row));
  }
  return report({{"n", g.num_vertices()},
                 {"normalized", L.normalized},
                 {"matrix", std::move(rows)}});
}

json partition_report(const RunConfig& cfg) {
  const auto f = io::read_family(cfg.family);
  auto body = io::partition_json(ds::overlapping_cardinality_partition(f));
  body["sets"] = f.size();
  body["decomposition_residual"] = ds::combined_laplacian_residual(f);
  return report(std::move(body));
}

json sparsify_report(const RunConfig& cfg) {
  const auto g = io::read_graph(cfg.graph);
  const auto r = ds::sparsify_er(g, cfg.epsilon, cfg.seed, {.constant = cfg.constant});
  const auto sidecar = io::sparsifier_json(r);
  if (!cfg.out.empty()) {
    io::write_file(cfg.out, ds::format_edge_list(r.h));
    io::write_file(cfg.out + ".json", sidecar.dump(2) + "\n");
  }
  auto body = sidecar;
  body["constant"] = cfg.constant;
  body["source_edges"] = g.num_edges();
  return report(std::move(body));
}

json verify_report(const RunConfig& cfg) {
  const auto g = io::read_graph(cfg.graph);
  const auto h = io::read_graph(cfg.sparsifier);
  const double eps = ds::verify_epsilon(g, h);
  return report({{"epsilon_certified", io::number_or_null(eps)},
                 {"finite", std::isfinite(eps)}});
}

json union_report(const RunConfig& cfg) {
  const auto f = io::read_family(cfg.family);
  std::vector<ds::SparsifierResult> parts;
  for (std::size_t i = 0; i < cfg.parts.size(); ++i) {
    auto h = io::read_graph(cfg.parts[i]);
    double eps = std::numeric_limits<double>::infinity();
    if (i < f.size() && h.num_vertices() == f.base().num_vertices())
      eps = ds::verify_epsilon(ds::induced_subgraph(f.base(), f.sets()[i]), h);
    parts.push_back({std::move(h), eps, eps, std::nullopt});
  }
  const auto u = ds::union_sparsifiers(parts, f);
  if (!cfg.out.empty()) io::write_file(cfg.out, ds::format_edge_list(u.h));
  return report({{"c1", u.c1},
                 {"ck", u.ck},
                 {"epsilon", u.epsilon},
                 {"epsilon_prime", u.epsilon_prime},
                 {"edges", u.h.num_edges()},
                 {"epsilon_verified", io::number_or_null(ds::verify_epsilon(f.base(), u.h))},
                 {"graph", io::weighted_edges_json(u.h.edges())}});
}

json verify_sunflower_report(const RunConfig& cfg) {
  const auto f = io::read_family(cfg.family);
  const auto out = ds::nof::protocol_verify_sunflower(f);
  auto body = io::transcript_json(out.transcript);
  body["verdict"] = out.verdict;
  return report(std::move(body));
}

json broadcast_report(const RunConfig& cfg) {
  const auto f = io::read_family(cfg.family);
  const auto out = ds::nof::protocol_broadcast_graph(f, cfg.site);
  auto body = io::transcript_json(out.transcript);
  bool all_match = true;
  for (const auto& g : out.reconstructions) all_match = all_match && g == f.base();
  body["site"] = cfg.site;
  body["ell"] = out.ell;
  body["lambda"] = out.lambda;
  body["delta"] = out.delta;
  body["view_union_size"] = out.view_union_size;
  body["reconstructions_match"] = all_match;
  return report(std::move(body));
}

json exchange_report(const RunConfig& cfg) {
  const auto f = io::read_family(cfg.family);
  const auto out = ds::nof::protocol_sparsifier_exchange(f, cfg.site, cfg.epsilon, cfg.seed,
                                                         {.constant = cfg.constant});
  auto body = io::transcript_json(out.transcript);
  json sites = json::array();
  double worst = 0.0;
  for (std::size_t i = 0; i < out.site_sparsifiers.size(); ++i) {
    const auto& u = out.site_sparsifiers[i];
    worst = std::max(worst, u.epsilon_prime);
    sites.push_back({{"site", i + 1},
                     {"edges", u.h.num_edges()},
                     {"epsilon_prime", u.epsilon_prime},
                     {"epsilon_verified",
                      io::number_or_null(ds::verify_epsilon(f.base(), u.h))}});
  }
  body["site"] = cfg.site;
  body["epsilon"] = cfg.epsilon;
  body["seed"] = cfg.seed;
  body["delta"] = out.delta;
  body["epsilon_prime"] = worst;
  body["sites"] = std::move(sites);
  return report(std::move(body));
}

json cluster_report(const RunConfig& cfg) {
  const auto g = io::read_graph(cfg.graph);
  const auto a = ds::spectral_clustering(g, cfg.k, cfg.seed, cfg.normalized);
  return report({{"k", a.k},
                 {"normalized", cfg.normalized},
                 {"multicut_weight", ds::multicut_weight(g, a)},
                 {"labels", a.labels}});
}

json compare_report(const RunConfig& cfg) {
  const auto a = io::read_labels(cfg.label_files.at(0));
  const auto b = io::read_labels(cfg.label_files.at(1));
  return report({{"ari", ds::adjusted_rand_index(a, b)}});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed spectral sparsification toolkit"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_out = [&](CLI::App* cmd, const char* what) {
    cmd->add_option("--out", cfg.out, what);
  };

  auto* lap = app.add_subcommand("laplacian", "Print the (normalized) Laplacian");
  lap->add_option("--graph", cfg.graph, "Edge-list file")->required();
  lap->add_flag("--normalized", cfg.normalized, "Use D^-1/2 L D^-1/2");
  add_out(lap, "Report path");

  auto* part = app.add_subcommand("partition", "Overlapping cardinality partition");
  part->add_option("--family", cfg.family, "Family document")->required();
  add_out(part, "Report path");

  auto* sp = app.add_subcommand("sparsify", "Effective-resistance sparsifier");
  sp->add_option("--graph", cfg.graph, "Edge-list file")->required();
  sp->add_option("--epsilon", cfg.epsilon, "Target epsilon in (0,1)")->required();
  sp->add_option("--seed", cfg.seed, "RNG seed");
  sp->add_option("--constant", cfg.constant, "Sampling constant C");
  add_out(sp, "Edge-list output; sidecar goes to <out>.json");

  auto* ver = app.add_subcommand("verify", "Exact spectral approximation factor");
  ver->add_option("--graph", cfg.graph, "Original graph")->required();
  ver->add_option("--sparsifier", cfg.sparsifier, "Candidate sparsifier")->required();
  add_out(ver, "Report path");

  auto* uni = app.add_subcommand("union", "Union of per-site sparsifiers");
  uni->add_option("--family", cfg.family, "Family document")->required();
  uni->add_option("--part", cfg.parts, "Per-site sparsifier edge lists, in set order")
      ->required();
  add_out(uni, "Edge-list output for the union graph");

  auto* nof_cmd = app.add_subcommand("nof", "Number-On-Forehead protocol simulator");
  nof_cmd->require_subcommand(1);
  auto* vs = nof_cmd->add_subcommand("verify-sunflower", "s-1 bit sunflower test");
  vs->add_option("--family", cfg.family, "Family document")->required();
  add_out(vs, "Report path");
  auto* bc = nof_cmd->add_subcommand("broadcast", "Graph broadcast protocol");
  bc->add_option("--family", cfg.family, "Family document")->required();
  bc->add_option("--site", cfg.site, "Writing site (1-based)")->required();
  add_out(bc, "Report path");
  auto* ex = nof_cmd->add_subcommand("exchange", "Two-round sparsifier exchange");
  ex->add_option("--family", cfg.family, "Family document")->required();
  ex->add_option("--site", cfg.site, "Writing site (1-based)")->required();
  ex->add_option("--epsilon", cfg.epsilon, "Per-site epsilon in (0,1)")->required();
  ex->add_option("--seed", cfg.seed, "RNG seed");
  ex->add_option("--constant", cfg.constant, "Sampling constant C");
  add_out(ex, "Report path");

  auto* cl = app.add_subcommand("cluster", "Spectral clustering");
  cl->add_option("--graph", cfg.graph, "Edge-list file");
  cl->add_option("--k", cfg.k, "Number of clusters");
  cl->add_option("--seed", cfg.seed, "RNG seed");
  cl->add_flag("--normalized", cfg.normalized, "Embed with the normalized Laplacian");
  add_out(cl, "Report path");
  auto* cmp = cl->add_subcommand("compare", "Adjusted Rand index of two label files");
  cmp->add_option("labels", cfg.label_files, "Two label files")->required()->expected(2);
  add_out(cmp, "Report path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cout << error_object("usage", e.what()).dump() << "\n";
    return 2;
  }

  try {
    json doc;
    bool report_to_out = true;
    if (*lap) {
      doc = laplacian_report(cfg);
    } else if (*part) {
      doc = partition_report(cfg);
    } else if (*sp) {
      doc = sparsify_report(cfg);
      report_to_out = false;
    } else if (*ver) {
      doc = verify_report(cfg);
    } else if (*uni) {
      doc = union_report(cfg);
      report_to_out = false;
    } else if (*vs) {
      doc = verify_sunflower_report(cfg);
    } else if (*bc) {
      doc = broadcast_report(cfg);
    } else if (*ex) {
      doc = exchange_report(cfg);
    } else if (*cmp) {
      doc = compare_report(cfg);
    } else if (*cl) {
      if (cfg.graph.empty() || cfg.k == 0) {
        std::cout << error_object("usage", "cluster needs --graph and --k >= 1").dump()
                  << "\n";
        return 2;
      }
      doc = cluster_report(cfg);
    }
    emit(doc, report_to_out ? cfg.out : std::string());
  } catch (const ds::Error& e) {
    std::cout << error_object(e.kind(), e.what()).dump() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cout << error_object("internal", e.what()).dump() << "\n";
    return 1;
  }
  return 0;
}
