#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "embnet/community.hpp"
#include "embnet/graph.hpp"
#include "embnet/neighbors.hpp"
#include "embnet/netmetrics.hpp"

namespace embnet::io {

// All writers build the full payload in memory and publish it with a
// write-to-temporary-then-rename, so failed runs leave no partial artifacts.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

// Two tab-separated token columns, one edge per line, u's index < v's index,
// ordered by (u index, v index). Carries no isolated nodes.
std::string edge_list_tsv(const UndirectedGraph& g);
void write_edge_list(const UndirectedGraph& g, const std::filesystem::path& path);

// Rebuilds a graph from an edge list; node ids assigned by first appearance.
UndirectedGraph read_edge_list(const std::filesystem::path& path);

struct GraphmlOptions {
    const Partition* communities = nullptr;  // adds community_id per node
    const std::vector<double>* pagerank = nullptr; // adds pagerank per node
};

// Gephi-ready GraphML with node attributes label, degree and the optional
// extras above.
std::string graphml(const UndirectedGraph& g, const GraphmlOptions& opt = {});
void write_graphml(const UndirectedGraph& g, const std::filesystem::path& path,
                   const GraphmlOptions& opt = {});

// token TAB community_id, rows in node order, communities renumbered by
// descending size (ties toward the smallest member node).
std::string partition_tsv(const UndirectedGraph& g, const Partition& p);
void write_partition(const UndirectedGraph& g, const Partition& p,
                     const std::filesystem::path& path);

// query_token TAB neighbor_token TAB distance (6 decimals), grouped by query
// in list order.
std::string neighbor_tsv(const NeighborTable& nt, const Vocabulary& vocab);
void write_neighbors(const NeighborTable& nt, const Vocabulary& vocab,
                     const std::filesystem::path& path);

std::string metrics_json(const MetricsReport& r);
void write_metrics(const MetricsReport& r, const std::filesystem::path& path);

// Header line then one row per parameter value:
// param, edges, components, gcc_fraction, clustering, modularity.
std::string sweep_tsv(const SweepCurve& curve);
void write_sweep(const SweepCurve& curve, const std::filesystem::path& path);

} // namespace embnet::io
