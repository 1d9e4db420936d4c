#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "embnet/embedding.hpp"
#include "embnet/neighbors.hpp"

namespace embnet {

// Simple undirected graph: no self-loops, no multi-edges, adjacency sorted
// ascending. Node ids are 0..n-1; optional token labels ride along.
class UndirectedGraph {
public:
    UndirectedGraph() = default;
    explicit UndirectedGraph(std::size_t n, std::vector<std::string> labels = {});

    // Deduplicates; throws ValidationError on self-loops or out-of-range ids.
    static UndirectedGraph from_edges(std::size_t n,
                                      std::vector<std::pair<NodeId, NodeId>> edges,
                                      std::vector<std::string> labels = {});

    // Sorted insert for small fixtures; returns false if the edge existed.
    bool add_edge(NodeId u, NodeId v);

    std::size_t num_nodes() const { return adj_.size(); }
    std::size_t num_edges() const { return edge_count_; }
    std::size_t degree(NodeId v) const { return adj_[v].size(); }
    const std::vector<NodeId>& neighbors(NodeId v) const { return adj_[v]; }
    bool has_edge(NodeId u, NodeId v) const;

    bool has_labels() const { return !labels_.empty(); }
    const std::vector<std::string>& labels() const { return labels_; }
    // Token when labels are present, decimal node id otherwise.
    std::string label(NodeId v) const;

    // Visits each edge once as (u, v) with u < v, ascending by (u, v).
    template <typename Fn>
    void for_each_edge(Fn&& fn) const {
        for (NodeId u = 0; u < adj_.size(); ++u) {
            for (NodeId v : adj_[u]) {
                if (v > u) fn(u, v);
            }
        }
    }

private:
    std::vector<std::vector<NodeId>> adj_;
    std::vector<std::string> labels_;
    std::size_t edge_count_ = 0;
};

// Component id per node; component 0 is the largest (ties broken by the
// smallest contained node id), sizes descending.
struct ComponentLabeling {
    std::vector<std::uint32_t> component_of;
    std::vector<std::size_t> sizes;

    std::size_t count() const { return sizes.size(); }
    double gcc_fraction() const {
        return component_of.empty()
                   ? 0.0
                   : static_cast<double>(sizes.front()) / static_cast<double>(component_of.size());
    }
};

// Edge {u,v} iff v is among u's k nearest or vice versa; reciprocal directed
// pairs merge. Requires a k-mode table covering all nodes.
UndirectedGraph induce_knn_graph(const NeighborTable& nt);
UndirectedGraph induce_knn_graph(const NeighborTable& nt, const Vocabulary& vocab);

// Edge {u,v} iff dist(u,v) < d. Requires a radius-mode table over all nodes.
UndirectedGraph induce_proximity_graph(const NeighborTable& nt);
UndirectedGraph induce_proximity_graph(const NeighborTable& nt, const Vocabulary& vocab);

// Node set = queries plus all returned neighbors; edges are the symmetrized
// query->neighbor links. Node ids are compacted, ascending in original index.
UndirectedGraph induce_ego_graph(const NeighborTable& nt);
UndirectedGraph induce_ego_graph(const NeighborTable& nt, const Vocabulary& vocab);

ComponentLabeling components(const UndirectedGraph& g);

// Induced subgraph on the largest component.
UndirectedGraph giant_component(const UndirectedGraph& g);

} // namespace embnet
