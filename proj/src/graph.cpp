#include "embnet/graph.hpp"

#include <algorithm>
#include <numeric>

#include "embnet/error.hpp"

namespace embnet {

UndirectedGraph::UndirectedGraph(std::size_t n, std::vector<std::string> labels)
    : adj_(n), labels_(std::move(labels)) {
    if (!labels_.empty() && labels_.size() != n) {
        throw ValidationError("label count does not match node count");
    }
}

UndirectedGraph UndirectedGraph::from_edges(std::size_t n,
                                            std::vector<std::pair<NodeId, NodeId>> edges,
                                            std::vector<std::string> labels) {
    UndirectedGraph g(n, std::move(labels));
    for (auto& [u, v] : edges) {
        if (u >= n || v >= n) {
            throw ValidationError("edge endpoint out of range");
        }
        if (u == v) {
            throw ValidationError("self-loop rejected: node " + std::to_string(u));
        }
        if (u > v) std::swap(u, v);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    std::vector<std::size_t> deg(n, 0);
    for (const auto& [u, v] : edges) {
        ++deg[u];
        ++deg[v];
    }
    for (std::size_t i = 0; i < n; ++i) g.adj_[i].reserve(deg[i]);
    for (const auto& [u, v] : edges) {
        g.adj_[u].push_back(v);
        g.adj_[v].push_back(u);
    }
    for (auto& list : g.adj_) {
        std::sort(list.begin(), list.end());
    }
    g.edge_count_ = edges.size();
    return g;
}

bool UndirectedGraph::add_edge(NodeId u, NodeId v) {
    if (u >= adj_.size() || v >= adj_.size()) {
        throw ValidationError("edge endpoint out of range");
    }
    if (u == v) {
        throw ValidationError("self-loop rejected: node " + std::to_string(u));
    }
    auto pos = std::lower_bound(adj_[u].begin(), adj_[u].end(), v);
    if (pos != adj_[u].end() && *pos == v) return false;
    adj_[u].insert(pos, v);
    adj_[v].insert(std::lower_bound(adj_[v].begin(), adj_[v].end(), u), u);
    ++edge_count_;
    return true;
}

bool UndirectedGraph::has_edge(NodeId u, NodeId v) const {
    if (u >= adj_.size() || v >= adj_.size()) return false;
    return std::binary_search(adj_[u].begin(), adj_[u].end(), v);
}

std::string UndirectedGraph::label(NodeId v) const {
    if (!labels_.empty()) return labels_[v];
    return std::to_string(v);
}

namespace {

std::vector<std::string> labels_for(const Vocabulary& vocab, const std::vector<NodeId>& nodes) {
    std::vector<std::string> labels;
    labels.reserve(nodes.size());
    for (NodeId v : nodes) labels.push_back(vocab.token(v));
    return labels;
}

void require_full_table(const NeighborTable& nt, NeighborTable::Mode mode, const char* op) {
    if (nt.mode != mode) {
        throw ValidationError(std::string(op) + ": wrong table mode");
    }
    if (!nt.covers_all_nodes()) {
        throw ValidationError(std::string(op) + ": table must cover all nodes");
    }
}

UndirectedGraph symmetrize(const NeighborTable& nt, std::vector<std::string> labels) {
    std::vector<std::pair<NodeId, NodeId>> edges;
    std::size_t total = 0;
    for (const auto& list : nt.lists) total += list.size();
    edges.reserve(total);
    for (std::size_t q = 0; q < nt.queries.size(); ++q) {
        const NodeId u = nt.queries[q];
        for (const Neighbor& nb : nt.lists[q]) {
            edges.emplace_back(u, nb.index);
        }
    }
    return UndirectedGraph::from_edges(nt.pool_size, std::move(edges), std::move(labels));
}

} // namespace

UndirectedGraph induce_knn_graph(const NeighborTable& nt) {
    require_full_table(nt, NeighborTable::Mode::knn, "induce_knn_graph");
    return symmetrize(nt, {});
}

UndirectedGraph induce_knn_graph(const NeighborTable& nt, const Vocabulary& vocab) {
    require_full_table(nt, NeighborTable::Mode::knn, "induce_knn_graph");
    if (vocab.size() != nt.pool_size) {
        throw ValidationError("induce_knn_graph: vocabulary size mismatch");
    }
    return symmetrize(nt, std::vector<std::string>(vocab.tokens()));
}

UndirectedGraph induce_proximity_graph(const NeighborTable& nt) {
    require_full_table(nt, NeighborTable::Mode::radius, "induce_proximity_graph");
    return symmetrize(nt, {});
}

UndirectedGraph induce_proximity_graph(const NeighborTable& nt, const Vocabulary& vocab) {
    require_full_table(nt, NeighborTable::Mode::radius, "induce_proximity_graph");
    if (vocab.size() != nt.pool_size) {
        throw ValidationError("induce_proximity_graph: vocabulary size mismatch");
    }
    return symmetrize(nt, std::vector<std::string>(vocab.tokens()));
}

namespace {

UndirectedGraph ego_graph(const NeighborTable& nt, const Vocabulary* vocab) {
    if (nt.mode != NeighborTable::Mode::knn) {
        throw ValidationError("induce_ego_graph: requires a k-mode table");
    }
    // Keep queries plus every neighbor they reached, compacted in index order.
    std::vector<NodeId> kept(nt.queries);
    for (const auto& list : nt.lists) {
        for (const Neighbor& nb : list) kept.push_back(nb.index);
    }
    std::sort(kept.begin(), kept.end());
    kept.erase(std::unique(kept.begin(), kept.end()), kept.end());

    std::vector<NodeId> compact(nt.pool_size, 0);
    for (std::size_t i = 0; i < kept.size(); ++i) compact[kept[i]] = static_cast<NodeId>(i);

    std::vector<std::pair<NodeId, NodeId>> edges;
    for (std::size_t q = 0; q < nt.queries.size(); ++q) {
        const NodeId u = compact[nt.queries[q]];
        for (const Neighbor& nb : nt.lists[q]) {
            edges.emplace_back(u, compact[nb.index]);
        }
    }
    std::vector<std::string> labels;
    if (vocab) {
        if (vocab->size() != nt.pool_size) {
            throw ValidationError("induce_ego_graph: vocabulary size mismatch");
        }
        labels = labels_for(*vocab, kept);
    }
    return UndirectedGraph::from_edges(kept.size(), std::move(edges), std::move(labels));
}

} // namespace

UndirectedGraph induce_ego_graph(const NeighborTable& nt) { return ego_graph(nt, nullptr); }

UndirectedGraph induce_ego_graph(const NeighborTable& nt, const Vocabulary& vocab) {
    return ego_graph(nt, &vocab);
}

ComponentLabeling components(const UndirectedGraph& g) {
    const std::size_t n = g.num_nodes();
    constexpr std::uint32_t kUnvisited = 0xffffffffu;
    std::vector<std::uint32_t> comp(n, kUnvisited);
    std::vector<std::size_t> sizes;
    std::vector<NodeId> stack;

    // Scanning nodes in ascending order makes provisional ids ordered by each
    // component's smallest node, which settles size ties below.
    for (NodeId start = 0; start < n; ++start) {
        if (comp[start] != kUnvisited) continue;
        const std::uint32_t id = static_cast<std::uint32_t>(sizes.size());
        std::size_t size = 0;
        comp[start] = id;
        stack.push_back(start);
        while (!stack.empty()) {
            const NodeId v = stack.back();
            stack.pop_back();
            ++size;
            for (NodeId w : g.neighbors(v)) {
                if (comp[w] == kUnvisited) {
                    comp[w] = id;
                    stack.push_back(w);
                }
            }
        }
        sizes.push_back(size);
    }

    std::vector<std::uint32_t> order(sizes.size());
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        return sizes[a] > sizes[b];
    });
    std::vector<std::uint32_t> rank(sizes.size());
    for (std::uint32_t i = 0; i < order.size(); ++i) rank[order[i]] = i;

    ComponentLabeling out;
    out.component_of.resize(n);
    for (std::size_t v = 0; v < n; ++v) out.component_of[v] = rank[comp[v]];
    out.sizes.resize(sizes.size());
    for (std::uint32_t i = 0; i < order.size(); ++i) out.sizes[i] = sizes[order[i]];
    return out;
}

UndirectedGraph giant_component(const UndirectedGraph& g) {
    if (g.num_nodes() == 0) {
        throw ValidationError("giant_component: empty graph");
    }
    const ComponentLabeling labeling = components(g);

    std::vector<NodeId> kept;
    kept.reserve(labeling.sizes.front());
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
        if (labeling.component_of[v] == 0) kept.push_back(v);
    }
    std::vector<NodeId> compact(g.num_nodes(), 0);
    for (std::size_t i = 0; i < kept.size(); ++i) compact[kept[i]] = static_cast<NodeId>(i);

    std::vector<std::string> labels;
    if (g.has_labels()) {
        labels.reserve(kept.size());
        for (NodeId v : kept) labels.push_back(g.labels()[v]);
    }
    std::vector<std::pair<NodeId, NodeId>> edges;
    g.for_each_edge([&](NodeId u, NodeId v) {
        if (labeling.component_of[u] == 0) {
            edges.emplace_back(compact[u], compact[v]);
        }
    });
    return UndirectedGraph::from_edges(kept.size(), std::move(edges), std::move(labels));
}

} // namespace embnet
