#include "embnet/community.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "embnet/error.hpp"
#include "embnet/random.hpp"

namespace embnet {

namespace {

void validate_assignment(const UndirectedGraph& g, const std::vector<std::int32_t>& assignment) {
    if (g.num_nodes() == 0 || g.num_edges() == 0) {
        throw ValidationError("modularity requires a graph with at least one edge");
    }
    if (assignment.size() != g.num_nodes()) {
        throw ValidationError("assignment does not cover all nodes");
    }
    for (std::int32_t c : assignment) {
        if (c < 0 || static_cast<std::size_t>(c) >= assignment.size()) {
            throw ValidationError("community id out of range");
        }
    }
}

} // namespace

double modularity(const UndirectedGraph& g, const std::vector<std::int32_t>& assignment) {
    validate_assignment(g, assignment);
    const std::size_t n = g.num_nodes();
    std::vector<std::int64_t> intra(n, 0);
    std::vector<std::int64_t> deg(n, 0);
    g.for_each_edge([&](NodeId u, NodeId v) {
        if (assignment[u] == assignment[v]) ++intra[assignment[u]];
    });
    for (NodeId v = 0; v < n; ++v) {
        deg[assignment[v]] += static_cast<std::int64_t>(g.degree(v));
    }
    const double m = static_cast<double>(g.num_edges());
    double q = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
        if (deg[c] == 0 && intra[c] == 0) continue;
        const double frac = static_cast<double>(deg[c]) / (2.0 * m);
        q += static_cast<double>(intra[c]) / m - frac * frac;
    }
    return q;
}

double modularity(const UndirectedGraph& g, const Partition& p) {
    return modularity(g, p.labels);
}

namespace {

// Aggregated level graph. Undirected edges stored once per direction in adj;
// self-loops kept separately. wdeg counts self-loops twice; total_weight is
// the sum of all edge weights with self-loops counted once.
struct LevelGraph {
    std::vector<std::vector<std::pair<std::uint32_t, double>>> adj;
    std::vector<double> self_loop;
    std::vector<double> wdeg;
    double total_weight = 0.0;

    std::size_t size() const { return adj.size(); }
};

LevelGraph level_from(const UndirectedGraph& g) {
    LevelGraph lg;
    const std::size_t n = g.num_nodes();
    lg.adj.resize(n);
    lg.self_loop.assign(n, 0.0);
    lg.wdeg.assign(n, 0.0);
    for (NodeId v = 0; v < n; ++v) {
        lg.adj[v].reserve(g.degree(v));
        for (NodeId w : g.neighbors(v)) {
            lg.adj[v].push_back({w, 1.0});
        }
        lg.wdeg[v] = static_cast<double>(g.degree(v));
    }
    lg.total_weight = static_cast<double>(g.num_edges());
    return lg;
}

// One local-moving phase. Returns true if any node changed community.
bool local_moving(const LevelGraph& lg, std::vector<std::int32_t>& comm, rng::Engine& eng) {
    const std::size_t n = lg.size();
    const double two_w = 2.0 * lg.total_weight;
    constexpr double kMinGain = 1e-12; // guards against float-noise cycling

    std::vector<double> comm_wdeg(n, 0.0);
    for (std::size_t v = 0; v < n; ++v) comm_wdeg[comm[v]] += lg.wdeg[v];

    // Scratch accumulator for weights from the current node to each community.
    std::vector<double> link_weight(n, 0.0);
    std::vector<std::int32_t> touched;

    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);

    bool any_move = false;
    bool moved_this_pass = true;
    std::size_t pass = 0;
    while (moved_this_pass && pass < 128) {
        ++pass;
        moved_this_pass = false;
        rng::shuffle(order, eng);
        for (std::uint32_t v : order) {
            const std::int32_t c_old = comm[v];

            touched.clear();
            link_weight[c_old] = 0.0;
            touched.push_back(c_old);
            for (const auto& [w, weight] : lg.adj[v]) {
                const std::int32_t c = comm[w];
                if (link_weight[c] == 0.0 && c != c_old) touched.push_back(c);
                link_weight[c] += weight;
            }

            comm_wdeg[c_old] -= lg.wdeg[v];

            // gain(c) = k_{v->c} - wdeg(c) * wdeg(v) / 2W, constant terms
            // dropped. Candidate scan order is the (deterministic) adjacency
            // discovery order; ties go to the smallest community id.
            const double scale = lg.wdeg[v] / two_w;
            double best_gain = link_weight[c_old] - comm_wdeg[c_old] * scale;
            std::int32_t best_c = c_old;
            for (std::int32_t c : touched) {
                if (c == c_old) continue;
                const double gain = link_weight[c] - comm_wdeg[c] * scale;
                const double improvement = gain - best_gain;
                if (improvement > kMinGain || (improvement == 0.0 && c < best_c && best_c != c_old)) {
                    best_gain = gain;
                    best_c = c;
                }
            }

            comm_wdeg[best_c] += lg.wdeg[v];
            for (std::int32_t c : touched) link_weight[c] = 0.0;
            if (best_c != c_old) {
                comm[v] = best_c;
                moved_this_pass = true;
                any_move = true;
            }
        }
    }
    return any_move;
}

// Renumber communities densely, ordered by their smallest member node.
std::size_t compact_labels(std::vector<std::int32_t>& comm) {
    std::vector<std::int32_t> remap(comm.size(), -1);
    std::int32_t next = 0;
    for (std::int32_t& c : comm) {
        if (remap[c] < 0) remap[c] = next++;
        c = remap[c];
    }
    return static_cast<std::size_t>(next);
}

LevelGraph aggregate(const LevelGraph& lg, const std::vector<std::int32_t>& comm,
                     std::size_t num_comms) {
    LevelGraph next;
    next.adj.resize(num_comms);
    next.self_loop.assign(num_comms, 0.0);
    next.wdeg.assign(num_comms, 0.0);
    next.total_weight = lg.total_weight;

    std::vector<double> row(num_comms, 0.0);
    std::vector<std::int32_t> touched;
    for (std::int32_t cu = 0; cu < static_cast<std::int32_t>(num_comms); ++cu) {
        next.adj[cu].reserve(8);
    }

    // Group original nodes by community for deterministic accumulation order.
    std::vector<std::vector<std::uint32_t>> members(num_comms);
    for (std::uint32_t v = 0; v < lg.size(); ++v) {
        members[comm[v]].push_back(v);
    }

    for (std::int32_t cu = 0; cu < static_cast<std::int32_t>(num_comms); ++cu) {
        touched.clear();
        double self = 0.0;
        for (std::uint32_t v : members[cu]) {
            self += lg.self_loop[v];
            for (const auto& [w, weight] : lg.adj[v]) {
                const std::int32_t cw = comm[w];
                if (cw == cu) {
                    self += 0.5 * weight; // both directions visited
                } else {
                    if (row[cw] == 0.0) touched.push_back(cw);
                    row[cw] += weight;
                }
            }
        }
        std::sort(touched.begin(), touched.end());
        for (std::int32_t cw : touched) {
            next.adj[cu].push_back({static_cast<std::uint32_t>(cw), row[cw]});
            row[cw] = 0.0;
        }
        next.self_loop[cu] = self;
    }
    for (std::size_t c = 0; c < num_comms; ++c) {
        double d = 2.0 * next.self_loop[c];
        for (const auto& [w, weight] : next.adj[c]) d += weight;
        next.wdeg[c] = d;
    }
    return next;
}

} // namespace

LouvainResult louvain_detailed(const UndirectedGraph& g, std::uint64_t seed) {
    if (g.num_nodes() == 0 || g.num_edges() == 0) {
        throw ValidationError("louvain requires a graph with at least one edge");
    }
    rng::Engine eng(seed);
    const std::size_t n = g.num_nodes();

    // flat[v] = community of original node v at the current level.
    std::vector<std::int32_t> flat(n);
    std::iota(flat.begin(), flat.end(), 0);

    LevelGraph level = level_from(g);
    std::vector<std::int32_t> comm(level.size());
    std::iota(comm.begin(), comm.end(), 0);

    LouvainResult result;
    while (true) {
        const bool moved = local_moving(level, comm, eng);
        if (!moved) break;
        const std::size_t num_comms = compact_labels(comm);
        for (std::int32_t& c : flat) c = comm[c];
        result.level_modularity.push_back(modularity(g, flat));
        if (num_comms == level.size()) break;
        level = aggregate(level, comm, num_comms);
        comm.resize(num_comms);
        std::iota(comm.begin(), comm.end(), 0);
    }

    compact_labels(flat);
    Partition p{std::move(flat)};
    p.q = modularity(g, p.labels);
    if (result.level_modularity.empty()) {
        result.level_modularity.push_back(p.q);
    }
    result.partition = std::move(p);
    return result;
}

Partition louvain(const UndirectedGraph& g, std::uint64_t seed) {
    return louvain_detailed(g, seed).partition;
}

double compare_partitions(const Partition& a, const Partition& b) {
    if (a.labels.size() != b.labels.size()) {
        throw ValidationError("compare_partitions: node sets differ");
    }
    const std::size_t n = a.labels.size();
    if (n == 0) {
        throw ValidationError("compare_partitions: empty partitions");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (a.labels[i] < 0 || b.labels[i] < 0) {
            throw ValidationError("compare_partitions: negative community id");
        }
    }
    const std::size_t ca = a.num_communities();
    const std::size_t cb = b.num_communities();

    // Integer contingency counts; ratios of exact integers keep the trivial
    // cases (MI = 0, NMI = 1) exact.
    std::vector<std::int64_t> na(ca, 0), nb(cb, 0);
    std::vector<std::vector<std::int64_t>> joint(ca, std::vector<std::int64_t>(cb, 0));
    for (std::size_t i = 0; i < n; ++i) {
        const auto x = static_cast<std::size_t>(a.labels[i]);
        const auto y = static_cast<std::size_t>(b.labels[i]);
        ++na[x];
        ++nb[y];
        ++joint[x][y];
    }

    const double dn = static_cast<double>(n);
    auto entropy = [&](const std::vector<std::int64_t>& counts) {
        double h = 0.0;
        for (std::int64_t c : counts) {
            if (c > 0) {
                h += static_cast<double>(c) *
                     std::log(dn / static_cast<double>(c));
            }
        }
        return h / dn;
    };
    const double ha = entropy(na);
    const double hb = entropy(nb);
    if (ha == 0.0 && hb == 0.0) return 1.0; // both trivial

    double mi = 0.0;
    for (std::size_t x = 0; x < ca; ++x) {
        for (std::size_t y = 0; y < cb; ++y) {
            const std::int64_t j = joint[x][y];
            if (j > 0) {
                const double ratio = (dn * static_cast<double>(j)) /
                                     (static_cast<double>(na[x]) * static_cast<double>(nb[y]));
                mi += static_cast<double>(j) * std::log(ratio);
            }
        }
    }
    mi /= dn;
    const double nmi = mi / (0.5 * (ha + hb));
    return std::clamp(nmi, 0.0, 1.0);
}

} // namespace embnet
