#include "embnet/netmetrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_set>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "embnet/community.hpp"
#include "embnet/error.hpp"
#include "embnet/neighbors.hpp"
#include "embnet/random.hpp"

namespace embnet {

namespace {

int resolve_threads(int threads) {
    if (threads > 0) return threads;
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

std::size_t sorted_intersection_size(const std::vector<NodeId>& a, const std::vector<NodeId>& b) {
    std::size_t count = 0;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (*ia < *ib) {
            ++ia;
        } else if (*ib < *ia) {
            ++ib;
        } else {
            ++count;
            ++ia;
            ++ib;
        }
    }
    return count;
}

} // namespace

std::vector<double> local_clustering(const UndirectedGraph& g) {
    const std::size_t n = g.num_nodes();
    std::vector<double> cc(n, 0.0);
    for (NodeId v = 0; v < n; ++v) {
        const auto& nbrs = g.neighbors(v);
        const std::size_t deg = nbrs.size();
        if (deg < 2) continue;
        // sum over neighbors u of |adj(v) ∩ adj(u)| counts each wedge closure
        // twice, which is exactly 2 * triangles(v).
        std::size_t closed = 0;
        for (NodeId u : nbrs) {
            closed += sorted_intersection_size(nbrs, g.neighbors(u));
        }
        cc[v] = static_cast<double>(closed) / static_cast<double>(deg * (deg - 1));
    }
    return cc;
}

double clustering_coefficient(const UndirectedGraph& g) {
    if (g.num_nodes() == 0) {
        throw ValidationError("clustering_coefficient: empty graph");
    }
    const auto cc = local_clustering(g);
    double sum = 0.0;
    for (double v : cc) sum += v;
    return sum / static_cast<double>(cc.size());
}

namespace {

// Sum of BFS distances from `source` to every reachable node; count returned
// for connectivity checks.
std::pair<std::uint64_t, std::size_t> bfs_distance_sum(const UndirectedGraph& g, NodeId source,
                                                       std::vector<std::int32_t>& dist,
                                                       std::vector<NodeId>& queue) {
    std::fill(dist.begin(), dist.end(), -1);
    queue.clear();
    queue.push_back(source);
    dist[source] = 0;
    std::uint64_t sum = 0;
    std::size_t visited = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const NodeId v = queue[head];
        ++visited;
        sum += static_cast<std::uint64_t>(dist[v]);
        for (NodeId w : g.neighbors(v)) {
            if (dist[w] < 0) {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    return {sum, visited};
}

double mean_bfs_distance(const UndirectedGraph& g, const std::vector<NodeId>& sources,
                         int threads) {
    const std::size_t n = g.num_nodes();
    if (n < 2) {
        throw ValidationError("average path length requires at least 2 nodes");
    }
    std::vector<std::uint64_t> sums(sources.size(), 0);
    std::vector<std::uint8_t> connected(sources.size(), 1);

    const int nthreads = resolve_threads(threads);
#pragma omp parallel num_threads(nthreads)
    {
        std::vector<std::int32_t> dist(n);
        std::vector<NodeId> queue;
        queue.reserve(n);
#pragma omp for schedule(dynamic, 8)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(sources.size()); ++i) {
            const auto [sum, visited] = bfs_distance_sum(g, sources[i], dist, queue);
            sums[i] = sum;
            if (visited != n) connected[i] = 0;
        }
    }
    for (std::uint8_t ok : connected) {
        if (!ok) {
            throw ValidationError("average path length requires a connected graph");
        }
    }
    // Integer partial sums combined in source order: thread-count independent.
    std::uint64_t total = 0;
    for (std::uint64_t s : sums) total += s;
    return static_cast<double>(total) /
           (static_cast<double>(sources.size()) * static_cast<double>(n - 1));
}

} // namespace

double average_path_length_exact(const UndirectedGraph& g, int threads) {
    std::vector<NodeId> sources(g.num_nodes());
    std::iota(sources.begin(), sources.end(), 0u);
    return mean_bfs_distance(g, sources, threads);
}

double average_path_length_sampled(const UndirectedGraph& g, std::size_t sources,
                                   std::uint64_t seed, int threads) {
    const std::size_t n = g.num_nodes();
    if (sources < 1 || sources > n) {
        throw ValidationError("sources must satisfy 1 <= sources <= n");
    }
    rng::Engine eng(seed);
    const std::vector<NodeId> chosen = rng::sample_indices(n, sources, eng);
    return mean_bfs_distance(g, chosen, threads);
}

std::map<std::size_t, std::size_t> degree_distribution(const UndirectedGraph& g) {
    std::map<std::size_t, std::size_t> hist;
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
        ++hist[g.degree(v)];
    }
    return hist;
}

PowerLawFit power_law_exponent(const std::map<std::size_t, std::size_t>& hist,
                               std::size_t x_min) {
    if (x_min < 1) {
        throw ValidationError("power_law_exponent requires x_min >= 1");
    }
    std::size_t tail = 0;
    std::size_t distinct = 0;
    double log_sum = 0.0;
    const double shift = static_cast<double>(x_min) - 0.5;
    for (const auto& [degree, count] : hist) {
        if (degree < x_min || count == 0) continue;
        ++distinct;
        tail += count;
        log_sum += static_cast<double>(count) * std::log(static_cast<double>(degree) / shift);
    }
    if (distinct < 2) {
        throw ValidationError("power-law fit needs at least 2 distinct degrees >= x_min");
    }
    PowerLawFit fit;
    fit.x_min = x_min;
    fit.tail_count = tail;
    fit.alpha = 1.0 + static_cast<double>(tail) / log_sum;
    fit.gamma = -fit.alpha;
    return fit;
}

UndirectedGraph er_graph(std::size_t n, std::size_t m, std::uint64_t seed) {
    if (n < 1) {
        throw ValidationError("er_graph requires n >= 1");
    }
    const std::size_t max_edges = n * (n - 1) / 2;
    if (m > max_edges) {
        throw ValidationError("er_graph: m exceeds n(n-1)/2");
    }
    rng::Engine eng(seed);

    // Sample the sparser side and complement if needed so rejection stays fast.
    const bool complement = m > max_edges / 2;
    const std::size_t want = complement ? max_edges - m : m;

    std::unordered_set<std::uint64_t> picked;
    picked.reserve(want * 2 + 1);
    auto key = [n](NodeId u, NodeId v) {
        return static_cast<std::uint64_t>(std::min(u, v)) * n + std::max(u, v);
    };
    while (picked.size() < want) {
        const auto u = static_cast<NodeId>(rng::uniform_below(eng, n));
        const auto v = static_cast<NodeId>(rng::uniform_below(eng, n));
        if (u == v) continue;
        picked.insert(key(u, v));
    }

    std::vector<std::pair<NodeId, NodeId>> edges;
    edges.reserve(m);
    if (complement) {
        for (NodeId u = 0; u < n; ++u) {
            for (NodeId v = u + 1; v < n; ++v) {
                if (!picked.contains(key(u, v))) edges.emplace_back(u, v);
            }
        }
    } else {
        for (std::uint64_t k : picked) {
            edges.emplace_back(static_cast<NodeId>(k / n), static_cast<NodeId>(k % n));
        }
    }
    return UndirectedGraph::from_edges(n, std::move(edges));
}

ErBaseline er_baseline(std::size_t n, std::size_t m, std::size_t sources, std::uint64_t seed) {
    if (n < 2) {
        throw ValidationError("er_baseline requires n >= 2");
    }
    ErBaseline out;
    out.c_random = 2.0 * static_cast<double>(m) /
                   (static_cast<double>(n) * static_cast<double>(n - 1));
    if (m == 0) {
        out.pl_random = std::numeric_limits<double>::quiet_NaN();
        return out;
    }
    UndirectedGraph g = er_graph(n, m, seed);
    const ComponentLabeling comps = components(g);
    if (comps.count() > 1) {
        g = giant_component(g);
    }
    const std::size_t usable = std::min(sources, g.num_nodes());
    out.pl_random = average_path_length_sampled(g, usable, seed);
    return out;
}

std::vector<double> pagerank(const UndirectedGraph& g, double damping, double tol,
                             std::size_t max_iterations) {
    if (!(damping > 0.0 && damping < 1.0)) {
        throw ValidationError("pagerank requires 0 < damping < 1");
    }
    if (!(tol > 0.0)) {
        throw ValidationError("pagerank requires tol > 0");
    }
    const std::size_t n = g.num_nodes();
    if (n == 0) {
        throw ValidationError("pagerank: empty graph");
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    std::vector<double> score(n, inv_n);
    std::vector<double> next(n, 0.0);

    for (std::size_t iter = 0; iter < max_iterations; ++iter) {
        double dangling = 0.0;
        for (NodeId v = 0; v < n; ++v) {
            if (g.degree(v) == 0) dangling += score[v];
        }
        const double base = (1.0 - damping) * inv_n + damping * dangling * inv_n;
        for (NodeId v = 0; v < n; ++v) {
            double in = 0.0;
            for (NodeId w : g.neighbors(v)) {
                in += score[w] / static_cast<double>(g.degree(w));
            }
            next[v] = base + damping * in;
        }
        double delta = 0.0;
        for (NodeId v = 0; v < n; ++v) delta += std::abs(next[v] - score[v]);
        score.swap(next);
        if (delta <= tol) break;
    }
    return score;
}

namespace {

SweepPoint measure_point(const UndirectedGraph& g, double param, std::uint64_t louvain_seed) {
    SweepPoint pt;
    pt.param = param;
    pt.edges = g.num_edges();
    const ComponentLabeling comps = components(g);
    pt.components = comps.count();
    pt.gcc_fraction = comps.gcc_fraction();
    pt.clustering = clustering_coefficient(g);
    pt.modularity = g.num_edges() > 0 ? louvain(g, louvain_seed).q : 0.0;
    return pt;
}

} // namespace

SweepCurve sweep_knn(const EmbeddingMatrix& m, const std::vector<std::size_t>& ks,
                     std::uint64_t louvain_seed, int threads) {
    if (ks.empty() || !std::is_sorted(ks.begin(), ks.end()) ||
        std::adjacent_find(ks.begin(), ks.end()) != ks.end()) {
        throw ValidationError("sweep_knn: ks must be non-empty and strictly increasing");
    }
    const NeighborTable table = knn_all(m, ks.back(), threads);
    SweepCurve curve;
    curve.points.reserve(ks.size());
    for (std::size_t k : ks) {
        const UndirectedGraph g = induce_knn_graph(table.knn_prefix(k), m.vocab());
        curve.points.push_back(measure_point(g, static_cast<double>(k), louvain_seed));
    }
    return curve;
}

SweepCurve sweep_proximity(const EmbeddingMatrix& m, const std::vector<double>& ds,
                           std::uint64_t louvain_seed, int threads) {
    if (ds.empty() || !std::is_sorted(ds.begin(), ds.end()) ||
        std::adjacent_find(ds.begin(), ds.end()) != ds.end()) {
        throw ValidationError("sweep_proximity: ds must be non-empty and strictly increasing");
    }
    if (!(ds.front() > 0.0)) {
        throw ValidationError("sweep_proximity: ds must be positive");
    }
    const NeighborTable table = radius_all(m, ds.back(), threads);
    SweepCurve curve;
    curve.points.reserve(ds.size());
    for (double d : ds) {
        const UndirectedGraph g = induce_proximity_graph(table.radius_restrict(d), m.vocab());
        curve.points.push_back(measure_point(g, d, louvain_seed));
    }
    return curve;
}

MetricsReport compute_metrics(const UndirectedGraph& g, const MetricsOptions& opt) {
    if (g.num_nodes() == 0) {
        throw ValidationError("compute_metrics: empty graph");
    }
    MetricsReport r;
    r.n = g.num_nodes();
    r.m = g.num_edges();

    const ComponentLabeling comps = components(g);
    r.num_components = comps.count();
    r.gcc_fraction = comps.gcc_fraction();
    r.clustering_coefficient = clustering_coefficient(g);
    r.degree_histogram = degree_distribution(g);

    const UndirectedGraph gcc = r.num_components == 1 ? g : giant_component(g);
    if (gcc.num_nodes() >= 2) {
        if (gcc.num_nodes() <= opt.exact_threshold) {
            r.avg_path_length = average_path_length_exact(gcc);
            r.pl_estimated = false;
        } else {
            const std::size_t sources = std::min(opt.path_sources, gcc.num_nodes());
            r.avg_path_length = average_path_length_sampled(gcc, sources, opt.seed);
            r.pl_estimated = true;
        }
        const std::size_t er_sources = std::min(
            opt.path_sources > 0 ? opt.path_sources : gcc.num_nodes(), gcc.num_nodes());
        const ErBaseline base = er_baseline(gcc.num_nodes(), gcc.num_edges(), er_sources, opt.seed);
        r.c_random = base.c_random;
        r.pl_random = base.pl_random;
    } else {
        r.avg_path_length = std::numeric_limits<double>::quiet_NaN();
        r.pl_random = std::numeric_limits<double>::quiet_NaN();
        r.c_random = 0.0;
    }

    std::size_t x_min = opt.x_min;
    if (x_min == 0) {
        x_min = opt.induction_k;
    }
    if (x_min == 0) {
        // smallest positive degree present
        for (const auto& [degree, count] : r.degree_histogram) {
            if (degree >= 1 && count > 0) {
                x_min = degree;
                break;
            }
        }
    }
    r.x_min = x_min;
    if (x_min > 0) {
        try {
            const PowerLawFit fit = power_law_exponent(r.degree_histogram, x_min);
            r.alpha = fit.alpha;
            r.gamma = fit.gamma;
        } catch (const ValidationError&) {
            r.alpha = std::numeric_limits<double>::quiet_NaN();
            r.gamma = std::numeric_limits<double>::quiet_NaN();
        }
    } else {
        r.alpha = std::numeric_limits<double>::quiet_NaN();
        r.gamma = std::numeric_limits<double>::quiet_NaN();
    }
    return r;
}

} // namespace embnet
