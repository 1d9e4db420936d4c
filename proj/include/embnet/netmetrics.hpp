#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "embnet/embedding.hpp"
#include "embnet/graph.hpp"

namespace embnet {

// Table-style summary of one induced network. gamma/alpha are NaN when the
// degree distribution admits no power-law fit.
struct MetricsReport {
    std::size_t n = 0;
    std::size_t m = 0;
    std::size_t num_components = 0;
    double gcc_fraction = 0.0;
    double clustering_coefficient = 0.0;
    double c_random = 0.0;
    double avg_path_length = 0.0;
    bool pl_estimated = false;
    double pl_random = 0.0;
    double gamma = 0.0;
    double alpha = 0.0;
    std::size_t x_min = 0;
    std::map<std::size_t, std::size_t> degree_histogram;
};

struct SweepPoint {
    double param = 0.0; // k or d
    std::size_t edges = 0;
    std::size_t components = 0;
    double gcc_fraction = 0.0;
    double clustering = 0.0;
    double modularity = 0.0;
};

struct SweepCurve {
    std::vector<SweepPoint> points;
};

struct PowerLawFit {
    double alpha = 0.0;        // MLE exponent, positive
    double gamma = 0.0;        // -alpha, the reported sign convention
    std::size_t x_min = 0;
    std::size_t tail_count = 0; // samples with degree >= x_min
};

// Local clustering coefficient per node; degree < 2 contributes 0.
std::vector<double> local_clustering(const UndirectedGraph& g);

// Mean of local_clustering over all nodes.
double clustering_coefficient(const UndirectedGraph& g);

// Mean shortest-path distance over all unordered node pairs; input must be
// connected.
double average_path_length_exact(const UndirectedGraph& g, int threads = 0);

// Mean BFS distance from `sources` seeded-sampled source nodes to all other
// nodes. sources = n reproduces the exact value bit-for-bit.
double average_path_length_sampled(const UndirectedGraph& g, std::size_t sources,
                                   std::uint64_t seed, int threads = 0);

std::map<std::size_t, std::size_t> degree_distribution(const UndirectedGraph& g);

// Discrete MLE via the continuous approximation
// alpha = 1 + N / sum ln(d_i / (x_min - 1/2)) over degrees >= x_min.
PowerLawFit power_law_exponent(const std::map<std::size_t, std::size_t>& hist, std::size_t x_min);

// Uniform random graph with exactly m edges.
UndirectedGraph er_graph(std::size_t n, std::size_t m, std::uint64_t seed);

struct ErBaseline {
    double c_random = 0.0;  // analytic 2m / (n(n-1))
    double pl_random = 0.0; // sampled on a generated G(n,m), GCC if disconnected
};

ErBaseline er_baseline(std::size_t n, std::size_t m, std::size_t sources, std::uint64_t seed);

// Power iteration on the undirected graph, each edge a directed pair;
// isolated nodes redistribute uniformly. Scores sum to 1 within tol.
std::vector<double> pagerank(const UndirectedGraph& g, double damping = 0.85,
                             double tol = 1e-10, std::size_t max_iterations = 200);

// One neighbor table at max(ks), list prefixes per k. Modularity per point is
// Louvain's Q at louvain_seed.
SweepCurve sweep_knn(const EmbeddingMatrix& m, const std::vector<std::size_t>& ks,
                     std::uint64_t louvain_seed, int threads = 0);

SweepCurve sweep_proximity(const EmbeddingMatrix& m, const std::vector<double>& ds,
                           std::uint64_t louvain_seed, int threads = 0);

struct MetricsOptions {
    std::size_t path_sources = 1000; // sampled sources on large GCCs
    std::size_t exact_threshold = 2000; // exact path length when GCC n <= this
    std::uint64_t seed = 0;          // path sampling and baseline generation
    std::size_t x_min = 0;           // 0 = auto (induction k, else min positive degree)
    std::size_t induction_k = 0;     // 0 = unknown
};

// Full report: clustering/degree stats on the whole graph, path length on the
// GCC, random baseline matched to the GCC's node and edge counts.
MetricsReport compute_metrics(const UndirectedGraph& g, const MetricsOptions& opt = {});

} // namespace embnet
