#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "embnet/embedding.hpp"

namespace embnet {

struct Neighbor {
    NodeId index;
    double distance;
    bool operator==(const Neighbor&) const = default;
};

// Per-query neighbor lists, ascending by (distance, index), self excluded.
// k-mode lists hold exactly min(k, n-1) entries; radius-mode lists hold all
// neighbors with distance < radius.
struct NeighborTable {
    enum class Mode { knn, radius };

    Mode mode = Mode::knn;
    std::size_t k = 0;
    double radius = 0.0;
    std::size_t pool_size = 0;                // rows of the searched matrix
    std::vector<NodeId> queries;              // ascending, unique
    std::vector<std::vector<Neighbor>> lists; // parallel to queries

    bool covers_all_nodes() const { return queries.size() == pool_size; }

    // First min(k', len) entries per list; valid because k-NN lists at k are
    // prefixes of lists at any larger k.
    NeighborTable knn_prefix(std::size_t k_smaller) const;

    // Entries with distance < d per list; valid because lists are sorted.
    NeighborTable radius_restrict(double d) const;
};

// Eq: (sum_i (x_i - y_i)^2)^(1/2). Throws ValidationError on dimension mismatch.
double euclidean_distance(std::span<const double> x, std::span<const double> y);

// Same sum without the root; ranking primitive shared by all search paths.
double squared_distance(std::span<const double> x, std::span<const double> y);

// Exact k nearest rows per query row, ties broken by ascending index.
// Blocked over queries, parallel; output independent of thread count.
// threads = 0 means the OpenMP default.
NeighborTable knn_all(const EmbeddingMatrix& m, std::size_t k, int threads = 0);

// k-NN lists only for the given query indices; candidates are the full matrix.
NeighborTable knn_for_queries(const EmbeddingMatrix& m, std::vector<NodeId> queries,
                              std::size_t k, int threads = 0);

// All rows with distance strictly below d per query.
NeighborTable radius_all(const EmbeddingMatrix& m, double d, int threads = 0);

// Unoptimized single-threaded reference: full sort of all pairwise distances.
NeighborTable knn_oracle(const EmbeddingMatrix& m, std::size_t k);

} // namespace embnet
