#pragma once

#include <cstdint>
#include <vector>

#include "embnet/graph.hpp"
#include "embnet/partition.hpp"

namespace embnet {

// Q = sum_c [ e_c/m - (d_c/2m)^2 ] over communities, with e_c the number of
// intra-community edges, d_c the total degree of community c, m = |E|.
double modularity(const UndirectedGraph& g, const std::vector<std::int32_t>& assignment);
double modularity(const UndirectedGraph& g, const Partition& p);

struct LouvainResult {
    Partition partition;
    // Modularity of the flattened partition on the original graph after each
    // level's local-moving phase; non-decreasing.
    std::vector<double> level_modularity;
};

// Two-phase Louvain: seeded-shuffle local moving, then aggregation, repeated
// until no move improves Q. Ties in gain break toward the smallest community
// id. The returned q equals modularity(g, partition) exactly.
Partition louvain(const UndirectedGraph& g, std::uint64_t seed);
LouvainResult louvain_detailed(const UndirectedGraph& g, std::uint64_t seed);

// Normalized mutual information, arithmetic-mean normalization. Two
// zero-entropy partitions compare as 1.
double compare_partitions(const Partition& a, const Partition& b);

} // namespace embnet
