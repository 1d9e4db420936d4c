#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "embnet/community.hpp"
#include "embnet/error.hpp"
#include "embnet/neighbors.hpp"
#include "embnet/random.hpp"
#include "test_util.hpp"

using namespace embnet;

TEST_CASE("modularity of the all-in-one partition is zero") {
    const UndirectedGraph g = testutil::bridged_triangles();
    const std::vector<std::int32_t> one(6, 0);
    CHECK(modularity(g, one) == 0.0);
}

TEST_CASE("modularity of the bridged triangles split is 5/14") {
    const UndirectedGraph g = testutil::bridged_triangles();
    const std::vector<std::int32_t> split = {0, 0, 0, 1, 1, 1};
    // Q = 2 * (3/7 - (7/14)^2) = 5/14
    CHECK(modularity(g, split) == doctest::Approx(5.0 / 14.0).epsilon(1e-12));
}

TEST_CASE("modularity validates its inputs") {
    const UndirectedGraph g = testutil::two_triangles();
    CHECK_THROWS_AS((void)modularity(g, std::vector<std::int32_t>(3, 0)), ValidationError);
    CHECK_THROWS_AS((void)modularity(UndirectedGraph(3), std::vector<std::int32_t>(3, 0)),
                    ValidationError);
}

TEST_CASE("modularity is exactly invariant under node relabeling") {
    const EmbeddingMatrix m = testutil::random_matrix(50, 4, 17);
    const UndirectedGraph g = induce_knn_graph(knn_all(m, 3));
    const Partition p = louvain(g, 5);

    // relabel nodes by a fixed permutation
    std::vector<NodeId> perm(g.num_nodes());
    std::iota(perm.begin(), perm.end(), 0u);
    rng::Engine eng(99);
    rng::shuffle(perm, eng);

    std::vector<std::pair<NodeId, NodeId>> edges;
    g.for_each_edge([&](NodeId u, NodeId v) { edges.emplace_back(perm[u], perm[v]); });
    const UndirectedGraph h = UndirectedGraph::from_edges(g.num_nodes(), std::move(edges));
    std::vector<std::int32_t> relabeled(g.num_nodes());
    for (NodeId v = 0; v < g.num_nodes(); ++v) relabeled[perm[v]] = p.labels[v];

    CHECK(modularity(h, relabeled) == modularity(g, p.labels)); // bit-exact
}

TEST_CASE("louvain finds the two disconnected triangles") {
    const UndirectedGraph g = testutil::two_triangles();
    const Partition p = louvain(g, 0);

    CHECK(p.num_communities() == 2);
    CHECK(p.labels[0] == p.labels[1]);
    CHECK(p.labels[1] == p.labels[2]);
    CHECK(p.labels[3] == p.labels[4]);
    CHECK(p.labels[4] == p.labels[5]);
    CHECK(p.labels[0] != p.labels[3]);
    // Q = 2 * (3/6 - (6/12)^2) = 0.5, the unique optimum
    CHECK(p.q == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("louvain leaves a complete graph in one community") {
    const UndirectedGraph g = testutil::complete_graph(6);
    const Partition p = louvain(g, 3);
    CHECK(p.num_communities() == 1);
    CHECK(p.q == 0.0);
}

TEST_CASE("louvain q matches modularity exactly and is deterministic") {
    const EmbeddingMatrix m = testutil::random_matrix(120, 6, 3);
    const UndirectedGraph g = induce_knn_graph(knn_all(m, 4));

    const Partition a = louvain(g, 11);
    const Partition b = louvain(g, 11);
    CHECK(a.labels == b.labels);
    CHECK(a.q == b.q);
    CHECK(a.q == modularity(g, a.labels)); // exact re-evaluation

    const Partition c = louvain(g, 12);
    CHECK(c.q == modularity(g, c.labels));
}

TEST_CASE("louvain level trace is non-decreasing") {
    const MixtureResult mix = synth_mixture(300, 6, 4, 1.0, 12.0, 21);
    const UndirectedGraph g = induce_knn_graph(knn_all(mix.matrix, 6));
    const LouvainResult r = louvain_detailed(g, 2);
    REQUIRE(!r.level_modularity.empty());
    for (std::size_t i = 0; i + 1 < r.level_modularity.size(); ++i) {
        CHECK(r.level_modularity[i + 1] >= r.level_modularity[i] - 1e-12);
    }
    CHECK(r.level_modularity.back() == r.partition.q);
}

TEST_CASE("louvain beats the trivial partition on structured graphs") {
    const UndirectedGraph g = testutil::bridged_triangles();
    const Partition p = louvain(g, 7);
    CHECK(p.q >= 0.0);
    CHECK(p.q >= modularity(g, std::vector<std::int32_t>(6, 0)));
}

TEST_CASE("louvain never merges across components") {
    const UndirectedGraph g = testutil::two_triangles();
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Partition p = louvain(g, seed);
        CHECK(p.labels[0] != p.labels[3]);
    }
}

TEST_CASE("compare_partitions on hand fixtures") {
    Partition a{{0, 0, 1, 1}};
    Partition b{{0, 1, 0, 1}};
    Partition single{{0, 0, 0, 0}};

    CHECK(compare_partitions(a, a) == 1.0);
    CHECK(compare_partitions(a, single) == 0.0); // zero-entropy side
    CHECK(compare_partitions(a, b) == 0.0);      // MI = 0 by construction
    CHECK(compare_partitions(single, single) == 1.0); // 0/0 convention

    Partition relabeled{{1, 1, 0, 0}};
    CHECK(compare_partitions(a, relabeled) == doctest::Approx(1.0).epsilon(1e-12));

    Partition wrong_size{{0, 0}};
    CHECK_THROWS_AS((void)compare_partitions(a, wrong_size), ValidationError);
}

TEST_CASE("planted 4-cluster mixture is recovered by 6-NN + louvain") {
    const MixtureResult mix = synth_mixture(400, 8, 4, 1.0, 10.0, 1234);
    const UndirectedGraph g = induce_knn_graph(knn_all(mix.matrix, 6));
    const Partition found = louvain(g, 0);
    CHECK(compare_partitions(found, mix.truth) >= 0.95);
}
