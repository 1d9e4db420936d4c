#include <doctest.h>

#include <cmath>

#include "embnet/error.hpp"
#include "embnet/neighbors.hpp"
#include "embnet/random.hpp"
#include "test_util.hpp"

using namespace embnet;

namespace {

// Naive term-by-term oracle with long double accumulation.
double naive_distance(std::span<const double> x, std::span<const double> y) {
    long double acc = 0.0L;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const long double d = static_cast<long double>(x[i]) - static_cast<long double>(y[i]);
        acc += d * d;
    }
    return static_cast<double>(std::sqrt(acc));
}

bool tables_equal(const NeighborTable& a, const NeighborTable& b) {
    if (a.queries != b.queries) return false;
    if (a.lists.size() != b.lists.size()) return false;
    for (std::size_t i = 0; i < a.lists.size(); ++i) {
        if (a.lists[i].size() != b.lists[i].size()) return false;
        for (std::size_t j = 0; j < a.lists[i].size(); ++j) {
            if (a.lists[i][j].index != b.lists[i][j].index) return false;
            // bitwise distance comparison
            if (a.lists[i][j].distance != b.lists[i][j].distance) return false;
        }
    }
    return true;
}

} // namespace

TEST_CASE("euclidean_distance basics") {
    const std::vector<double> origin = {0.0, 0.0};
    const std::vector<double> p34 = {3.0, 4.0};
    CHECK(euclidean_distance(origin, p34) == 5.0);
    CHECK(euclidean_distance(p34, p34) == 0.0);

    const std::vector<double> shorter = {1.0};
    CHECK_THROWS_AS((void)euclidean_distance(origin, shorter), ValidationError);
}

TEST_CASE("euclidean_distance matches the naive oracle on random 64-dim pairs") {
    rng::Engine eng(31);
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<double> x(64), y(64);
        for (double& v : x) v = rng::uniform_real(eng, -10.0, 10.0);
        for (double& v : y) v = rng::uniform_real(eng, -10.0, 10.0);
        const double got = euclidean_distance(x, y);
        const double want = naive_distance(x, y);
        CHECK(got == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("metric symmetry and triangle inequality on random triples") {
    rng::Engine eng(77);
    for (int rep = 0; rep < 100; ++rep) {
        std::vector<double> x(16), y(16), z(16);
        for (double& v : x) v = rng::uniform_real(eng, -5.0, 5.0);
        for (double& v : y) v = rng::uniform_real(eng, -5.0, 5.0);
        for (double& v : z) v = rng::uniform_real(eng, -5.0, 5.0);
        CHECK(euclidean_distance(x, y) == euclidean_distance(y, x));
        CHECK(euclidean_distance(x, z) <= euclidean_distance(x, y) + euclidean_distance(y, z) + 1e-9);
    }
}

TEST_CASE("knn_all on the 1-D line fixture") {
    const EmbeddingMatrix m = testutil::line_points(); // coords 0,1,3,7

    const NeighborTable t = knn_all(m, 1);
    REQUIRE(t.lists.size() == 4);
    CHECK(t.lists[0][0].index == 1); // 0 -> 1
    CHECK(t.lists[0][0].distance == 1.0);
    CHECK(t.lists[1][0].index == 0); // 1 -> 0
    CHECK(t.lists[2][0].index == 1); // 3 -> 1
    CHECK(t.lists[2][0].distance == 2.0);
    CHECK(t.lists[3][0].index == 2); // 7 -> 3
    CHECK(t.lists[3][0].distance == 4.0);

    CHECK_THROWS_AS((void)knn_all(m, 0), ValidationError);
    CHECK_THROWS_AS((void)knn_all(m, 4), ValidationError);
}

TEST_CASE("knn_all with k = n-1 is the exhaustive sort") {
    const EmbeddingMatrix m = testutil::random_matrix(20, 4, 9);
    const NeighborTable t = knn_all(m, 19);
    for (std::size_t q = 0; q < 20; ++q) {
        REQUIRE(t.lists[q].size() == 19);
        for (std::size_t i = 0; i + 1 < 19; ++i) {
            CHECK(t.lists[q][i].distance <= t.lists[q][i + 1].distance);
        }
        for (const Neighbor& nb : t.lists[q]) CHECK(nb.index != q);
    }
}

TEST_CASE("knn_all equals knn_oracle on random points") {
    const EmbeddingMatrix m = testutil::random_matrix(200, 16, 404);
    for (std::size_t k : {1, 2, 5, 20}) {
        const NeighborTable fast = knn_all(m, k);
        const NeighborTable slow = knn_oracle(m, k);
        CHECK(tables_equal(fast, slow));
    }
}

TEST_CASE("duplicate points tie-break by ascending index") {
    std::vector<double> data = {0.0, 0.0, 0.0, 0.0, 1.0, 1.0};
    const EmbeddingMatrix m(2, std::move(data), Vocabulary({"a", "b", "c"}));
    const NeighborTable t = knn_all(m, 2);
    CHECK(t.lists[0][0].index == 1);
    CHECK(t.lists[0][0].distance == 0.0);
    CHECK(t.lists[1][0].index == 0);
    CHECK(t.lists[1][0].distance == 0.0);
    const NeighborTable o = knn_oracle(m, 2);
    CHECK(tables_equal(t, o));
}

TEST_CASE("radius_all on the 1-D line fixture") {
    const EmbeddingMatrix m = testutil::line_points();

    const NeighborTable t = radius_all(m, 2.5);
    REQUIRE(t.lists.size() == 4);
    REQUIRE(t.lists[0].size() == 1); // 0: [1]
    CHECK(t.lists[0][0].index == 1);
    REQUIRE(t.lists[1].size() == 2); // 1: [0 (d=1), 3 (d=2)]
    CHECK(t.lists[1][0].index == 0);
    CHECK(t.lists[1][1].index == 2);
    CHECK(t.lists[1][1].distance == 2.0);
    REQUIRE(t.lists[2].size() == 1); // 3: [1]
    CHECK(t.lists[2][0].index == 1);
    CHECK(t.lists[3].empty()); // 7: nothing within 2.5

    const NeighborTable none = radius_all(m, 0.5);
    for (const auto& list : none.lists) CHECK(list.empty());

    const NeighborTable all = radius_all(m, 100.0);
    for (const auto& list : all.lists) CHECK(list.size() == 3);

    CHECK_THROWS_AS((void)radius_all(m, 0.0), ValidationError);
}

TEST_CASE("radius boundary is strict") {
    const EmbeddingMatrix m = testutil::line_points();
    // pair (1,3) sits at exactly distance 2
    const NeighborTable t = radius_all(m, 2.0);
    REQUIRE(t.lists[1].size() == 1);
    CHECK(t.lists[1][0].index == 0);
}

TEST_CASE("knn_for_queries restricts queries but not candidates") {
    const EmbeddingMatrix m = testutil::line_points();

    const NeighborTable t = knn_for_queries(m, {3}, 2);
    REQUIRE(t.queries == std::vector<NodeId>{3});
    REQUIRE(t.lists.size() == 1);
    CHECK(t.lists[0][0].index == 2); // 7 -> 3 at distance 4
    CHECK(t.lists[0][0].distance == 4.0);
    CHECK(t.lists[0][1].index == 1); // then 1 at distance 6
    CHECK(t.lists[0][1].distance == 6.0);

    const NeighborTable full = knn_for_queries(m, {0, 1, 2, 3}, 2);
    const NeighborTable all = knn_all(m, 2);
    CHECK(tables_equal(full, all));

    CHECK_THROWS_AS((void)knn_for_queries(m, {4}, 1), ValidationError);
}

TEST_CASE("knn lists at k are prefixes of lists at larger k") {
    const EmbeddingMatrix m = testutil::random_matrix(60, 8, 15);
    const NeighborTable big = knn_all(m, 20);
    for (std::size_t k : {1, 3, 10}) {
        const NeighborTable small = knn_all(m, k);
        const NeighborTable prefix = big.knn_prefix(k);
        CHECK(tables_equal(small, prefix));
    }
}

TEST_CASE("radius tables nest and restrict consistently") {
    const EmbeddingMatrix m = testutil::random_matrix(50, 6, 21);
    const NeighborTable big = radius_all(m, 1.2);
    for (double d : {0.3, 0.7, 1.0}) {
        const NeighborTable direct = radius_all(m, d);
        const NeighborTable restricted = big.radius_restrict(d);
        CHECK(tables_equal(direct, restricted));
        // monotonicity: everything at d is present at 1.2
        for (std::size_t q = 0; q < direct.lists.size(); ++q) {
            for (const Neighbor& nb : direct.lists[q]) {
                bool found = false;
                for (const Neighbor& other : big.lists[q]) {
                    if (other.index == nb.index) {
                        found = true;
                        break;
                    }
                }
                CHECK(found);
            }
        }
    }
}

TEST_CASE("knn_all is bit-identical across thread counts") {
    const EmbeddingMatrix m = testutil::random_matrix(150, 12, 88);
    const NeighborTable one = knn_all(m, 7, 1);
    const NeighborTable two = knn_all(m, 7, 2);
    const NeighborTable four = knn_all(m, 7, 4);
    CHECK(tables_equal(one, two));
    CHECK(tables_equal(one, four));
}
