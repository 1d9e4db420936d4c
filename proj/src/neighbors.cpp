#include "embnet/neighbors.hpp"

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "embnet/error.hpp"

namespace embnet {

namespace {

// Candidate under the selection order: (squared distance, index) ascending.
struct Candidate {
    double d2;
    NodeId index;
    friend bool operator<(const Candidate& a, const Candidate& b) {
        if (a.d2 != b.d2) return a.d2 < b.d2;
        return a.index < b.index;
    }
};

// Fixed-size max-heap keeping the k smallest candidates seen. The kept set is
// determined by the total order alone, so insertion order does not matter.
class BoundedSelector {
public:
    explicit BoundedSelector(std::size_t k) : k_(k) { heap_.reserve(k + 1); }

    void reset() { heap_.clear(); }

    void offer(const Candidate& c) {
        if (heap_.size() < k_) {
            heap_.push_back(c);
            std::push_heap(heap_.begin(), heap_.end());
        } else if (c < heap_.front()) {
            std::pop_heap(heap_.begin(), heap_.end());
            heap_.back() = c;
            std::push_heap(heap_.begin(), heap_.end());
        }
    }

    // Ascending (d2, index); empties the selector.
    std::vector<Neighbor> take_sorted() {
        std::sort(heap_.begin(), heap_.end());
        std::vector<Neighbor> out;
        out.reserve(heap_.size());
        for (const Candidate& c : heap_) {
            out.push_back({c.index, std::sqrt(c.d2)});
        }
        heap_.clear();
        return out;
    }

private:
    std::size_t k_;
    std::vector<Candidate> heap_;
};

int resolve_threads(int threads) {
    if (threads > 0) return threads;
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

constexpr std::size_t kQueryBlock = 32;

} // namespace

double squared_distance(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    const double* a = x.data();
    const double* b = y.data();
    // Four independent accumulators; fixed evaluation order keeps the result
    // bit-identical across call sites and thread counts.
    double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const double d0 = a[i] - b[i];
        const double d1 = a[i + 1] - b[i + 1];
        const double d2 = a[i + 2] - b[i + 2];
        const double d3 = a[i + 3] - b[i + 3];
        s0 += d0 * d0;
        s1 += d1 * d1;
        s2 += d2 * d2;
        s3 += d3 * d3;
    }
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        s0 += d * d;
    }
    return (s0 + s1) + (s2 + s3);
}

double euclidean_distance(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw ValidationError("euclidean_distance: dimension mismatch (" +
                              std::to_string(x.size()) + " vs " + std::to_string(y.size()) + ")");
    }
    return std::sqrt(squared_distance(x, y));
}

NeighborTable NeighborTable::knn_prefix(std::size_t k_smaller) const {
    if (mode != Mode::knn) {
        throw ValidationError("knn_prefix requires a k-mode table");
    }
    if (k_smaller > k) {
        throw ValidationError("knn_prefix: requested k exceeds table k");
    }
    NeighborTable out;
    out.mode = Mode::knn;
    out.k = k_smaller;
    out.pool_size = pool_size;
    out.queries = queries;
    out.lists.reserve(lists.size());
    for (const auto& list : lists) {
        const std::size_t len = std::min(k_smaller, list.size());
        out.lists.emplace_back(list.begin(), list.begin() + len);
    }
    return out;
}

NeighborTable NeighborTable::radius_restrict(double d) const {
    if (mode != Mode::radius) {
        throw ValidationError("radius_restrict requires a radius-mode table");
    }
    if (d > radius) {
        throw ValidationError("radius_restrict: requested d exceeds table radius");
    }
    NeighborTable out;
    out.mode = Mode::radius;
    out.radius = d;
    out.pool_size = pool_size;
    out.queries = queries;
    out.lists.reserve(lists.size());
    for (const auto& list : lists) {
        auto end = std::partition_point(list.begin(), list.end(),
                                        [d](const Neighbor& n) { return n.distance < d; });
        out.lists.emplace_back(list.begin(), end);
    }
    return out;
}

namespace {

void validate_k(const EmbeddingMatrix& m, std::size_t k) {
    if (k < 1 || k > m.rows() - 1) {
        throw ValidationError("k must satisfy 1 <= k <= n-1, got k = " + std::to_string(k) +
                              " for n = " + std::to_string(m.rows()));
    }
}

// Shared search driver: for each query block, stream every candidate row and
// feed one selector per query.
std::vector<std::vector<Neighbor>> knn_search(const EmbeddingMatrix& m,
                                              const std::vector<NodeId>& queries, std::size_t k,
                                              int threads) {
    const std::size_t n = m.rows();
    const std::size_t nq = queries.size();
    std::vector<std::vector<Neighbor>> lists(nq);

    const std::size_t num_blocks = (nq + kQueryBlock - 1) / kQueryBlock;
    const int nthreads = resolve_threads(threads);

#pragma omp parallel num_threads(nthreads)
    {
        std::vector<BoundedSelector> selectors(kQueryBlock, BoundedSelector(k));
#pragma omp for schedule(dynamic, 1)
        for (std::ptrdiff_t blk = 0; blk < static_cast<std::ptrdiff_t>(num_blocks); ++blk) {
            const std::size_t begin = static_cast<std::size_t>(blk) * kQueryBlock;
            const std::size_t end = std::min(begin + kQueryBlock, nq);
            for (std::size_t q = begin; q < end; ++q) selectors[q - begin].reset();

            for (std::size_t j = 0; j < n; ++j) {
                const auto cand = m.row(j);
                for (std::size_t q = begin; q < end; ++q) {
                    const NodeId query = queries[q];
                    if (query == j) continue;
                    const double d2 = squared_distance(m.row(query), cand);
                    selectors[q - begin].offer({d2, static_cast<NodeId>(j)});
                }
            }
            for (std::size_t q = begin; q < end; ++q) {
                lists[q] = selectors[q - begin].take_sorted();
            }
        }
    }
    return lists;
}

} // namespace

NeighborTable knn_all(const EmbeddingMatrix& m, std::size_t k, int threads) {
    validate_k(m, k);
    NeighborTable t;
    t.mode = NeighborTable::Mode::knn;
    t.k = k;
    t.pool_size = m.rows();
    t.queries.resize(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) t.queries[i] = static_cast<NodeId>(i);
    t.lists = knn_search(m, t.queries, k, threads);
    return t;
}

NeighborTable knn_for_queries(const EmbeddingMatrix& m, std::vector<NodeId> queries,
                              std::size_t k, int threads) {
    validate_k(m, k);
    std::sort(queries.begin(), queries.end());
    queries.erase(std::unique(queries.begin(), queries.end()), queries.end());
    if (queries.empty()) {
        throw ValidationError("knn_for_queries: empty query set");
    }
    if (queries.back() >= m.rows()) {
        throw ValidationError("knn_for_queries: query index " + std::to_string(queries.back()) +
                              " out of range for n = " + std::to_string(m.rows()));
    }
    NeighborTable t;
    t.mode = NeighborTable::Mode::knn;
    t.k = k;
    t.pool_size = m.rows();
    t.lists = knn_search(m, queries, k, threads);
    t.queries = std::move(queries);
    return t;
}

NeighborTable radius_all(const EmbeddingMatrix& m, double d, int threads) {
    if (!(d > 0.0)) {
        throw ValidationError("radius_all requires d > 0");
    }
    const std::size_t n = m.rows();
    NeighborTable t;
    t.mode = NeighborTable::Mode::radius;
    t.radius = d;
    t.pool_size = n;
    t.queries.resize(n);
    for (std::size_t i = 0; i < n; ++i) t.queries[i] = static_cast<NodeId>(i);
    t.lists.resize(n);

    const int nthreads = resolve_threads(threads);
#pragma omp parallel for schedule(dynamic, 16) num_threads(nthreads)
    for (std::ptrdiff_t q = 0; q < static_cast<std::ptrdiff_t>(n); ++q) {
        std::vector<Candidate> hits;
        const auto row = m.row(static_cast<std::size_t>(q));
        for (std::size_t j = 0; j < n; ++j) {
            if (static_cast<std::size_t>(q) == j) continue;
            const double d2 = squared_distance(row, m.row(j));
            // Strict dist(u,v) < d on the rooted value, matching the reported
            // distances so that radius_restrict stays consistent.
            if (std::sqrt(d2) < d) {
                hits.push_back({d2, static_cast<NodeId>(j)});
            }
        }
        std::sort(hits.begin(), hits.end());
        auto& list = t.lists[static_cast<std::size_t>(q)];
        list.reserve(hits.size());
        for (const Candidate& c : hits) {
            list.push_back({c.index, std::sqrt(c.d2)});
        }
    }
    return t;
}

NeighborTable knn_oracle(const EmbeddingMatrix& m, std::size_t k) {
    validate_k(m, k);
    const std::size_t n = m.rows();
    NeighborTable t;
    t.mode = NeighborTable::Mode::knn;
    t.k = k;
    t.pool_size = n;
    t.queries.resize(n);
    for (std::size_t i = 0; i < n; ++i) t.queries[i] = static_cast<NodeId>(i);
    t.lists.resize(n);

    std::vector<Candidate> all;
    all.reserve(n - 1);
    for (std::size_t q = 0; q < n; ++q) {
        all.clear();
        for (std::size_t j = 0; j < n; ++j) {
            if (q == j) continue;
            all.push_back({squared_distance(m.row(q), m.row(j)), static_cast<NodeId>(j)});
        }
        std::sort(all.begin(), all.end());
        auto& list = t.lists[q];
        list.reserve(k);
        for (std::size_t i = 0; i < k; ++i) {
            list.push_back({all[i].index, std::sqrt(all[i].d2)});
        }
    }
    return t;
}

} // namespace embnet
