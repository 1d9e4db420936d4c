#include <doctest.h>

#include <cmath>

#include "embnet/embedding.hpp"
#include "embnet/error.hpp"
#include "test_util.hpp"

using namespace embnet;
using testutil::TempDir;

TEST_CASE("load_embeddings parses a well-formed file") {
    TempDir dir("load_basic");
    testutil::write_text(dir.file("emb.txt"), "3 2\na 0.5 -1.25\nb 1 2\nc -0.125 3e-2\n");

    const EmbeddingMatrix m = load_embeddings(dir.file("emb.txt"));
    CHECK(m.rows() == 3);
    CHECK(m.dim() == 2);
    CHECK(m.vocab().tokens() == std::vector<std::string>{"a", "b", "c"});
    CHECK(m.row(0)[0] == 0.5);
    CHECK(m.row(0)[1] == -1.25);
    CHECK(m.row(2)[1] == 0.03);
    CHECK(m.vocab().lookup("b") == 1);
    CHECK(!m.vocab().lookup("missing"));
}

TEST_CASE("load_embeddings honors limit as a prefix") {
    TempDir dir("load_limit");
    testutil::write_text(dir.file("emb.txt"), "3 2\na 0.5 1.5\nb 1 2\nc 3 4\n");

    const EmbeddingMatrix m = load_embeddings(dir.file("emb.txt"), 2);
    CHECK(m.rows() == 2);
    CHECK(m.vocab().tokens() == std::vector<std::string>{"a", "b"});

    CHECK_THROWS_AS((void)load_embeddings(dir.file("emb.txt"), 4), ValidationError);
}

TEST_CASE("load_embeddings reports malformed input with line numbers") {
    TempDir dir("load_errors");

    SUBCASE("short row") {
        testutil::write_text(dir.file("emb.txt"), "3 2\na 1 2\nb 1\nc 1 2\n");
        try {
            (void)load_embeddings(dir.file("emb.txt"));
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line() == 3);
        }
    }
    SUBCASE("non-numeric field") {
        testutil::write_text(dir.file("emb.txt"), "2 2\na 1 2\nb 1 oops\n");
        try {
            (void)load_embeddings(dir.file("emb.txt"));
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line() == 3);
            CHECK(std::string(e.what()).find("non-numeric") != std::string::npos);
        }
    }
    SUBCASE("duplicate token") {
        testutil::write_text(dir.file("emb.txt"), "2 1\na 1\na 2\n");
        try {
            (void)load_embeddings(dir.file("emb.txt"));
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line() == 3);
        }
    }
    SUBCASE("malformed header") {
        testutil::write_text(dir.file("emb.txt"), "3\na 1\n");
        CHECK_THROWS_AS((void)load_embeddings(dir.file("emb.txt")), ParseError);
    }
    SUBCASE("truncated file") {
        testutil::write_text(dir.file("emb.txt"), "3 1\na 1\nb 2\n");
        CHECK_THROWS_AS((void)load_embeddings(dir.file("emb.txt")), ParseError);
    }
    SUBCASE("non-finite value") {
        testutil::write_text(dir.file("emb.txt"), "1 2\na 1 inf\n");
        CHECK_THROWS_AS((void)load_embeddings(dir.file("emb.txt")), ParseError);
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS((void)load_embeddings(dir.file("nope.txt")), IoError);
    }
}

TEST_CASE("save/load round-trips values exactly") {
    const EmbeddingMatrix m = testutil::random_matrix(57, 7, 123);
    TempDir dir("roundtrip");
    save_embeddings(m, dir.file("emb.txt"));
    const EmbeddingMatrix back = load_embeddings(dir.file("emb.txt"));

    REQUIRE(back.rows() == m.rows());
    REQUIRE(back.dim() == m.dim());
    CHECK(back.vocab().tokens() == m.vocab().tokens());
    CHECK(back.values() == m.values()); // bitwise
}

TEST_CASE("stats on constant and two-point matrices") {
    const EmbeddingMatrix constant(2, {5.0, 5.0, 5.0, 5.0}, Vocabulary({"a", "b"}));
    const EmbeddingStats s1 = stats(constant);
    CHECK(s1.mean == 5.0);
    CHECK(s1.stddev == 0.0);

    const EmbeddingMatrix two(1, {0.0, 2.0}, Vocabulary({"a", "b"}));
    const EmbeddingStats s2 = stats(two);
    CHECK(s2.mean == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(s2.stddev == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("stats matches a two-pass oracle on a random matrix") {
    const EmbeddingMatrix m = testutil::random_matrix(100, 8, 7);

    // independent two-pass computation
    double sum = 0.0;
    for (double v : m.values()) sum += v;
    const double mean = sum / static_cast<double>(m.values().size());
    double sq = 0.0;
    for (double v : m.values()) sq += (v - mean) * (v - mean);
    const double stddev = std::sqrt(sq / static_cast<double>(m.values().size()));

    const EmbeddingStats s = stats(m);
    CHECK(s.mean == doctest::Approx(mean).epsilon(1e-12));
    CHECK(s.stddev == doctest::Approx(stddev).epsilon(1e-12));
}

TEST_CASE("random_baseline degenerate interval and support bounds") {
    const EmbeddingMatrix zero = random_baseline(10, 4, {0.0, 0.0}, 1);
    for (double v : zero.values()) CHECK(v == 0.0);

    const EmbeddingStats s{0.5, 2.0};
    const EmbeddingMatrix m = random_baseline(200, 8, s, 99);
    for (double v : m.values()) {
        CHECK(v >= s.mean - s.stddev);
        CHECK(v < s.mean + s.stddev);
    }
    CHECK(m.vocab().token(0) == "w0");
    CHECK(m.vocab().token(199) == "w199");
}

TEST_CASE("random_baseline seed determinism") {
    const EmbeddingMatrix a = random_baseline(50, 6, {0.0, 1.0}, 42);
    const EmbeddingMatrix b = random_baseline(50, 6, {0.0, 1.0}, 42);
    const EmbeddingMatrix c = random_baseline(50, 6, {0.0, 1.0}, 43);
    CHECK(a.values() == b.values());
    CHECK(a.values() != c.values());
}

TEST_CASE("random_baseline moments match the uniform distribution") {
    // 10^6 entries from U(-1, 1): mean 0, std 1/sqrt(3).
    const EmbeddingMatrix m = random_baseline(125000, 8, {0.0, 1.0}, 2024);
    const EmbeddingStats s = stats(m);
    CHECK(std::abs(s.mean) < 0.005);
    CHECK(std::abs(s.stddev - 1.0 / std::sqrt(3.0)) < 0.01);
}

TEST_CASE("synth_mixture basic shapes") {
    SUBCASE("single cluster") {
        const MixtureResult mix = synth_mixture(20, 3, 1, 0.5, 0.0, 5);
        for (std::int32_t c : mix.truth.labels) CHECK(c == 0);
    }
    SUBCASE("degenerate spread collapses points") {
        const MixtureResult mix = synth_mixture(10, 2, 3, 1e-12, 0.0, 5);
        for (double v : mix.matrix.values()) CHECK(std::abs(v) < 1e-9);
    }
    SUBCASE("deterministic given seed") {
        const MixtureResult a = synth_mixture(30, 4, 3, 1.0, 10.0, 7);
        const MixtureResult b = synth_mixture(30, 4, 3, 1.0, 10.0, 7);
        CHECK(a.matrix.values() == b.matrix.values());
        CHECK(a.truth.labels == b.truth.labels);
    }
    SUBCASE("centers respect the separation") {
        // With spread tiny, realized points sit at the centers.
        const MixtureResult mix = synth_mixture(8, 2, 4, 1e-9, 5.0, 11);
        for (std::size_t i = 0; i < 8; ++i) {
            for (std::size_t j = i + 1; j < 8; ++j) {
                if (mix.truth.labels[i] == mix.truth.labels[j]) continue;
                double d2 = 0.0;
                for (std::size_t t = 0; t < 2; ++t) {
                    const double diff = mix.matrix.row(i)[t] - mix.matrix.row(j)[t];
                    d2 += diff * diff;
                }
                CHECK(std::sqrt(d2) >= 5.0 - 1e-6);
            }
        }
    }
}

TEST_CASE("top_n prefix semantics") {
    const EmbeddingMatrix m = testutil::random_matrix(10, 3, 3);

    const EmbeddingMatrix same = top_n(m, 10);
    CHECK(same.values() == m.values());
    CHECK(same.vocab().tokens() == m.vocab().tokens());

    const EmbeddingMatrix head = top_n(m, 4);
    CHECK(head.rows() == 4);
    CHECK(head.vocab().token(3) == m.vocab().token(3));
    CHECK(std::vector<double>(m.values().begin(), m.values().begin() + 12) == head.values());

    CHECK_THROWS_AS((void)top_n(m, 0), ValidationError);
    CHECK_THROWS_AS((void)top_n(m, 11), ValidationError);
}
