#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "embnet/partition.hpp"

namespace embnet {

using NodeId = std::uint32_t;

// Frequency-ranked token list; index 0 is the most frequent word.
class Vocabulary {
public:
    Vocabulary() = default;
    explicit Vocabulary(std::vector<std::string> tokens); // throws ValidationError on duplicates

    std::size_t size() const { return tokens_.size(); }
    const std::string& token(std::size_t index) const { return tokens_.at(index); }
    const std::vector<std::string>& tokens() const { return tokens_; }
    std::optional<std::size_t> lookup(const std::string& token) const;
    Vocabulary prefix(std::size_t n) const;

private:
    std::vector<std::string> tokens_;
    std::unordered_map<std::string, std::size_t> index_;
};

struct EmbeddingStats {
    double mean = 0.0;
    double stddev = 0.0; // population standard deviation
};

// Dense row-major n x dim matrix with its vocabulary. Immutable after
// construction; safe for concurrent reads.
class EmbeddingMatrix {
public:
    EmbeddingMatrix(std::size_t dim, std::vector<double> data, Vocabulary vocab,
                    std::string source_tag = {});

    std::size_t rows() const { return vocab_.size(); }
    std::size_t dim() const { return dim_; }
    std::span<const double> row(std::size_t i) const {
        return {data_.data() + i * dim_, dim_};
    }
    const std::vector<double>& values() const { return data_; }
    const Vocabulary& vocab() const { return vocab_; }
    const std::string& source_tag() const { return source_tag_; }

private:
    std::size_t dim_;
    std::vector<double> data_;
    Vocabulary vocab_;
    std::string source_tag_;
};

struct MixtureResult {
    EmbeddingMatrix matrix;
    Partition truth; // planted assignment, q left NaN
};

// Embedding Text Format:
//   line 1:      "<n> <dim>"
//   lines 2..n+1: "<token> <v1> ... <v_dim>"
// UTF-8, single spaces, LF endings, tokens in descending frequency order.
EmbeddingMatrix load_embeddings(const std::filesystem::path& path,
                                std::optional<std::size_t> limit = std::nullopt);
void save_embeddings(const EmbeddingMatrix& m, const std::filesystem::path& path);

// Mean and population standard deviation over all n*dim entries.
EmbeddingStats stats(const EmbeddingMatrix& m);

// i.i.d. entries from U(mean - stddev, mean + stddev), synthetic tokens w0..w{n-1}.
EmbeddingMatrix random_baseline(std::size_t n, std::size_t dim, const EmbeddingStats& s,
                                std::uint64_t seed);

// Isotropic Gaussian blobs (std = spread) around centers spaced `separation`
// apart, with the planted assignment returned alongside.
MixtureResult synth_mixture(std::size_t n, std::size_t dim, std::size_t clusters, double spread,
                            double separation, std::uint64_t seed);

// First n rows and tokens, order preserved.
EmbeddingMatrix top_n(const EmbeddingMatrix& m, std::size_t n);

} // namespace embnet
