#include "embnet/embedding.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string_view>
#include <unordered_set>

#include "embnet/error.hpp"
#include "embnet/random.hpp"

namespace embnet {

Vocabulary::Vocabulary(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
    index_.reserve(tokens_.size());
    for (std::size_t i = 0; i < tokens_.size(); ++i) {
        auto [it, inserted] = index_.emplace(tokens_[i], i);
        if (!inserted) {
            throw ValidationError("duplicate token in vocabulary: '" + tokens_[i] + "'");
        }
    }
}

std::optional<std::size_t> Vocabulary::lookup(const std::string& token) const {
    auto it = index_.find(token);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

Vocabulary Vocabulary::prefix(std::size_t n) const {
    if (n > tokens_.size()) {
        throw ValidationError("vocabulary prefix larger than vocabulary");
    }
    return Vocabulary(std::vector<std::string>(tokens_.begin(), tokens_.begin() + n));
}

EmbeddingMatrix::EmbeddingMatrix(std::size_t dim, std::vector<double> data, Vocabulary vocab,
                                 std::string source_tag)
    : dim_(dim), data_(std::move(data)), vocab_(std::move(vocab)),
      source_tag_(std::move(source_tag)) {
    if (dim_ < 1 || vocab_.size() < 1) {
        throw ValidationError("embedding matrix must have n >= 1 and dim >= 1");
    }
    if (data_.size() != vocab_.size() * dim_) {
        throw ValidationError("embedding data size does not match n * dim");
    }
    for (double v : data_) {
        if (!std::isfinite(v)) {
            throw ValidationError("embedding matrix contains a non-finite value");
        }
    }
}

namespace {

// Splits on single spaces; empty fields flag leading/trailing/double spaces.
std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(' ', start);
        if (pos == std::string_view::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return fields;
}

std::size_t parse_count(std::string_view field, const std::string& path, std::size_t lineno,
                        const char* what) {
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
        throw ParseError(path, lineno, std::string("invalid ") + what + ": '" +
                                           std::string(field) + "'");
    }
    return value;
}

double parse_value(std::string_view field, const std::string& path, std::size_t lineno) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
        throw ParseError(path, lineno, "non-numeric field: '" + std::string(field) + "'");
    }
    if (!std::isfinite(value)) {
        throw ParseError(path, lineno, "non-finite value: '" + std::string(field) + "'");
    }
    return value;
}

} // namespace

EmbeddingMatrix load_embeddings(const std::filesystem::path& path,
                                std::optional<std::size_t> limit) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open embedding file: " + path.string());
    }
    const std::string name = path.string();

    std::string line;
    if (!std::getline(in, line)) {
        throw ParseError(name, 1, "missing header line");
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();

    const auto header = split_fields(line);
    if (header.size() != 2) {
        throw ParseError(name, 1, "header must be '<n> <dim>'");
    }
    const std::size_t n = parse_count(header[0], name, 1, "row count");
    const std::size_t dim = parse_count(header[1], name, 1, "dimension");
    if (n < 1 || dim < 1) {
        throw ParseError(name, 1, "row count and dimension must be >= 1");
    }
    if (limit && *limit > n) {
        throw ValidationError("limit " + std::to_string(*limit) + " exceeds declared row count " +
                              std::to_string(n));
    }
    if (limit && *limit < 1) {
        throw ValidationError("limit must be >= 1");
    }
    const std::size_t want = limit.value_or(n);

    std::vector<std::string> tokens;
    std::vector<double> data;
    std::unordered_set<std::string> seen;
    tokens.reserve(want);
    data.reserve(want * dim);
    seen.reserve(want);

    for (std::size_t r = 0; r < n; ++r) {
        const std::size_t lineno = r + 2;
        if (!std::getline(in, line)) {
            throw ParseError(name, lineno, "unexpected end of file, expected " +
                                               std::to_string(n) + " rows");
        }
        if (r >= want) continue; // rows past the limit are not parsed
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto fields = split_fields(line);
        if (fields.size() != dim + 1) {
            throw ParseError(name, lineno,
                             "expected 1 token + " + std::to_string(dim) + " values, got " +
                                 std::to_string(fields.size()) + " fields");
        }
        if (fields[0].empty()) {
            throw ParseError(name, lineno, "empty token");
        }
        tokens.emplace_back(fields[0]);
        if (!seen.insert(tokens.back()).second) {
            throw ParseError(name, lineno, "duplicate token: '" + tokens.back() + "'");
        }
        for (std::size_t j = 1; j <= dim; ++j) {
            data.push_back(parse_value(fields[j], name, lineno));
        }
    }
    if (std::getline(in, line) && !line.empty()) {
        throw ParseError(name, n + 2, "trailing content after declared rows");
    }

    return EmbeddingMatrix(dim, std::move(data), Vocabulary(std::move(tokens)), name);
}

namespace {

// Shortest round-trip decimal form.
std::string format_double(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

} // namespace

void save_embeddings(const EmbeddingMatrix& m, const std::filesystem::path& path) {
    std::ostringstream out;
    out << m.rows() << ' ' << m.dim() << '\n';
    for (std::size_t i = 0; i < m.rows(); ++i) {
        out << m.vocab().token(i);
        const auto row = m.row(i);
        for (double v : row) {
            out << ' ' << format_double(v);
        }
        out << '\n';
    }
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file || !(file << out.str()) || !file.flush()) {
        throw IoError("cannot write embedding file: " + path.string());
    }
}

EmbeddingStats stats(const EmbeddingMatrix& m) {
    // Welford's online algorithm; the tests check it against a two-pass oracle.
    double mean = 0.0;
    double m2 = 0.0;
    std::size_t count = 0;
    for (double v : m.values()) {
        ++count;
        const double delta = v - mean;
        mean += delta / static_cast<double>(count);
        m2 += delta * (v - mean);
    }
    return {mean, std::sqrt(m2 / static_cast<double>(count))};
}

EmbeddingMatrix random_baseline(std::size_t n, std::size_t dim, const EmbeddingStats& s,
                                std::uint64_t seed) {
    if (n < 1 || dim < 1) {
        throw ValidationError("random_baseline requires n >= 1 and dim >= 1");
    }
    rng::Engine eng(seed);
    std::vector<double> data(n * dim);
    for (double& v : data) {
        v = rng::uniform_real(eng, s.mean - s.stddev, s.mean + s.stddev);
    }
    std::vector<std::string> tokens(n);
    for (std::size_t i = 0; i < n; ++i) {
        tokens[i] = "w" + std::to_string(i);
    }
    return EmbeddingMatrix(dim, std::move(data), Vocabulary(std::move(tokens)), "random-baseline");
}

MixtureResult synth_mixture(std::size_t n, std::size_t dim, std::size_t clusters, double spread,
                            double separation, std::uint64_t seed) {
    if (n < 1 || dim < 1) {
        throw ValidationError("synth_mixture requires n >= 1 and dim >= 1");
    }
    if (clusters < 1) {
        throw ValidationError("synth_mixture requires clusters >= 1");
    }
    if (!(spread > 0.0)) {
        throw ValidationError("synth_mixture requires spread > 0");
    }
    if (separation < 0.0) {
        throw ValidationError("synth_mixture requires separation >= 0");
    }

    // Centers on a line at spacing `separation`: mutual distances are
    // multiples of it, so the >= separation guarantee holds for any count.
    rng::Engine eng(seed);
    std::vector<double> data(n * dim);
    std::vector<std::int32_t> truth(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t c = i % clusters;
        truth[i] = static_cast<std::int32_t>(c);
        double* row = data.data() + i * dim;
        row[0] = static_cast<double>(c) * separation + rng::gaussian(eng, 0.0, spread);
        for (std::size_t j = 1; j < dim; ++j) {
            row[j] = rng::gaussian(eng, 0.0, spread);
        }
    }
    std::vector<std::string> tokens(n);
    for (std::size_t i = 0; i < n; ++i) {
        tokens[i] = "p" + std::to_string(i);
    }
    EmbeddingMatrix matrix(dim, std::move(data), Vocabulary(std::move(tokens)), "synth-mixture");
    return {std::move(matrix), Partition{std::move(truth)}};
}

EmbeddingMatrix top_n(const EmbeddingMatrix& m, std::size_t n) {
    if (n < 1) {
        throw ValidationError("top_n requires n >= 1");
    }
    if (n > m.rows()) {
        throw ValidationError("top_n: n = " + std::to_string(n) + " exceeds matrix rows " +
                              std::to_string(m.rows()));
    }
    std::vector<double> data(m.values().begin(), m.values().begin() + n * m.dim());
    return EmbeddingMatrix(m.dim(), std::move(data), m.vocab().prefix(n), m.source_tag());
}

} // namespace embnet
