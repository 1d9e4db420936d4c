// embnet CLI: induce language networks from word-embedding files, sweep
// induction parameters, and compute network statistics and communities.

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "embnet/community.hpp"
#include "embnet/embedding.hpp"
#include "embnet/error.hpp"
#include "embnet/graph.hpp"
#include "embnet/io.hpp"
#include "embnet/neighbors.hpp"
#include "embnet/netmetrics.hpp"

namespace {

namespace fs = std::filesystem;
using namespace embnet;

struct RunConfig {
    std::string input;      // embedding file
    std::string graph_file; // edge-list file, alternative graph source
    std::size_t top = 0;    // 0 = all rows
    std::string method;     // knn | proximity
    std::size_t k = 0;
    double d = 0.0;
    std::size_t queries = 0; // > 0 = ego induction from the top `queries` words
    bool gcc = false;
    std::uint64_t seed = 0;
    std::uint64_t louvain_seed = 0;
    std::size_t path_sources = 1000;
    std::size_t x_min = 0;
    std::string out_dir;
    std::string format;
    bool with_communities = false;
    bool with_pagerank = false;
    bool dump_neighbors = false;
    std::string ks_spec;
    std::string ds_spec;
    std::size_t n = 0;
    std::size_t dim = 0;
    std::size_t clusters = 4;
    double spread = 1.0;
    double separation = 0.0;
};

template <typename T>
T parse_number(const std::string& text) {
    T value{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ValidationError("invalid number: '" + text + "'");
    }
    return value;
}

// "2,6,30" or "2:30" or "2:30:4"
template <typename T>
std::vector<T> parse_list(const std::string& spec) {
    std::vector<T> values;
    if (spec.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::size_t start = 0;
        for (std::size_t pos; (pos = spec.find(':', start)) != std::string::npos; start = pos + 1) {
            parts.push_back(spec.substr(start, pos - start));
        }
        parts.push_back(spec.substr(start));
        if (parts.size() != 2 && parts.size() != 3) {
            throw ValidationError("range must be start:stop or start:stop:step, got '" + spec +
                                  "'");
        }
        const T lo = parse_number<T>(parts[0]);
        const T hi = parse_number<T>(parts[1]);
        const T step = parts.size() == 3 ? parse_number<T>(parts[2]) : T{1};
        if (!(step > T{0}) || hi < lo) {
            throw ValidationError("invalid range '" + spec + "'");
        }
        for (std::size_t i = 0;; ++i) {
            const double v = static_cast<double>(lo) + static_cast<double>(i) * static_cast<double>(step);
            if (v > static_cast<double>(hi) * (1.0 + 1e-12) + 1e-12) break;
            values.push_back(static_cast<T>(v));
        }
    } else {
        std::size_t start = 0;
        while (start <= spec.size()) {
            const std::size_t pos = std::min(spec.find(',', start), spec.size());
            values.push_back(parse_number<T>(spec.substr(start, pos - start)));
            start = pos + 1;
        }
    }
    return values;
}

EmbeddingMatrix load_input(const RunConfig& cfg) {
    if (cfg.input.empty()) {
        throw ValidationError("--input is required");
    }
    std::optional<std::size_t> limit;
    if (cfg.top > 0) limit = cfg.top;
    return load_embeddings(cfg.input, limit);
}

void require_method(const RunConfig& cfg) {
    if (cfg.method == "knn") {
        if (cfg.k == 0) throw ValidationError("--method knn requires -k");
        if (cfg.d != 0.0) throw ValidationError("-d is only valid with --method proximity");
    } else if (cfg.method == "proximity") {
        if (cfg.d == 0.0) throw ValidationError("--method proximity requires -d");
        if (cfg.k != 0) throw ValidationError("-k is only valid with --method knn");
    } else {
        throw ValidationError("--method must be 'knn' or 'proximity'");
    }
}

struct InducedGraph {
    UndirectedGraph graph;
    std::size_t induction_k = 0; // 0 when not a k-NN graph
};

InducedGraph induce_from_embeddings(const RunConfig& cfg) {
    require_method(cfg);
    const EmbeddingMatrix m = load_input(cfg);
    InducedGraph out;
    if (cfg.method == "knn") {
        out.induction_k = cfg.k;
        if (cfg.queries > 0) {
            if (cfg.queries > m.rows()) {
                throw ValidationError("--queries exceeds matrix rows");
            }
            std::vector<NodeId> qs(cfg.queries);
            for (std::size_t i = 0; i < cfg.queries; ++i) qs[i] = static_cast<NodeId>(i);
            const NeighborTable nt = knn_for_queries(m, std::move(qs), cfg.k);
            if (cfg.dump_neighbors && !cfg.out_dir.empty()) {
                io::write_neighbors(nt, m.vocab(), fs::path(cfg.out_dir) / "neighbors.tsv");
            }
            out.graph = induce_ego_graph(nt, m.vocab());
        } else {
            const NeighborTable nt = knn_all(m, cfg.k);
            if (cfg.dump_neighbors && !cfg.out_dir.empty()) {
                io::write_neighbors(nt, m.vocab(), fs::path(cfg.out_dir) / "neighbors.tsv");
            }
            out.graph = induce_knn_graph(nt, m.vocab());
        }
    } else {
        if (cfg.queries > 0) {
            throw ValidationError("--queries requires --method knn");
        }
        const NeighborTable nt = radius_all(m, cfg.d);
        if (cfg.dump_neighbors && !cfg.out_dir.empty()) {
            io::write_neighbors(nt, m.vocab(), fs::path(cfg.out_dir) / "neighbors.tsv");
        }
        out.graph = induce_proximity_graph(nt, m.vocab());
    }
    if (cfg.gcc) {
        out.graph = giant_component(out.graph);
    }
    return out;
}

InducedGraph obtain_graph(const RunConfig& cfg) {
    if (!cfg.graph_file.empty()) {
        if (!cfg.input.empty()) {
            throw ValidationError("--input and --graph are mutually exclusive");
        }
        InducedGraph out;
        out.graph = io::read_edge_list(cfg.graph_file);
        if (cfg.gcc) out.graph = giant_component(out.graph);
        return out;
    }
    return induce_from_embeddings(cfg);
}

fs::path ensure_out_dir(const RunConfig& cfg) {
    if (cfg.out_dir.empty()) {
        throw ValidationError("--out is required");
    }
    std::error_code ec;
    fs::create_directories(cfg.out_dir, ec);
    if (ec) {
        throw IoError("cannot create output directory: " + cfg.out_dir);
    }
    return fs::path(cfg.out_dir);
}

void check_format(const RunConfig& cfg, std::initializer_list<const char*> allowed) {
    if (cfg.format.empty()) return;
    for (const char* a : allowed) {
        if (cfg.format == a) return;
    }
    throw ValidationError("unsupported --format '" + cfg.format + "' for this subcommand");
}

void print_graph_stats(const UndirectedGraph& g) {
    const ComponentLabeling comps = components(g);
    std::cout << "nodes=" << g.num_nodes() << " edges=" << g.num_edges()
              << " components=" << comps.count() << "\n";
}

io::GraphmlOptions graphml_options(const RunConfig& cfg, const UndirectedGraph& g,
                                   std::optional<Partition>& partition,
                                   std::optional<std::vector<double>>& scores) {
    io::GraphmlOptions opt;
    if (cfg.with_communities) {
        partition = louvain(g, cfg.louvain_seed);
        opt.communities = &*partition;
    }
    if (cfg.with_pagerank) {
        scores = pagerank(g);
        opt.pagerank = &*scores;
    }
    return opt;
}

int cmd_induce(const RunConfig& cfg) {
    check_format(cfg, {"edgelist", "graphml"});
    if ((cfg.with_communities || cfg.with_pagerank) && cfg.format != "graphml") {
        throw ValidationError("--communities/--pagerank require --format graphml");
    }
    const fs::path out = ensure_out_dir(cfg);
    const InducedGraph induced = induce_from_embeddings(cfg);
    io::write_edge_list(induced.graph, out / "edges.tsv");
    if (cfg.format == "graphml") {
        std::optional<Partition> partition;
        std::optional<std::vector<double>> scores;
        const io::GraphmlOptions opt = graphml_options(cfg, induced.graph, partition, scores);
        io::write_graphml(induced.graph, out / "graph.graphml", opt);
    }
    print_graph_stats(induced.graph);
    return 0;
}

int cmd_export(const RunConfig& cfg) {
    check_format(cfg, {"edgelist", "graphml"});
    const fs::path out = ensure_out_dir(cfg);
    const InducedGraph induced = obtain_graph(cfg);
    const std::string format = cfg.format.empty() ? "graphml" : cfg.format;
    if (format == "edgelist") {
        if (cfg.with_communities || cfg.with_pagerank) {
            throw ValidationError("--communities/--pagerank require --format graphml");
        }
        io::write_edge_list(induced.graph, out / "edges.tsv");
    } else {
        std::optional<Partition> partition;
        std::optional<std::vector<double>> scores;
        const io::GraphmlOptions opt = graphml_options(cfg, induced.graph, partition, scores);
        io::write_graphml(induced.graph, out / "graph.graphml", opt);
    }
    print_graph_stats(induced.graph);
    return 0;
}

int cmd_metrics(const RunConfig& cfg) {
    check_format(cfg, {"json"});
    const InducedGraph induced = obtain_graph(cfg);
    MetricsOptions opt;
    opt.path_sources = cfg.path_sources;
    opt.seed = cfg.seed;
    opt.x_min = cfg.x_min;
    opt.induction_k = induced.induction_k;
    const MetricsReport report = compute_metrics(induced.graph, opt);
    const std::string json = io::metrics_json(report);
    if (!cfg.out_dir.empty()) {
        const fs::path out = ensure_out_dir(cfg);
        io::write_file_atomic(out / "metrics.json", json);
    }
    std::cout << json;
    return 0;
}

int cmd_communities(const RunConfig& cfg) {
    const fs::path out = ensure_out_dir(cfg);
    const InducedGraph induced = obtain_graph(cfg);
    const Partition partition = louvain(induced.graph, cfg.louvain_seed);
    io::write_partition(induced.graph, partition, out / "communities.tsv");
    char q[32];
    std::snprintf(q, sizeof(q), "%.6f", partition.q);
    std::cout << "communities=" << partition.num_communities() << " modularity=" << q << "\n";
    return 0;
}

int cmd_sweep(const RunConfig& cfg) {
    check_format(cfg, {"tsv"});
    if (cfg.method != "knn" && cfg.method != "proximity") {
        throw ValidationError("--method must be 'knn' or 'proximity'");
    }
    if (cfg.method == "knn" && (cfg.ks_spec.empty() || !cfg.ds_spec.empty())) {
        throw ValidationError("--method knn sweep takes --ks (not --ds)");
    }
    if (cfg.method == "proximity" && (cfg.ds_spec.empty() || !cfg.ks_spec.empty())) {
        throw ValidationError("--method proximity sweep takes --ds (not --ks)");
    }
    const EmbeddingMatrix m = load_input(cfg);
    SweepCurve curve;
    if (cfg.method == "knn") {
        curve = sweep_knn(m, parse_list<std::size_t>(cfg.ks_spec), cfg.louvain_seed);
    } else {
        curve = sweep_proximity(m, parse_list<double>(cfg.ds_spec), cfg.louvain_seed);
    }
    const std::string tsv = io::sweep_tsv(curve);
    if (!cfg.out_dir.empty()) {
        const fs::path out = ensure_out_dir(cfg);
        io::write_file_atomic(out / "sweep.tsv", tsv);
    }
    std::cout << tsv;
    return 0;
}

int cmd_synth(const RunConfig& cfg) {
    if (cfg.n == 0 || cfg.dim == 0) {
        throw ValidationError("synth requires --n and --dim");
    }
    const fs::path out = ensure_out_dir(cfg);
    const MixtureResult mix =
        synth_mixture(cfg.n, cfg.dim, cfg.clusters, cfg.spread, cfg.separation, cfg.seed);
    save_embeddings(mix.matrix, out / "embeddings.txt");
    std::ostringstream truth;
    for (std::size_t i = 0; i < cfg.n; ++i) {
        truth << mix.matrix.vocab().token(i) << '\t' << mix.truth.labels[i] << '\n';
    }
    io::write_file_atomic(out / "truth.tsv", truth.str());
    std::cout << "wrote " << cfg.n << " x " << cfg.dim << " mixture with " << cfg.clusters
              << " clusters\n";
    return 0;
}

int cmd_baseline(const RunConfig& cfg) {
    const fs::path out = ensure_out_dir(cfg);
    const EmbeddingMatrix source = load_input(cfg);
    const EmbeddingStats s = stats(source);
    const std::size_t n = cfg.n > 0 ? cfg.n : source.rows();
    const std::size_t dim = cfg.dim > 0 ? cfg.dim : source.dim();
    const EmbeddingMatrix baseline = random_baseline(n, dim, s, cfg.seed);
    save_embeddings(baseline, out / "baseline.txt");
    char mean[32], stddev[32];
    std::snprintf(mean, sizeof(mean), "%.6f", s.mean);
    std::snprintf(stddev, sizeof(stddev), "%.6f", s.stddev);
    std::cout << "source mean=" << mean << " std=" << stddev << " -> " << n << " x " << dim
              << " uniform baseline\n";
    return 0;
}

void add_common_flags(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--input", cfg.input, "Embedding file (Embedding Text Format)");
    sub->add_option("--top", cfg.top, "Use only the N most frequent words");
    sub->add_option("--method", cfg.method, "Induction method: knn or proximity");
    sub->add_option("-k", cfg.k, "Neighbor count for knn induction");
    sub->add_option("-d", cfg.d, "Distance threshold for proximity induction");
    sub->add_option("--seed", cfg.seed, "Seed for sampling/generation stages");
    sub->add_option("--louvain-seed", cfg.louvain_seed, "Seed for Louvain node ordering");
    sub->add_option("--path-sources", cfg.path_sources, "BFS sources for sampled path length");
    sub->add_option("--out", cfg.out_dir, "Output directory");
    sub->add_option("--format", cfg.format, "Output format: edgelist, graphml, json, tsv");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"embnet: induce and analyze language networks from word embeddings"};
    app.require_subcommand(1);
    RunConfig cfg;

    CLI::App* induce = app.add_subcommand("induce", "Induce a graph and write its edge list");
    add_common_flags(induce, cfg);
    induce->add_option("--queries", cfg.queries, "Ego mode: k-NN of the top N words only");
    induce->add_flag("--gcc", cfg.gcc, "Keep only the giant connected component");
    induce->add_flag("--communities", cfg.with_communities, "Add community_id to GraphML");
    induce->add_flag("--pagerank", cfg.with_pagerank, "Add pagerank to GraphML");
    induce->add_flag("--dump-neighbors", cfg.dump_neighbors, "Also write neighbors.tsv");

    CLI::App* sweep = app.add_subcommand("sweep", "Metrics across a k or d list");
    add_common_flags(sweep, cfg);
    sweep->add_option("--ks", cfg.ks_spec, "k values: '2:30', '2:30:4' or '2,6,30'");
    sweep->add_option("--ds", cfg.ds_spec, "d values: '0.8:1.6:0.1' or '0.8,1.2'");

    CLI::App* metrics = app.add_subcommand("metrics", "Full metrics report as JSON");
    add_common_flags(metrics, cfg);
    metrics->add_option("--graph", cfg.graph_file, "Edge-list input instead of --input");
    metrics->add_option("--xmin", cfg.x_min, "x_min for the power-law fit (default: k)");
    metrics->add_flag("--gcc", cfg.gcc, "Restrict to the giant connected component first");
    metrics->add_option("--queries", cfg.queries, "Ego mode: k-NN of the top N words only");

    CLI::App* communities = app.add_subcommand("communities", "Louvain partition as TSV");
    add_common_flags(communities, cfg);
    communities->add_option("--graph", cfg.graph_file, "Edge-list input instead of --input");
    communities->add_flag("--gcc", cfg.gcc, "Restrict to the giant connected component first");
    communities->add_option("--queries", cfg.queries, "Ego mode: k-NN of the top N words only");

    CLI::App* exp = app.add_subcommand("export", "Write GraphML (or edge list) with attributes");
    add_common_flags(exp, cfg);
    exp->add_option("--graph", cfg.graph_file, "Edge-list input instead of --input");
    exp->add_option("--queries", cfg.queries, "Ego mode: k-NN of the top N words only");
    exp->add_flag("--gcc", cfg.gcc, "Keep only the giant connected component");
    exp->add_flag("--communities", cfg.with_communities, "Add community_id attribute");
    exp->add_flag("--pagerank", cfg.with_pagerank, "Add pagerank attribute");

    CLI::App* synth = app.add_subcommand("synth", "Generate a Gaussian-mixture embedding file");
    add_common_flags(synth, cfg);
    synth->add_option("--n", cfg.n, "Number of points");
    synth->add_option("--dim", cfg.dim, "Dimensions");
    synth->add_option("--clusters", cfg.clusters, "Number of planted clusters");
    synth->add_option("--spread", cfg.spread, "Gaussian std around each center");
    synth->add_option("--separation", cfg.separation, "Distance between adjacent centers");

    CLI::App* baseline =
        app.add_subcommand("baseline", "Uniform random embeddings matched to a trained file");
    add_common_flags(baseline, cfg);
    baseline->add_option("--n", cfg.n, "Rows to generate (default: source rows)");
    baseline->add_option("--dim", cfg.dim, "Dimensions (default: source dim)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (induce->parsed()) return cmd_induce(cfg);
        if (sweep->parsed()) return cmd_sweep(cfg);
        if (metrics->parsed()) return cmd_metrics(cfg);
        if (communities->parsed()) return cmd_communities(cfg);
        if (exp->parsed()) return cmd_export(cfg);
        if (synth->parsed()) return cmd_synth(cfg);
        if (baseline->parsed()) return cmd_baseline(cfg);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
