#include "embnet/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "embnet/error.hpp"

namespace embnet::io {

namespace {

std::string format_double(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

std::string format_fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return std::string(buf);
}

std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        case '\'': out += "&apos;"; break;
        default: out += c;
        }
    }
    return out;
}

} // namespace

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out || !(out << content) || !out.flush()) {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw IoError("cannot write file: " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoError("cannot rename " + tmp.string() + " to " + path.string());
    }
}

std::string edge_list_tsv(const UndirectedGraph& g) {
    std::ostringstream out;
    g.for_each_edge([&](NodeId u, NodeId v) {
        out << g.label(u) << '\t' << g.label(v) << '\n';
    });
    return out.str();
}

void write_edge_list(const UndirectedGraph& g, const std::filesystem::path& path) {
    write_file_atomic(path, edge_list_tsv(g));
}

UndirectedGraph read_edge_list(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open edge list: " + path.string());
    }
    const std::string name = path.string();
    std::vector<std::string> labels;
    std::unordered_map<std::string, NodeId> ids;
    std::vector<std::pair<NodeId, NodeId>> edges;

    auto intern = [&](const std::string& token) {
        auto it = ids.find(token);
        if (it != ids.end()) return it->second;
        const auto id = static_cast<NodeId>(labels.size());
        labels.push_back(token);
        ids.emplace(token, id);
        return id;
    };

    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) {
            throw ParseError(name, lineno, "blank line in edge list");
        }
        const std::size_t tab = line.find('\t');
        if (tab == std::string::npos || tab == 0 || tab + 1 >= line.size() ||
            line.find('\t', tab + 1) != std::string::npos) {
            throw ParseError(name, lineno, "expected exactly two tab-separated tokens");
        }
        const std::string a = line.substr(0, tab);
        const std::string b = line.substr(tab + 1);
        if (a == b) {
            throw ParseError(name, lineno, "self-loop: '" + a + "'");
        }
        edges.emplace_back(intern(a), intern(b));
    }
    return UndirectedGraph::from_edges(labels.size(), std::move(edges), std::move(labels));
}

std::string graphml(const UndirectedGraph& g, const GraphmlOptions& opt) {
    if (opt.communities && opt.communities->labels.size() != g.num_nodes()) {
        throw ValidationError("graphml: community assignment does not match node count");
    }
    if (opt.pagerank && opt.pagerank->size() != g.num_nodes()) {
        throw ValidationError("graphml: pagerank vector does not match node count");
    }
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\"\n"
        << "         xmlns:xsi=\"http://www.w3.org/2001/XMLSchema-instance\"\n"
        << "         xsi:schemaLocation=\"http://graphml.graphdrawing.org/xmlns "
           "http://graphml.graphdrawing.org/xmlns/1.0/graphml.xsd\">\n";
    out << "  <key id=\"label\" for=\"node\" attr.name=\"label\" attr.type=\"string\"/>\n";
    out << "  <key id=\"degree\" for=\"node\" attr.name=\"degree\" attr.type=\"int\"/>\n";
    if (opt.communities) {
        out << "  <key id=\"community_id\" for=\"node\" attr.name=\"community_id\" "
               "attr.type=\"int\"/>\n";
    }
    if (opt.pagerank) {
        out << "  <key id=\"pagerank\" for=\"node\" attr.name=\"pagerank\" "
               "attr.type=\"double\"/>\n";
    }
    out << "  <graph id=\"G\" edgedefault=\"undirected\">\n";
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
        out << "    <node id=\"n" << v << "\">\n";
        out << "      <data key=\"label\">" << xml_escape(g.label(v)) << "</data>\n";
        out << "      <data key=\"degree\">" << g.degree(v) << "</data>\n";
        if (opt.communities) {
            out << "      <data key=\"community_id\">" << opt.communities->labels[v]
                << "</data>\n";
        }
        if (opt.pagerank) {
            out << "      <data key=\"pagerank\">" << format_double((*opt.pagerank)[v])
                << "</data>\n";
        }
        out << "    </node>\n";
    }
    std::size_t edge_id = 0;
    g.for_each_edge([&](NodeId u, NodeId v) {
        out << "    <edge id=\"e" << edge_id++ << "\" source=\"n" << u << "\" target=\"n" << v
            << "\"/>\n";
    });
    out << "  </graph>\n</graphml>\n";
    return out.str();
}

void write_graphml(const UndirectedGraph& g, const std::filesystem::path& path,
                   const GraphmlOptions& opt) {
    write_file_atomic(path, graphml(g, opt));
}

namespace {

// Dense relabeling by descending community size, ties toward the community
// holding the smallest node.
std::vector<std::int32_t> renumber_by_size(const std::vector<std::int32_t>& labels) {
    std::int32_t max_label = -1;
    for (std::int32_t c : labels) max_label = std::max(max_label, c);
    const std::size_t count = static_cast<std::size_t>(max_label + 1);
    std::vector<std::size_t> size(count, 0);
    for (std::int32_t c : labels) ++size[c];
    std::vector<std::int32_t> first(count, -1);
    for (std::size_t v = 0; v < labels.size(); ++v) {
        if (first[labels[v]] < 0) first[labels[v]] = static_cast<std::int32_t>(v);
    }
    std::vector<std::int32_t> order(count);
    for (std::size_t c = 0; c < count; ++c) order[c] = static_cast<std::int32_t>(c);
    std::sort(order.begin(), order.end(), [&](std::int32_t a, std::int32_t b) {
        if (size[a] != size[b]) return size[a] > size[b];
        return first[a] < first[b];
    });
    std::vector<std::int32_t> rank(count);
    for (std::size_t i = 0; i < count; ++i) rank[order[i]] = static_cast<std::int32_t>(i);
    std::vector<std::int32_t> out(labels.size());
    for (std::size_t v = 0; v < labels.size(); ++v) out[v] = rank[labels[v]];
    return out;
}

} // namespace

std::string partition_tsv(const UndirectedGraph& g, const Partition& p) {
    if (p.labels.size() != g.num_nodes()) {
        throw ValidationError("partition_tsv: partition does not match node count");
    }
    const std::vector<std::int32_t> renumbered = renumber_by_size(p.labels);
    std::ostringstream out;
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
        out << g.label(v) << '\t' << renumbered[v] << '\n';
    }
    return out.str();
}

void write_partition(const UndirectedGraph& g, const Partition& p,
                     const std::filesystem::path& path) {
    write_file_atomic(path, partition_tsv(g, p));
}

std::string neighbor_tsv(const NeighborTable& nt, const Vocabulary& vocab) {
    if (vocab.size() != nt.pool_size) {
        throw ValidationError("neighbor_tsv: vocabulary size mismatch");
    }
    std::ostringstream out;
    for (std::size_t q = 0; q < nt.queries.size(); ++q) {
        const std::string& query = vocab.token(nt.queries[q]);
        for (const Neighbor& nb : nt.lists[q]) {
            out << query << '\t' << vocab.token(nb.index) << '\t'
                << format_fixed(nb.distance, 6) << '\n';
        }
    }
    return out.str();
}

void write_neighbors(const NeighborTable& nt, const Vocabulary& vocab,
                     const std::filesystem::path& path) {
    write_file_atomic(path, neighbor_tsv(nt, vocab));
}

std::string metrics_json(const MetricsReport& r) {
    nlohmann::json j;
    j["n"] = r.n;
    j["m"] = r.m;
    j["num_components"] = r.num_components;
    j["gcc_fraction"] = r.gcc_fraction;
    j["clustering_coefficient"] = r.clustering_coefficient;
    j["c_random"] = r.c_random;
    j["avg_path_length"] = r.avg_path_length;
    j["pl_estimated"] = r.pl_estimated;
    j["pl_random"] = r.pl_random;
    j["gamma"] = r.gamma;
    j["alpha"] = r.alpha;
    j["x_min"] = r.x_min;
    return j.dump(2) + "\n";
}

void write_metrics(const MetricsReport& r, const std::filesystem::path& path) {
    write_file_atomic(path, metrics_json(r));
}

std::string sweep_tsv(const SweepCurve& curve) {
    std::ostringstream out;
    out << "param\tedges\tcomponents\tgcc_fraction\tclustering\tmodularity\n";
    for (const SweepPoint& pt : curve.points) {
        out << format_double(pt.param) << '\t' << pt.edges << '\t' << pt.components << '\t'
            << format_fixed(pt.gcc_fraction, 6) << '\t' << format_fixed(pt.clustering, 6) << '\t'
            << format_fixed(pt.modularity, 6) << '\n';
    }
    return out.str();
}

void write_sweep(const SweepCurve& curve, const std::filesystem::path& path) {
    write_file_atomic(path, sweep_tsv(curve));
}

} // namespace embnet::io
