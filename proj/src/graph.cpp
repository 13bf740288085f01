#include "localgcl/graph.hpp"

#include "localgcl/errors.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <string_view>

namespace localgcl {

namespace fs = std::filesystem;

Graph Graph::from_edges(int num_nodes, std::span<const Edge> raw_edges, Matrix features,
                        std::optional<int> label, long* self_loops) {
    Graph g;
    g.num_nodes = num_nodes;
    g.features = std::move(features);
    g.label = label;
    g.edges.reserve(raw_edges.size());
    for (const Edge& e : raw_edges) {
        if (e.u == e.v) {
            if (self_loops) ++*self_loops;
            continue;
        }
        g.edges.push_back(Edge::canonical(e.u, e.v));
    }
    std::sort(g.edges.begin(), g.edges.end());
    g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
    g.validate();
    return g;
}

std::vector<int> Graph::degrees() const {
    std::vector<int> deg(static_cast<std::size_t>(num_nodes), 0);
    for (const Edge& e : edges) {
        ++deg[static_cast<std::size_t>(e.u)];
        ++deg[static_cast<std::size_t>(e.v)];
    }
    return deg;
}

void Graph::validate() const {
    if (num_nodes <= 0) throw ShapeError("graph must have at least one node");
    if (features.rows() != num_nodes)
        throw DimensionMismatch("feature rows " + std::to_string(features.rows()) +
                                " != num_nodes " + std::to_string(num_nodes));
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const Edge& e = edges[i];
        if (e.u < 0 || e.v >= num_nodes || e.u >= e.v)
            throw ShapeError("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                             ") not canonical or out of range");
        if (i > 0 && !(edges[i - 1] < e)) throw ShapeError("edges not sorted/unique");
    }
}

bool Graph::operator==(const Graph& other) const {
    return num_nodes == other.num_nodes && edges == other.edges && label == other.label &&
           features.rows() == other.features.rows() && features.cols() == other.features.cols() &&
           features == other.features;
}

std::vector<int> GraphDataset::labels() const {
    std::vector<int> out;
    out.reserve(graphs.size());
    for (const auto& g : graphs) out.push_back(g.label.value_or(-1));
    return out;
}

long GraphDataset::total_nodes() const {
    long n = 0;
    for (const auto& g : graphs) n += g.num_nodes;
    return n;
}

bool GraphDataset::operator==(const GraphDataset& other) const {
    return name == other.name && num_classes == other.num_classes &&
           feature_dim == other.feature_dim && has_node_attributes == other.has_node_attributes &&
           graphs == other.graphs;
}

// ---------------------------------------------------------------------------
// TUDataset text format

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

long parse_int(std::string_view token, const std::string& file, long line) {
    token = trim(token);
    long value = 0;
    const auto* end = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(token.data(), end, value);
    if (token.empty() || ec != std::errc{} || ptr != end)
        throw MalformedDataset(file, line, "expected integer, got '" + std::string(token) + "'");
    return value;
}

/// Reads non-blank lines; each entry keeps its 1-based line number.
struct Line {
    long number;
    std::string text;
};

std::vector<Line> read_lines(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw MissingFile(path.string());
    std::vector<Line> lines;
    std::string text;
    long number = 0;
    while (std::getline(in, text)) {
        ++number;
        if (trim(text).empty()) continue;
        lines.push_back({number, std::move(text)});
    }
    return lines;
}

std::vector<long> read_int_column(const fs::path& path) {
    std::vector<long> out;
    const std::string file = path.filename().string();
    for (const auto& l : read_lines(path)) out.push_back(parse_int(l.text, file, l.number));
    return out;
}

std::vector<int> remap_sorted(const std::vector<long>& values, int& num_distinct) {
    std::map<long, int> index;
    for (long v : values) index.emplace(v, 0);
    int next = 0;
    for (auto& [value, slot] : index) slot = next++;
    num_distinct = next;
    std::vector<int> out;
    out.reserve(values.size());
    for (long v : values) out.push_back(index.at(v));
    return out;
}

}  // namespace

GraphDataset parse_tudataset(const fs::path& directory, const std::string& name) {
    const fs::path a_path = directory / (name + "_A.txt");
    const fs::path ind_path = directory / (name + "_graph_indicator.txt");
    const fs::path gl_path = directory / (name + "_graph_labels.txt");
    const fs::path nl_path = directory / (name + "_node_labels.txt");
    for (const auto& p : {a_path, ind_path, gl_path})
        if (!fs::exists(p)) throw MissingFile(p.string());

    const std::string ind_file = ind_path.filename().string();
    const std::string a_file = a_path.filename().string();

    GraphDataset ds;
    ds.name = name;

    const std::vector<long> graph_label_values = read_int_column(gl_path);
    const auto num_graphs = static_cast<long>(graph_label_values.size());
    if (num_graphs == 0) throw MalformedDataset(gl_path.filename().string(), 1, "no graph labels");
    const std::vector<int> graph_labels = remap_sorted(graph_label_values, ds.num_classes);

    // Node -> graph, node -> local index.
    const auto indicator_lines = read_lines(ind_path);
    const auto num_nodes_total = static_cast<long>(indicator_lines.size());
    std::vector<int> node_graph(static_cast<std::size_t>(num_nodes_total));
    std::vector<int> node_local(static_cast<std::size_t>(num_nodes_total));
    std::vector<int> graph_sizes(static_cast<std::size_t>(num_graphs), 0);
    for (long i = 0; i < num_nodes_total; ++i) {
        const auto& l = indicator_lines[static_cast<std::size_t>(i)];
        const long gid = parse_int(l.text, ind_file, l.number);
        if (gid < 1 || gid > num_graphs)
            throw MalformedDataset(ind_file, l.number,
                                   "graph id " + std::to_string(gid) + " does not exist (" +
                                       std::to_string(num_graphs) + " graphs)");
        const auto g = static_cast<std::size_t>(gid - 1);
        node_graph[static_cast<std::size_t>(i)] = static_cast<int>(g);
        node_local[static_cast<std::size_t>(i)] = graph_sizes[g]++;
    }
    for (long g = 0; g < num_graphs; ++g)
        if (graph_sizes[static_cast<std::size_t>(g)] == 0)
            throw MalformedDataset(gl_path.filename().string(), g + 1,
                                   "graph " + std::to_string(g + 1) + " has no nodes");

    // Arcs.
    std::vector<std::vector<Edge>> graph_edges(static_cast<std::size_t>(num_graphs));
    for (const auto& l : read_lines(a_path)) {
        const std::string_view text = l.text;
        const auto comma = text.find(',');
        if (comma == std::string_view::npos)
            throw MalformedDataset(a_file, l.number, "expected 'u, v'");
        const long u = parse_int(text.substr(0, comma), a_file, l.number);
        const long v = parse_int(text.substr(comma + 1), a_file, l.number);
        for (long endpoint : {u, v})
            if (endpoint < 1 || endpoint > num_nodes_total)
                throw MalformedDataset(a_file, l.number,
                                       "node " + std::to_string(endpoint) + " does not exist (" +
                                           std::to_string(num_nodes_total) + " nodes)");
        const auto ui = static_cast<std::size_t>(u - 1);
        const auto vi = static_cast<std::size_t>(v - 1);
        if (node_graph[ui] != node_graph[vi])
            throw MalformedDataset(a_file, l.number, "edge crosses graphs");
        graph_edges[static_cast<std::size_t>(node_graph[ui])].push_back(
            {node_local[ui], node_local[vi]});
    }

    // Node features.
    std::vector<int> node_labels;
    int label_dim = 0;
    if (fs::exists(nl_path)) {
        const auto lines = read_lines(nl_path);
        std::vector<long> values;
        values.reserve(lines.size());
        for (const auto& l : lines) {
            // Some datasets carry several comma-separated node labels; the first is used.
            const std::string_view text = l.text;
            values.push_back(parse_int(text.substr(0, text.find(',')), nl_path.filename().string(), l.number));
        }
        if (static_cast<long>(values.size()) != num_nodes_total)
            throw MalformedDataset(nl_path.filename().string(), static_cast<long>(values.size()) + 1,
                                   "expected " + std::to_string(num_nodes_total) + " node labels");
        node_labels = remap_sorted(values, label_dim);
        ds.has_node_attributes = true;
    }
    ds.feature_dim = label_dim;

    std::vector<Matrix> features(static_cast<std::size_t>(num_graphs));
    for (long g = 0; g < num_graphs; ++g)
        features[static_cast<std::size_t>(g)] = Matrix::Zero(graph_sizes[static_cast<std::size_t>(g)], label_dim);
    if (ds.has_node_attributes)
        for (long i = 0; i < num_nodes_total; ++i) {
            const auto n = static_cast<std::size_t>(i);
            features[static_cast<std::size_t>(node_graph[n])](node_local[n], node_labels[n]) = 1.0;
        }

    ds.graphs.reserve(static_cast<std::size_t>(num_graphs));
    for (long g = 0; g < num_graphs; ++g) {
        const auto gi = static_cast<std::size_t>(g);
        ds.graphs.push_back(Graph::from_edges(graph_sizes[gi], graph_edges[gi], std::move(features[gi]),
                                              graph_labels[gi], &ds.self_loops_dropped));
    }
    return ds;
}

void write_tudataset(const GraphDataset& ds, const fs::path& directory) {
    fs::create_directories(directory);
    std::ofstream a(directory / (ds.name + "_A.txt"));
    std::ofstream ind(directory / (ds.name + "_graph_indicator.txt"));
    std::ofstream gl(directory / (ds.name + "_graph_labels.txt"));

    bool one_hot = ds.feature_dim > 0;
    for (const auto& g : ds.graphs)
        for (Eigen::Index r = 0; one_hot && r < g.features.rows(); ++r) {
            const auto row = g.features.row(r);
            one_hot = (row.array() == 0.0 || row.array() == 1.0).all() && row.sum() == 1.0;
        }
    std::ofstream nl;
    if (one_hot) nl.open(directory / (ds.name + "_node_labels.txt"));

    long offset = 0;
    for (std::size_t gi = 0; gi < ds.graphs.size(); ++gi) {
        const Graph& g = ds.graphs[gi];
        for (int v = 0; v < g.num_nodes; ++v) {
            ind << gi + 1 << '\n';
            if (one_hot) {
                Eigen::Index col = 0;
                g.features.row(v).maxCoeff(&col);
                nl << col << '\n';
            }
        }
        for (const Edge& e : g.edges) {
            a << offset + e.u + 1 << ", " << offset + e.v + 1 << '\n';
            a << offset + e.v + 1 << ", " << offset + e.u + 1 << '\n';
        }
        gl << g.label.value_or(0) << '\n';
        offset += g.num_nodes;
    }
}

GraphDataset synthesize_degree_features(GraphDataset ds, int max_degree) {
    if (max_degree < 1) throw ConfigError("max_degree must be >= 1");
    for (auto& g : ds.graphs) {
        const auto deg = g.degrees();
        g.features = Matrix::Zero(g.num_nodes, max_degree + 1);
        for (int v = 0; v < g.num_nodes; ++v)
            g.features(v, std::min(deg[static_cast<std::size_t>(v)], max_degree)) = 1.0;
    }
    ds.feature_dim = max_degree + 1;
    return ds;
}

// ---------------------------------------------------------------------------
// Batching

std::vector<int> GraphBatch::degrees() const {
    std::vector<int> deg(static_cast<std::size_t>(total_nodes()), 0);
    for (const Edge& e : edges) {
        ++deg[static_cast<std::size_t>(e.u)];
        ++deg[static_cast<std::size_t>(e.v)];
    }
    return deg;
}

GraphBatch batch(std::span<const Graph> graphs) {
    if (graphs.empty()) throw EmptyBatch("batch needs at least one graph");
    const int d = graphs.front().feature_dim();
    int total = 0;
    std::size_t edge_total = 0;
    for (const auto& g : graphs) {
        if (g.feature_dim() != d)
            throw DimensionMismatch("feature dim " + std::to_string(g.feature_dim()) + " != " +
                                    std::to_string(d));
        total += g.num_nodes;
        edge_total += g.edges.size();
    }

    GraphBatch b;
    b.graph_count = static_cast<int>(graphs.size());
    b.features.resize(total, d);
    b.segments.reserve(static_cast<std::size_t>(total));
    b.node_offsets.reserve(graphs.size() + 1);
    b.edges.reserve(edge_total);
    b.labels.reserve(graphs.size());

    int offset = 0;
    for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
        const Graph& g = graphs[gi];
        b.node_offsets.push_back(offset);
        if (d > 0) b.features.middleRows(offset, g.num_nodes) = g.features;
        b.segments.insert(b.segments.end(), static_cast<std::size_t>(g.num_nodes), static_cast<int>(gi));
        for (const Edge& e : g.edges) b.edges.push_back({e.u + offset, e.v + offset});
        b.labels.push_back(g.label);
        offset += g.num_nodes;
    }
    b.node_offsets.push_back(offset);

    std::vector<std::pair<int, int>> arcs;  // (dst, src)
    arcs.reserve(2 * b.edges.size());
    for (const Edge& e : b.edges) {
        arcs.emplace_back(e.v, e.u);
        arcs.emplace_back(e.u, e.v);
    }
    std::sort(arcs.begin(), arcs.end());
    b.arc_dst.reserve(arcs.size());
    b.arc_src.reserve(arcs.size());
    for (const auto& [dst, src] : arcs) {
        b.arc_dst.push_back(dst);
        b.arc_src.push_back(src);
    }
    return b;
}

std::vector<Graph> unbatch(const GraphBatch& b) {
    std::vector<std::vector<Edge>> edges(static_cast<std::size_t>(b.graph_count));
    for (const Edge& e : b.edges) {
        const int g = b.segments[static_cast<std::size_t>(e.u)];
        const int off = b.node_offsets[static_cast<std::size_t>(g)];
        edges[static_cast<std::size_t>(g)].push_back({e.u - off, e.v - off});
    }
    std::vector<Graph> out;
    out.reserve(static_cast<std::size_t>(b.graph_count));
    for (int g = 0; g < b.graph_count; ++g) {
        const auto gi = static_cast<std::size_t>(g);
        const int off = b.node_offsets[gi];
        const int n = b.node_offsets[gi + 1] - off;
        out.push_back(Graph::from_edges(n, edges[gi], b.features.middleRows(off, n), b.labels[gi]));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Folds

FoldSplit kfold_split(int n, int k, std::uint64_t seed) {
    if (k < 2 || k > n)
        throw InvalidFoldCount("k=" + std::to_string(k) + " must satisfy 2 <= k <= n=" + std::to_string(n));
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    Rng rng(derive_seed(seed, {0x6b666f6cULL}));
    std::shuffle(order.begin(), order.end(), rng);
    FoldSplit split;
    split.k = k;
    split.assignments.assign(static_cast<std::size_t>(n), 0);
    for (int pos = 0; pos < n; ++pos) split.assignments[static_cast<std::size_t>(order[static_cast<std::size_t>(pos)])] = pos % k;
    return split;
}

std::vector<int> FoldSplit::test_indices(int fold) const {
    std::vector<int> out;
    for (std::size_t i = 0; i < assignments.size(); ++i)
        if (assignments[i] == fold) out.push_back(static_cast<int>(i));
    return out;
}

std::vector<int> FoldSplit::train_indices(int fold) const {
    std::vector<int> out;
    for (std::size_t i = 0; i < assignments.size(); ++i)
        if (assignments[i] != fold) out.push_back(static_cast<int>(i));
    return out;
}

}  // namespace localgcl
