#include "localgcl/augment.hpp"

#include "localgcl/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace localgcl {

namespace {

// ratio * n is computed in floating point; 0.7 * 10 must count as 7, not 7.000000000000001.
int floor_count(double ratio, std::size_t n) {
    return static_cast<int>(std::floor(ratio * static_cast<double>(n) + 1e-9));
}

int ceil_count(double ratio, std::size_t n) {
    return static_cast<int>(std::ceil(ratio * static_cast<double>(n) - 1e-9));
}

int uniform_index(int n, Rng& rng) {
    return std::uniform_int_distribution<int>(0, n - 1)(rng);
}

/// k distinct values of [0, n), sorted.
std::vector<int> sample_indices(int n, int k, Rng& rng) {
    std::vector<int> pool(static_cast<std::size_t>(n));
    std::iota(pool.begin(), pool.end(), 0);
    for (int i = 0; i < k; ++i) {
        const int j = std::uniform_int_distribution<int>(i, n - 1)(rng);
        std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
    }
    pool.resize(static_cast<std::size_t>(k));
    std::sort(pool.begin(), pool.end());
    return pool;
}

/// Subgraph induced by the sorted node list `keep`, indices compacted in order.
Graph induced(const Graph& g, const std::vector<int>& keep) {
    std::vector<int> remap(static_cast<std::size_t>(g.num_nodes), -1);
    for (std::size_t i = 0; i < keep.size(); ++i) remap[static_cast<std::size_t>(keep[i])] = static_cast<int>(i);
    std::vector<Edge> edges;
    for (const Edge& e : g.edges) {
        const int u = remap[static_cast<std::size_t>(e.u)];
        const int v = remap[static_cast<std::size_t>(e.v)];
        if (u >= 0 && v >= 0) edges.push_back({u, v});
    }
    Matrix x(static_cast<Eigen::Index>(keep.size()), g.features.cols());
    for (std::size_t i = 0; i < keep.size(); ++i) x.row(static_cast<Eigen::Index>(i)) = g.features.row(keep[i]);
    return Graph::from_edges(static_cast<int>(keep.size()), edges, std::move(x), g.label);
}

void check_ratio(double ratio, const char* op) {
    if (!(ratio >= 0.0 && ratio < 1.0))
        throw ConfigError(std::string(op) + ": ratio " + std::to_string(ratio) + " outside [0,1)");
}

}  // namespace

std::string to_string(AugmentationKind::Type t) {
    switch (t) {
        case AugmentationKind::Type::NodeDropout: return "node_dropout";
        case AugmentationKind::Type::EdgePerturbation: return "edge_perturbation";
        case AugmentationKind::Type::AttributeMasking: return "attribute_masking";
        case AugmentationKind::Type::Subgraph: return "subgraph";
    }
    return "?";
}

AugmentationKind::Type parse_augmentation(const std::string& s) {
    for (auto t : {AugmentationKind::Type::NodeDropout, AugmentationKind::Type::EdgePerturbation,
                   AugmentationKind::Type::AttributeMasking, AugmentationKind::Type::Subgraph})
        if (to_string(t) == s) return t;
    throw ConfigError("unknown augmentation '" + s + "'");
}

void AugmentationSet::validate() const {
    if (kinds.empty()) throw ConfigError("augmentation set is empty");
    for (const auto& k : kinds) {
        check_ratio(k.ratio, to_string(k.type).c_str());
        if (k.type == AugmentationKind::Type::Subgraph && k.ratio <= 0.0)
            throw ConfigError("subgraph ratio must be in (0,1)");
    }
}

AugmentationKind sample_augmentation(const AugmentationSet& set, Rng& rng) {
    if (set.kinds.empty()) throw ConfigError("augmentation set is empty");
    return set.kinds[static_cast<std::size_t>(uniform_index(static_cast<int>(set.kinds.size()), rng))];
}

Graph node_dropout(const Graph& g, double ratio, Rng& rng) {
    check_ratio(ratio, "node_dropout");
    const int drop = std::min(floor_count(ratio, static_cast<std::size_t>(g.num_nodes)), g.num_nodes - 1);
    if (drop <= 0) return g;
    const std::vector<int> dropped = sample_indices(g.num_nodes, drop, rng);
    std::vector<int> keep;
    keep.reserve(static_cast<std::size_t>(g.num_nodes - drop));
    for (int v = 0, d = 0; v < g.num_nodes; ++v) {
        if (d < drop && dropped[static_cast<std::size_t>(d)] == v) {
            ++d;
            continue;
        }
        keep.push_back(v);
    }
    return induced(g, keep);
}

Graph edge_perturbation(const Graph& g, double ratio, Rng& rng) {
    check_ratio(ratio, "edge_perturbation");
    const int m = static_cast<int>(g.edges.size());
    const int k = floor_count(ratio, g.edges.size());
    if (k <= 0) return g;

    const std::vector<int> removed_idx = sample_indices(m, k, rng);
    std::set<Edge> original(g.edges.begin(), g.edges.end());
    std::vector<Edge> result;
    result.reserve(g.edges.size());
    for (int i = 0, r = 0; i < m; ++i) {
        if (r < k && removed_idx[static_cast<std::size_t>(r)] == i) {
            ++r;
            continue;
        }
        result.push_back(g.edges[static_cast<std::size_t>(i)]);
    }

    std::set<Edge> added;
    const long budget = 10L * m;
    long attempts = 0;
    while (static_cast<int>(added.size()) < k && attempts < budget && g.num_nodes > 1) {
        ++attempts;
        const int a = uniform_index(g.num_nodes, rng);
        const int b = uniform_index(g.num_nodes, rng);
        if (a == b) continue;
        const Edge e = Edge::canonical(a, b);
        if (original.count(e) || added.count(e)) continue;
        added.insert(e);
    }
    if (static_cast<int>(added.size()) < k) {
        // Dense graph: draw the rest from the explicit list of free pairs, so the
        // count is exact and a complete graph degrades to removals only.
        std::vector<Edge> free_pairs;
        for (int a = 0; a < g.num_nodes; ++a)
            for (int b = a + 1; b < g.num_nodes; ++b)
                if (!original.count({a, b}) && !added.count({a, b})) free_pairs.push_back({a, b});
        const int need = std::min(k - static_cast<int>(added.size()), static_cast<int>(free_pairs.size()));
        for (int i : sample_indices(static_cast<int>(free_pairs.size()), need, rng))
            added.insert(free_pairs[static_cast<std::size_t>(i)]);
    }
    result.insert(result.end(), added.begin(), added.end());
    return Graph::from_edges(g.num_nodes, result, g.features, g.label);
}

Graph attribute_masking(const Graph& g, double ratio, Rng& rng) {
    check_ratio(ratio, "attribute_masking");
    const int k = floor_count(ratio, static_cast<std::size_t>(g.num_nodes));
    if (k <= 0) return g;
    Graph out = g;
    for (int v : sample_indices(g.num_nodes, k, rng)) out.features.row(v).setZero();
    return out;
}

Graph subgraph(const Graph& g, double ratio, Rng& rng) {
    check_ratio(ratio, "subgraph");
    const int target = std::clamp(ceil_count(ratio, static_cast<std::size_t>(g.num_nodes)), 1, g.num_nodes);

    std::vector<std::vector<int>> adj(static_cast<std::size_t>(g.num_nodes));
    for (const Edge& e : g.edges) {
        adj[static_cast<std::size_t>(e.u)].push_back(e.v);
        adj[static_cast<std::size_t>(e.v)].push_back(e.u);
    }
    std::vector<char> visited(static_cast<std::size_t>(g.num_nodes), 0);
    std::vector<int> order;
    auto visit = [&](int v) {
        if (!visited[static_cast<std::size_t>(v)]) {
            visited[static_cast<std::size_t>(v)] = 1;
            order.push_back(v);
        }
    };
    auto has_unvisited_neighbour = [&](int v) {
        for (int u : adj[static_cast<std::size_t>(v)])
            if (!visited[static_cast<std::size_t>(u)]) return true;
        return false;
    };

    int current = uniform_index(g.num_nodes, rng);
    visit(current);
    while (static_cast<int>(order.size()) < target) {
        if (!has_unvisited_neighbour(current)) {
            // Stuck: restart from a visited node that can still grow the set.
            std::vector<int> frontier;
            for (int v : order)
                if (has_unvisited_neighbour(v)) frontier.push_back(v);
            if (frontier.empty()) break;  // component exhausted
            current = frontier[static_cast<std::size_t>(uniform_index(static_cast<int>(frontier.size()), rng))];
        }
        const auto& nbrs = adj[static_cast<std::size_t>(current)];
        current = nbrs[static_cast<std::size_t>(uniform_index(static_cast<int>(nbrs.size()), rng))];
        visit(current);
    }
    std::sort(order.begin(), order.end());
    return induced(g, order);
}

Graph apply_augmentation(const Graph& g, const AugmentationKind& kind, Rng& rng) {
    switch (kind.type) {
        case AugmentationKind::Type::NodeDropout: return node_dropout(g, kind.ratio, rng);
        case AugmentationKind::Type::EdgePerturbation: return edge_perturbation(g, kind.ratio, rng);
        case AugmentationKind::Type::AttributeMasking: return attribute_masking(g, kind.ratio, rng);
        case AugmentationKind::Type::Subgraph: return subgraph(g, kind.ratio, rng);
    }
    return g;
}

std::vector<int> choose_mask_nodes(int num_nodes, double mask_rate, Rng& rng) {
    if (!(mask_rate > 0.0 && mask_rate <= 1.0))
        throw ConfigError("mask rate " + std::to_string(mask_rate) + " outside (0,1]");
    const int k = std::clamp(ceil_count(mask_rate, static_cast<std::size_t>(num_nodes)), 1, num_nodes);
    return sample_indices(num_nodes, k, rng);
}

MaskedGraph feature_mask(const Graph& g, double mask_rate, const Matrix& mask_token, Rng& rng) {
    if (mask_token.rows() != 1 || mask_token.cols() != g.features.cols())
        throw ShapeError("feature_mask: mask token must be (1, d)");
    MaskedGraph out{g, choose_mask_nodes(g.num_nodes, mask_rate, rng)};
    for (int v : out.masked) out.graph.features.row(v) = mask_token.row(0);
    return out;
}

}  // namespace localgcl
