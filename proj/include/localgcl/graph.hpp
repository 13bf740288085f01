#pragma once

#include "localgcl/common.hpp"

#include <compare>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace localgcl {

/// Undirected edge in canonical order (u < v).
struct Edge {
    int u = 0;
    int v = 0;

    static Edge canonical(int a, int b) noexcept { return a < b ? Edge{a, b} : Edge{b, a}; }
    auto operator<=>(const Edge&) const = default;
};

/// One undirected attributed graph.
///
/// Edges are kept sorted, deduplicated, self-loop free and canonical; the
/// adjacency matrix is never stored.
struct Graph {
    int num_nodes = 0;
    std::vector<Edge> edges;
    Matrix features;  // num_nodes x d
    std::optional<int> label;

    /// Canonicalizes `raw_edges` (orders endpoints, sorts, drops duplicates and
    /// self-loops) and validates the result. `self_loops`, when given, is
    /// incremented once per dropped self-loop.
    static Graph from_edges(int num_nodes, std::span<const Edge> raw_edges, Matrix features,
                            std::optional<int> label = std::nullopt, long* self_loops = nullptr);

    int feature_dim() const noexcept { return static_cast<int>(features.cols()); }
    std::vector<int> degrees() const;

    /// Throws DimensionMismatch / ShapeError when an invariant is violated.
    void validate() const;

    bool operator==(const Graph& other) const;
};

/// Ordered collection of graphs sharing one feature dimension.
struct GraphDataset {
    std::string name;
    std::vector<Graph> graphs;
    int num_classes = 0;
    int feature_dim = 0;
    /// False when no node labels were found; features must then be synthesized.
    bool has_node_attributes = false;
    long self_loops_dropped = 0;

    std::vector<int> labels() const;
    long total_nodes() const;

    bool operator==(const GraphDataset& other) const;
};

/// Block-diagonal packing of several graphs.
///
/// `arc_src`/`arc_dst` hold both directions of every edge, sorted by
/// destination (then source), so messages can be gathered by source and
/// accumulated with a sorted segment sum over destinations.
struct GraphBatch {
    Matrix features;
    std::vector<Edge> edges;           // global node indices
    std::vector<int> segments;         // node -> graph id, non-decreasing
    int graph_count = 0;
    std::vector<int> node_offsets;     // size graph_count + 1
    std::vector<std::optional<int>> labels;

    std::vector<int> arc_src;
    std::vector<int> arc_dst;

    int total_nodes() const noexcept { return static_cast<int>(features.rows()); }
    int feature_dim() const noexcept { return static_cast<int>(features.cols()); }
    /// Degree of every node (self-loops excluded).
    std::vector<int> degrees() const;
};

/// Per-graph fold assignment.
struct FoldSplit {
    int k = 0;
    std::vector<int> assignments;

    std::vector<int> test_indices(int fold) const;
    std::vector<int> train_indices(int fold) const;
};

/// Reads `<name>_A.txt`, `<name>_graph_indicator.txt`, `<name>_graph_labels.txt`
/// and optionally `<name>_node_labels.txt` from `directory`.
GraphDataset parse_tudataset(const std::filesystem::path& directory, const std::string& name);

/// Writes `ds` in the TUDataset text layout. Node labels are emitted only when
/// every feature row is one-hot; both arc directions are written.
void write_tudataset(const GraphDataset& ds, const std::filesystem::path& directory);

/// Replaces features with one-hot(min(degree, max_degree)) of width max_degree+1.
GraphDataset synthesize_degree_features(GraphDataset ds, int max_degree = 10);

GraphBatch batch(std::span<const Graph> graphs);
std::vector<Graph> unbatch(const GraphBatch& b);

/// Deterministic shuffled round-robin assignment of n items to k folds.
FoldSplit kfold_split(int n, int k, std::uint64_t seed);

}  // namespace localgcl
