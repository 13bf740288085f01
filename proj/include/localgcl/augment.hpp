#pragma once

#include "localgcl/graph.hpp"

#include <span>
#include <string>
#include <vector>

namespace localgcl {

/// One member of the augmentation family used for the contrastive view.
struct AugmentationKind {
    enum class Type { NodeDropout, EdgePerturbation, AttributeMasking, Subgraph };

    Type type = Type::NodeDropout;
    double ratio = 0.2;
};

std::string to_string(AugmentationKind::Type t);
AugmentationKind::Type parse_augmentation(const std::string& s);

/// The configured family T. Defaults to all four kinds at ratio 0.2.
struct AugmentationSet {
    std::vector<AugmentationKind> kinds = {
        {AugmentationKind::Type::NodeDropout, 0.2},
        {AugmentationKind::Type::EdgePerturbation, 0.2},
        {AugmentationKind::Type::AttributeMasking, 0.2},
        {AugmentationKind::Type::Subgraph, 0.2},
    };

    /// Throws ConfigError for an empty set or a ratio outside [0,1).
    void validate() const;
};

/// Uniform choice over the configured kinds.
AugmentationKind sample_augmentation(const AugmentationSet& set, Rng& rng);

/// Removes floor(ratio * n) uniformly chosen nodes (always keeping one).
Graph node_dropout(const Graph& g, double ratio, Rng& rng);
/// Removes floor(ratio * |E|) edges and adds as many new ones; in dense graphs
/// where additions keep colliding it gives up after 10 |E| rejections.
Graph edge_perturbation(const Graph& g, double ratio, Rng& rng);
/// Zeroes the feature rows of floor(ratio * n) nodes.
Graph attribute_masking(const Graph& g, double ratio, Rng& rng);
/// Random-walk induced subgraph on ceil(ratio * n) nodes.
Graph subgraph(const Graph& g, double ratio, Rng& rng);

Graph apply_augmentation(const Graph& g, const AugmentationKind& kind, Rng& rng);

/// Graph with ceil(rate * n) feature rows replaced by the mask token.
struct MaskedGraph {
    Graph graph;
    std::vector<int> masked;  // sorted node indices
};

/// Node selection for feature masking: ceil(rate * n) sorted indices, at least one.
std::vector<int> choose_mask_nodes(int num_nodes, double mask_rate, Rng& rng);

/// Replaces the selected rows with `mask_token` (a (1, d) row).
MaskedGraph feature_mask(const Graph& g, double mask_rate, const Matrix& mask_token, Rng& rng);

}  // namespace localgcl
