#pragma once

#include "localgcl/graph.hpp"
#include "localgcl/model.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace localgcl {

/// Which vector represents a graph downstream.
enum class Representation {
    Projected,  // pooled projection-head output, the trainer's z
    Encoder,    // pooled encoder output
};
std::string to_string(Representation r);
Representation parse_representation(const std::string& s);

/// Pooled embedding of every graph (no augmentation, no masking).
Matrix embed_dataset(const ModelParams& params, const GraphDataset& ds,
                     Representation rep = Representation::Projected);

struct ProbeConfig {
    double l2 = 1e-3;
    int steps = 500;
    double lr = 0.1;
    double std_floor = 1e-8;
};

struct EvalReport {
    std::string dataset;
    int k = 0;
    std::uint64_t seed = 0;
    std::vector<double> fold_accuracies;  // evaluated folds only
    std::vector<int> skipped_folds;       // single-class training split
    double mean = 0.0;
    double std = 0.0;  // population std over evaluated folds
};

/// k-fold multinomial logistic regression on standardized frozen embeddings.
EvalReport linear_probe(const Matrix& embeddings, std::span<const int> labels, int k, std::uint64_t seed,
                        const ProbeConfig& cfg = {});

/// Mean and population standard deviation.
std::pair<double, double> mean_std(std::span<const double> values);

struct PerturbationSpec {
    double local_fraction = 0.05;   // share of nodes whose features are zeroed
    double global_fraction = 0.30;  // share of edges rewired by double-edge swaps
};

struct ProbeReport {
    std::vector<double> local_shift;   // per graph
    std::vector<double> global_shift;  // per rewired graph
    int skipped_global = 0;            // graphs without two disjoint edges
    double mean_local = 0.0;
    double mean_global = 0.0;
};

/// Zeroes the features of ceil(fraction * n) nodes.
Graph local_perturbation(const Graph& g, double fraction, Rng& rng);
/// Degree-preserving rewiring of at least ceil(fraction * |E|) edges through
/// double-edge swaps. Returns false when the graph has no two disjoint edges.
bool global_perturbation(const Graph& g, double fraction, Rng& rng, Graph& out);

/// 1 - cos(a, b), clamped to [0, 2].
double cosine_distance(std::span<const double> a, std::span<const double> b);

/// Embedding displacement of every graph under a local and a global perturbation.
ProbeReport probe_embedding_shift(const ModelParams& params, const GraphDataset& ds, const PerturbationSpec& spec,
                                  std::uint64_t seed);

}  // namespace localgcl
