#pragma once

#include "localgcl/autodiff.hpp"
#include "localgcl/graph.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace localgcl {

enum class Backbone { Gin, Gcn };

std::string to_string(Backbone b);
Backbone parse_backbone(const std::string& s);

struct ModelDims {
    Backbone backbone = Backbone::Gin;
    int input_dim = 0;   // d
    int hidden_dim = 32; // d_h
    int proj_dim = 32;   // d_p
    int layers = 3;      // L

    bool operator==(const ModelDims&) const = default;
};

/// Affine map x -> x W + b; W is (in, out), b is (1, out).
struct Linear {
    Matrix weight;
    Matrix bias;
};

/// One encoder layer. GIN layers use both linears and the learnable eps;
/// GCN layers use `first` only.
struct EncoderLayer {
    Linear first;
    Linear second;
    Matrix eps;  // (1, 1), GIN only
};

/// Learnable state of encoder E, projection head P, decoder D and the mask token.
struct ModelParams {
    ModelDims dims;
    std::vector<EncoderLayer> encoder;
    Linear proj_hidden, proj_out;  // d_h -> d_h -> d_p
    Linear dec_hidden, dec_out;    // d_p -> d_h -> d
    Matrix mask_token;             // (1, d)

    /// Every learnable array in a fixed order, with its checkpoint name.
    std::vector<std::pair<std::string, Matrix*>> named();
    std::vector<std::pair<std::string, const Matrix*>> named() const;

    bool operator==(const ModelParams& other) const;
};

/// Glorot-uniform weights, zero biases, eps = 0, zero mask token.
ModelParams init_params(const ModelDims& dims, std::uint64_t seed);

/// ModelParams mirrored as leaves on a GradContext for one forward pass.
struct BoundLinear {
    ad::DiffArray weight, bias;
};
struct BoundLayer {
    BoundLinear first, second;
    ad::DiffArray eps;
};
struct BoundParams {
    ModelDims dims;
    std::vector<BoundLayer> encoder;
    BoundLinear proj_hidden, proj_out, dec_hidden, dec_out;
    ad::DiffArray mask_token;
    /// Same order as ModelParams::named().
    std::vector<ad::DiffArray> leaves;
};

BoundParams bind(const ModelParams& params, ad::GradContext& ctx);

/// Gradients of every parameter, ordered like ModelParams::named().
std::vector<Matrix> collect_gradients(const BoundParams& bound, const ad::Gradients& grads);

/// Pooled and per-node projected embeddings.
struct Embeddings {
    ad::DiffArray node_z;   // total_nodes x d_p
    ad::DiffArray graph_z;  // graph_count x d_p
};

ad::DiffArray linear(const ad::DiffArray& x, const BoundLinear& layer);

/// h'_v = relu(MLP((1 + eps) h_v + sum of neighbour rows)).
ad::DiffArray gin_layer(const ad::DiffArray& h, const GraphBatch& batch, const BoundLayer& layer);
/// h'_v = relu(W * sum over N(v) and v of h_u / sqrt(deg~_u deg~_v) + b), deg~ = degree + 1.
ad::DiffArray gcn_layer(const ad::DiffArray& h, const GraphBatch& batch, const BoundLayer& layer);

/// Runs all encoder layers on node features `x`; returns (total_nodes x d_h).
ad::DiffArray encode(const ad::DiffArray& x, const GraphBatch& batch, const BoundParams& params);
/// Per-node projection and per-graph sum pooling.
Embeddings project(const ad::DiffArray& h, const GraphBatch& batch, const BoundParams& params);
/// Row-wise reconstruction MLP, no output nonlinearity.
ad::DiffArray decode(const ad::DiffArray& node_z, const BoundParams& params);

/// Forward-only convenience: pooled graph embeddings of a batch.
Matrix graph_embeddings(const ModelParams& params, const GraphBatch& batch);
/// Forward-only convenience: sum-pooled encoder outputs (no projection head).
Matrix pooled_encoder_embeddings(const ModelParams& params, const GraphBatch& batch);
/// Forward-only convenience: per-node projected embeddings of a batch.
Matrix node_embeddings(const ModelParams& params, const GraphBatch& batch);

}  // namespace localgcl
