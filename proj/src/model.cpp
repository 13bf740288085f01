#include "localgcl/model.hpp"

#include "localgcl/errors.hpp"

#include <cmath>

namespace localgcl {

using ad::DiffArray;

std::string to_string(Backbone b) { return b == Backbone::Gin ? "gin" : "gcn"; }

Backbone parse_backbone(const std::string& s) {
    if (s == "gin") return Backbone::Gin;
    if (s == "gcn") return Backbone::Gcn;
    throw ConfigError("unknown backbone '" + s + "' (expected gin or gcn)");
}

// ---------------------------------------------------------------------------
// Parameters

namespace {

template <typename Self, typename Ptr>
std::vector<std::pair<std::string, Ptr>> named_impl(Self& p) {
    std::vector<std::pair<std::string, Ptr>> out;
    auto add_linear = [&out](const std::string& prefix, auto& lin) {
        out.emplace_back(prefix + ".weight", &lin.weight);
        out.emplace_back(prefix + ".bias", &lin.bias);
    };
    for (std::size_t i = 0; i < p.encoder.size(); ++i) {
        const std::string prefix = "encoder." + std::to_string(i);
        add_linear(prefix + ".mlp.0", p.encoder[i].first);
        if (p.dims.backbone == Backbone::Gin) {
            add_linear(prefix + ".mlp.1", p.encoder[i].second);
            out.emplace_back(prefix + ".eps", &p.encoder[i].eps);
        }
    }
    add_linear("projection.0", p.proj_hidden);
    add_linear("projection.1", p.proj_out);
    add_linear("decoder.0", p.dec_hidden);
    add_linear("decoder.1", p.dec_out);
    out.emplace_back("mask_token", &p.mask_token);
    return out;
}

Linear glorot_linear(int in, int out, Rng& rng) {
    const double bound = std::sqrt(6.0 / static_cast<double>(in + out));
    std::uniform_real_distribution<double> dist(-bound, bound);
    Linear lin;
    lin.weight.resize(in, out);
    for (Eigen::Index i = 0; i < lin.weight.size(); ++i) lin.weight.data()[i] = dist(rng);
    lin.bias = Matrix::Zero(1, out);
    return lin;
}

}  // namespace

std::vector<std::pair<std::string, Matrix*>> ModelParams::named() {
    return named_impl<ModelParams, Matrix*>(*this);
}

std::vector<std::pair<std::string, const Matrix*>> ModelParams::named() const {
    return named_impl<const ModelParams, const Matrix*>(*this);
}

bool ModelParams::operator==(const ModelParams& other) const {
    if (!(dims == other.dims)) return false;
    const auto a = named();
    const auto b = other.named();
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const Matrix& x = *a[i].second;
        const Matrix& y = *b[i].second;
        if (a[i].first != b[i].first || x.rows() != y.rows() || x.cols() != y.cols() || x != y) return false;
    }
    return true;
}

ModelParams init_params(const ModelDims& dims, std::uint64_t seed) {
    if (dims.input_dim < 1 || dims.hidden_dim < 1 || dims.proj_dim < 1 || dims.layers < 1)
        throw ConfigError("model dims must all be >= 1");
    Rng rng(derive_seed(seed, {0x706172616dULL}));
    ModelParams p;
    p.dims = dims;
    for (int l = 0; l < dims.layers; ++l) {
        const int in = l == 0 ? dims.input_dim : dims.hidden_dim;
        EncoderLayer layer;
        layer.first = glorot_linear(in, dims.hidden_dim, rng);
        if (dims.backbone == Backbone::Gin) {
            layer.second = glorot_linear(dims.hidden_dim, dims.hidden_dim, rng);
            layer.eps = Matrix::Zero(1, 1);
        }
        p.encoder.push_back(std::move(layer));
    }
    p.proj_hidden = glorot_linear(dims.hidden_dim, dims.hidden_dim, rng);
    p.proj_out = glorot_linear(dims.hidden_dim, dims.proj_dim, rng);
    p.dec_hidden = glorot_linear(dims.proj_dim, dims.hidden_dim, rng);
    p.dec_out = glorot_linear(dims.hidden_dim, dims.input_dim, rng);
    p.mask_token = Matrix::Zero(1, dims.input_dim);
    return p;
}

BoundParams bind(const ModelParams& params, ad::GradContext& ctx) {
    BoundParams b;
    b.dims = params.dims;
    auto leaf = [&](const Matrix& m) {
        DiffArray d = ctx.leaf(m);
        b.leaves.push_back(d);
        return d;
    };
    auto bind_linear = [&](const Linear& lin) { return BoundLinear{leaf(lin.weight), leaf(lin.bias)}; };
    // Order must match named().
    for (const auto& layer : params.encoder) {
        BoundLayer bl;
        bl.first = bind_linear(layer.first);
        if (params.dims.backbone == Backbone::Gin) {
            bl.second = bind_linear(layer.second);
            bl.eps = leaf(layer.eps);
        }
        b.encoder.push_back(bl);
    }
    b.proj_hidden = bind_linear(params.proj_hidden);
    b.proj_out = bind_linear(params.proj_out);
    b.dec_hidden = bind_linear(params.dec_hidden);
    b.dec_out = bind_linear(params.dec_out);
    b.mask_token = leaf(params.mask_token);
    return b;
}

std::vector<Matrix> collect_gradients(const BoundParams& bound, const ad::Gradients& grads) {
    std::vector<Matrix> out;
    out.reserve(bound.leaves.size());
    for (const auto& leaf : bound.leaves) out.push_back(grads.of(leaf));
    return out;
}

// ---------------------------------------------------------------------------
// Layers

DiffArray linear(const DiffArray& x, const BoundLinear& layer) {
    return ad::add(ad::matmul(x, layer.weight), layer.bias);
}

DiffArray gin_layer(const DiffArray& h, const GraphBatch& batch, const BoundLayer& layer) {
    const Eigen::Index n = batch.total_nodes();
    if (h.rows() != n)
        throw ShapeError("gin_layer: H has " + std::to_string(h.rows()) + " rows, batch has " + std::to_string(n));
    auto& ctx = *h.context();
    // (1 + eps) h = h + eps * h, eps broadcast to every entry.
    DiffArray eps_col = ad::matmul(ctx.constant(Matrix::Ones(n, 1)), layer.eps);
    DiffArray self = ad::add(h, ad::mul(ad::broadcast_col(eps_col, h.cols()), h));
    DiffArray messages = ad::gather_rows(h, batch.arc_src);
    DiffArray neighbours = ad::segment_sum(messages, batch.arc_dst, static_cast<int>(n));
    DiffArray pre = ad::add(self, neighbours);
    DiffArray hidden = ad::relu(linear(pre, layer.first));
    return ad::relu(linear(hidden, layer.second));
}

DiffArray gcn_layer(const DiffArray& h, const GraphBatch& batch, const BoundLayer& layer) {
    const int n = batch.total_nodes();
    if (h.rows() != n)
        throw ShapeError("gcn_layer: H has " + std::to_string(h.rows()) + " rows, batch has " + std::to_string(n));
    auto& ctx = *h.context();
    const auto deg = batch.degrees();

    // Arcs plus one self-loop per node, still sorted by destination.
    std::vector<int> src, dst;
    src.reserve(batch.arc_src.size() + static_cast<std::size_t>(n));
    dst.reserve(src.capacity());
    std::size_t a = 0;
    for (int v = 0; v < n; ++v) {
        bool self_done = false;
        while (a < batch.arc_dst.size() && batch.arc_dst[a] == v) {
            if (!self_done && batch.arc_src[a] > v) {
                src.push_back(v);
                dst.push_back(v);
                self_done = true;
            }
            src.push_back(batch.arc_src[a]);
            dst.push_back(v);
            ++a;
        }
        if (!self_done) {
            src.push_back(v);
            dst.push_back(v);
        }
    }
    Matrix coef(static_cast<Eigen::Index>(src.size()), h.cols());
    for (std::size_t i = 0; i < src.size(); ++i) {
        const double du = deg[static_cast<std::size_t>(src[i])] + 1.0;
        const double dv = deg[static_cast<std::size_t>(dst[i])] + 1.0;
        coef.row(static_cast<Eigen::Index>(i)).setConstant(1.0 / std::sqrt(du * dv));
    }
    DiffArray messages = ad::mul(ad::gather_rows(h, src), ctx.constant(std::move(coef)));
    DiffArray agg = ad::segment_sum(messages, dst, n);
    return ad::relu(linear(agg, layer.first));
}

DiffArray encode(const DiffArray& x, const GraphBatch& batch, const BoundParams& params) {
    if (x.cols() != params.dims.input_dim)
        throw ShapeError("encode: feature dim " + std::to_string(x.cols()) + " != model input dim " +
                         std::to_string(params.dims.input_dim));
    DiffArray h = x;
    for (const auto& layer : params.encoder)
        h = params.dims.backbone == Backbone::Gin ? gin_layer(h, batch, layer) : gcn_layer(h, batch, layer);
    return h;
}

Embeddings project(const DiffArray& h, const GraphBatch& batch, const BoundParams& params) {
    if (h.rows() != batch.total_nodes() || h.cols() != params.dims.hidden_dim)
        throw ShapeError("project: expected (" + std::to_string(batch.total_nodes()) + "," +
                         std::to_string(params.dims.hidden_dim) + ") input");
    DiffArray node_z = linear(ad::relu(linear(h, params.proj_hidden)), params.proj_out);
    DiffArray graph_z = ad::segment_sum(node_z, batch.segments, batch.graph_count);
    return {node_z, graph_z};
}

DiffArray decode(const DiffArray& node_z, const BoundParams& params) {
    if (node_z.cols() != params.dims.proj_dim)
        throw ShapeError("decode: expected " + std::to_string(params.dims.proj_dim) + " columns, got " +
                         std::to_string(node_z.cols()));
    return linear(ad::relu(linear(node_z, params.dec_hidden)), params.dec_out);
}

Matrix graph_embeddings(const ModelParams& params, const GraphBatch& batch) {
    ad::GradContext ctx;
    const BoundParams bound = bind(params, ctx);
    const DiffArray h = encode(ctx.constant(batch.features), batch, bound);
    return project(h, batch, bound).graph_z.value();
}

Matrix pooled_encoder_embeddings(const ModelParams& params, const GraphBatch& batch) {
    ad::GradContext ctx;
    const BoundParams bound = bind(params, ctx);
    const DiffArray h = encode(ctx.constant(batch.features), batch, bound);
    return ad::segment_sum(h, batch.segments, batch.graph_count).value();
}

Matrix node_embeddings(const ModelParams& params, const GraphBatch& batch) {
    ad::GradContext ctx;
    const BoundParams bound = bind(params, ctx);
    const DiffArray h = encode(ctx.constant(batch.features), batch, bound);
    return project(h, batch, bound).node_z.value();
}

}  // namespace localgcl
