#pragma once

#include "localgcl/common.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace localgcl::ad {

class GradContext;

/// Handle to a dense 2-D array recorded on a GradContext tape.
///
/// Cheap to copy. The referenced value lives in the context and is valid for
/// the context's lifetime.
class DiffArray {
public:
    DiffArray() = default;

    const Matrix& value() const;
    Eigen::Index rows() const { return value().rows(); }
    Eigen::Index cols() const { return value().cols(); }
    std::size_t id() const noexcept { return id_; }
    GradContext* context() const noexcept { return ctx_; }
    bool valid() const noexcept { return ctx_ != nullptr; }

    /// Value of a (1,1) array.
    double scalar() const;

private:
    friend class GradContext;
    DiffArray(GradContext* ctx, std::size_t id) : ctx_(ctx), id_(id) {}

    GradContext* ctx_ = nullptr;
    std::size_t id_ = 0;
};

/// Result of a backward pass: one gradient per recorded node.
class Gradients {
public:
    /// Gradient of the output w.r.t. `x`; zeros when `x` is off every path.
    Matrix of(const DiffArray& x) const;

private:
    friend class GradContext;
    std::vector<Matrix> grads_;
    std::vector<Eigen::Index> rows_, cols_;
};

/// Define-by-run tape. Nodes are appended in creation order, which is a
/// topological order, and visited once each in reverse by backward().
class GradContext {
public:
    /// Accumulates `g` (same shape as the node output) into parent gradients.
    using BackwardFn = std::function<void(const Matrix& g, std::vector<Matrix>& grads)>;

    GradContext() = default;
    GradContext(const GradContext&) = delete;
    GradContext& operator=(const GradContext&) = delete;

    /// Differentiable input (parameter or probe point).
    DiffArray leaf(Matrix value);
    /// Input that never receives a gradient.
    DiffArray constant(Matrix value);

    /// Reverse sweep from a (1,1) output. Throws NotScalar otherwise.
    Gradients backward(const DiffArray& output) const;

    std::size_t size() const noexcept { return nodes_.size(); }
    const Matrix& value(std::size_t id) const { return nodes_[id].value; }
    bool requires_grad(std::size_t id) const { return nodes_[id].requires_grad; }

    /// Records an operation result. Used by the primitive implementations.
    DiffArray record(Matrix value, std::span<const DiffArray> parents, BackwardFn backward);

    /// Throws ShapeError naming `where` if any recorded value is non-finite.
    void check_finite(const char* where) const;

private:
    struct Node {
        Matrix value;
        BackwardFn backward;
        bool requires_grad = false;
    };
    std::vector<Node> nodes_;
};

// Primitive set. Every primitive registers its backward rule; shape
// violations throw ShapeError naming the primitive.

DiffArray matmul(const DiffArray& a, const DiffArray& b);
/// Elementwise a + b; `b` may also be a (1, cols) row broadcast over a's rows.
DiffArray add(const DiffArray& a, const DiffArray& b);
DiffArray mul(const DiffArray& a, const DiffArray& b);
DiffArray scale(const DiffArray& a, double s);
DiffArray relu(const DiffArray& a);
DiffArray exp(const DiffArray& a);
DiffArray log(const DiffArray& a);
DiffArray sum_all(const DiffArray& a);
DiffArray mean_all(const DiffArray& a);
/// x / ||x|| per row; rows with norm below 1e-12 map to zero with zero gradient.
DiffArray row_l2_normalize(const DiffArray& a);
DiffArray concat_rows(std::span<const DiffArray> parts);
/// out[s] = sum of rows r with segments[r] == s. `segments` must be non-decreasing.
DiffArray segment_sum(const DiffArray& values, std::span<const int> segments, int num_segments);
/// out[i] = values[indices[i]].
DiffArray gather_rows(const DiffArray& values, std::span<const int> indices);
DiffArray transpose(const DiffArray& a);

// Composites built only from primitives.

inline DiffArray sub(const DiffArray& a, const DiffArray& b) { return add(a, scale(b, -1.0)); }
/// Row sums as a (rows, 1) column.
DiffArray row_sum(const DiffArray& a);
/// (rows, 1) column repeated across `cols` columns.
DiffArray broadcast_col(const DiffArray& col, Eigen::Index cols);

/// Standard Adam with bias correction.
struct AdamState {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    long step = 0;
    std::vector<Matrix> m;
    std::vector<Matrix> v;
};

/// Updates `params` in place from `grads` (parallel lists). Moment buffers are
/// allocated on first use; shape disagreement throws ShapeError.
void adam_step(std::span<Matrix* const> params, std::span<const Matrix> grads, AdamState& state);

}  // namespace localgcl::ad
