#include "localgcl/autodiff.hpp"

#include "localgcl/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace localgcl::ad {

namespace {

std::string shape_str(const Matrix& m) {
    return "(" + std::to_string(m.rows()) + "," + std::to_string(m.cols()) + ")";
}

void accumulate(std::vector<Matrix>& grads, std::size_t id, const Matrix& contribution) {
    Matrix& slot = grads[id];
    if (slot.size() == 0 && (slot.rows() != contribution.rows() || slot.cols() != contribution.cols()))
        slot = contribution;
    else
        slot += contribution;
}

GradContext& context_of(const char* op, std::initializer_list<const DiffArray*> args) {
    GradContext* ctx = nullptr;
    for (const DiffArray* a : args) {
        if (!a->valid()) throw ShapeError(std::string(op) + ": uninitialized operand");
        if (ctx && a->context() != ctx) throw ShapeError(std::string(op) + ": operands from different contexts");
        ctx = a->context();
    }
    return *ctx;
}

}  // namespace

const Matrix& DiffArray::value() const { return ctx_->value(id_); }

double DiffArray::scalar() const {
    const Matrix& v = value();
    if (v.rows() != 1 || v.cols() != 1) throw NotScalar("shape " + shape_str(v));
    return v(0, 0);
}

Matrix Gradients::of(const DiffArray& x) const {
    const std::size_t id = x.id();
    if (id < grads_.size() && grads_[id].size() != 0) return grads_[id];
    return Matrix::Zero(x.rows(), x.cols());
}

DiffArray GradContext::leaf(Matrix value) {
    nodes_.push_back({std::move(value), nullptr, true});
    return {this, nodes_.size() - 1};
}

DiffArray GradContext::constant(Matrix value) {
    nodes_.push_back({std::move(value), nullptr, false});
    return {this, nodes_.size() - 1};
}

DiffArray GradContext::record(Matrix value, std::span<const DiffArray> parents, BackwardFn backward) {
    bool needs = false;
    for (const auto& p : parents) needs = needs || nodes_[p.id()].requires_grad;
    nodes_.push_back({std::move(value), needs ? std::move(backward) : nullptr, needs});
    return {this, nodes_.size() - 1};
}

Gradients GradContext::backward(const DiffArray& output) const {
    if (output.context() != this) throw ShapeError("backward: output belongs to another context");
    const Matrix& out = output.value();
    if (out.rows() != 1 || out.cols() != 1) throw NotScalar("backward needs a (1,1) output, got " + shape_str(out));

    Gradients result;
    result.grads_.resize(nodes_.size());
    result.grads_[output.id()] = Matrix::Ones(1, 1);
    for (std::size_t i = output.id() + 1; i-- > 0;) {
        const Node& node = nodes_[i];
        if (!node.backward || result.grads_[i].size() == 0) continue;
        node.backward(result.grads_[i], result.grads_);
    }
    return result;
}

void GradContext::check_finite(const char* where) const {
    for (std::size_t i = 0; i < nodes_.size(); ++i)
        if (!nodes_[i].value.allFinite())
            throw ShapeError(std::string(where) + ": non-finite value at node " + std::to_string(i));
}

// ---------------------------------------------------------------------------
// Primitives

DiffArray matmul(const DiffArray& a, const DiffArray& b) {
    GradContext& ctx = context_of("matmul", {&a, &b});
    const Matrix& av = a.value();
    const Matrix& bv = b.value();
    if (av.cols() != bv.rows())
        throw ShapeError("matmul: " + shape_str(av) + " x " + shape_str(bv));
    const std::size_t ia = a.id(), ib = b.id();
    const DiffArray parents[] = {a, b};
    return ctx.record(av * bv, parents, [&ctx, ia, ib](const Matrix& g, std::vector<Matrix>& grads) {
        if (ctx.requires_grad(ia)) accumulate(grads, ia, g * ctx.value(ib).transpose());
        if (ctx.requires_grad(ib)) accumulate(grads, ib, ctx.value(ia).transpose() * g);
    });
}

DiffArray add(const DiffArray& a, const DiffArray& b) {
    GradContext& ctx = context_of("add", {&a, &b});
    const Matrix& av = a.value();
    const Matrix& bv = b.value();
    const std::size_t ia = a.id(), ib = b.id();
    const DiffArray parents[] = {a, b};
    if (av.rows() == bv.rows() && av.cols() == bv.cols()) {
        return ctx.record(av + bv, parents, [&ctx, ia, ib](const Matrix& g, std::vector<Matrix>& grads) {
            if (ctx.requires_grad(ia)) accumulate(grads, ia, g);
            if (ctx.requires_grad(ib)) accumulate(grads, ib, g);
        });
    }
    if (bv.rows() == 1 && bv.cols() == av.cols()) {
        Matrix out = av;
        out.rowwise() += bv.row(0);
        return ctx.record(std::move(out), parents, [&ctx, ia, ib](const Matrix& g, std::vector<Matrix>& grads) {
            if (ctx.requires_grad(ia)) accumulate(grads, ia, g);
            if (ctx.requires_grad(ib)) accumulate(grads, ib, g.colwise().sum());
        });
    }
    throw ShapeError("add: " + shape_str(av) + " + " + shape_str(bv));
}

DiffArray mul(const DiffArray& a, const DiffArray& b) {
    GradContext& ctx = context_of("mul", {&a, &b});
    const Matrix& av = a.value();
    const Matrix& bv = b.value();
    if (av.rows() != bv.rows() || av.cols() != bv.cols())
        throw ShapeError("mul: " + shape_str(av) + " * " + shape_str(bv));
    const std::size_t ia = a.id(), ib = b.id();
    const DiffArray parents[] = {a, b};
    return ctx.record(av.cwiseProduct(bv), parents, [&ctx, ia, ib](const Matrix& g, std::vector<Matrix>& grads) {
        if (ctx.requires_grad(ia)) accumulate(grads, ia, g.cwiseProduct(ctx.value(ib)));
        if (ctx.requires_grad(ib)) accumulate(grads, ib, g.cwiseProduct(ctx.value(ia)));
    });
}

DiffArray scale(const DiffArray& a, double s) {
    GradContext& ctx = context_of("scale", {&a});
    const std::size_t ia = a.id();
    const DiffArray parents[] = {a};
    return ctx.record(a.value() * s, parents, [ia, s](const Matrix& g, std::vector<Matrix>& grads) {
        accumulate(grads, ia, g * s);
    });
}

DiffArray relu(const DiffArray& a) {
    GradContext& ctx = context_of("relu", {&a});
    const std::size_t ia = a.id();
    const DiffArray parents[] = {a};
    return ctx.record(a.value().cwiseMax(0.0), parents, [&ctx, ia](const Matrix& g, std::vector<Matrix>& grads) {
        const Matrix& x = ctx.value(ia);
        accumulate(grads, ia, (x.array() > 0.0).select(g, 0.0));
    });
}

DiffArray exp(const DiffArray& a) {
    GradContext& ctx = context_of("exp", {&a});
    const std::size_t ia = a.id();
    const DiffArray parents[] = {a};
    Matrix y = a.value().array().exp().matrix();
    Matrix y_copy = y;
    return ctx.record(std::move(y), parents, [ia, y = std::move(y_copy)](const Matrix& g, std::vector<Matrix>& grads) {
        accumulate(grads, ia, g.cwiseProduct(y));
    });
}

DiffArray log(const DiffArray& a) {
    GradContext& ctx = context_of("log", {&a});
    const std::size_t ia = a.id();
    const DiffArray parents[] = {a};
    return ctx.record(a.value().array().log().matrix(), parents, [&ctx, ia](const Matrix& g, std::vector<Matrix>& grads) {
        accumulate(grads, ia, g.cwiseQuotient(ctx.value(ia)));
    });
}

DiffArray sum_all(const DiffArray& a) {
    GradContext& ctx = context_of("sum_all", {&a});
    const std::size_t ia = a.id();
    const Eigen::Index r = a.rows(), c = a.cols();
    const DiffArray parents[] = {a};
    Matrix out(1, 1);
    out(0, 0) = a.value().sum();
    return ctx.record(std::move(out), parents, [ia, r, c](const Matrix& g, std::vector<Matrix>& grads) {
        accumulate(grads, ia, Matrix::Constant(r, c, g(0, 0)));
    });
}

DiffArray mean_all(const DiffArray& a) {
    GradContext& ctx = context_of("mean_all", {&a});
    const Eigen::Index r = a.rows(), c = a.cols();
    if (r * c == 0) throw ShapeError("mean_all: empty input");
    const std::size_t ia = a.id();
    const DiffArray parents[] = {a};
    Matrix out(1, 1);
    out(0, 0) = a.value().mean();
    const double n = static_cast<double>(r * c);
    return ctx.record(std::move(out), parents, [ia, r, c, n](const Matrix& g, std::vector<Matrix>& grads) {
        accumulate(grads, ia, Matrix::Constant(r, c, g(0, 0) / n));
    });
}

DiffArray row_l2_normalize(const DiffArray& a) {
    constexpr double kMinNorm = 1e-12;
    GradContext& ctx = context_of("row_l2_normalize", {&a});
    const Matrix& x = a.value();
    Vector norms = x.rowwise().norm();
    Matrix y = Matrix::Zero(x.rows(), x.cols());
    for (Eigen::Index r = 0; r < x.rows(); ++r)
        if (norms(r) >= kMinNorm) y.row(r) = x.row(r) / norms(r);
    const std::size_t ia = a.id();
    const DiffArray parents[] = {a};
    Matrix y_copy = y;
    return ctx.record(std::move(y), parents,
                      [ia, norms = std::move(norms), y = std::move(y_copy)](const Matrix& g, std::vector<Matrix>& grads) {
                          Matrix dx = Matrix::Zero(g.rows(), g.cols());
                          for (Eigen::Index r = 0; r < g.rows(); ++r) {
                              if (norms(r) < kMinNorm) continue;
                              const double proj = y.row(r).dot(g.row(r));
                              dx.row(r) = (g.row(r) - proj * y.row(r)) / norms(r);
                          }
                          accumulate(grads, ia, dx);
                      });
}

DiffArray concat_rows(std::span<const DiffArray> parts) {
    if (parts.empty()) throw ShapeError("concat_rows: no inputs");
    GradContext& ctx = context_of("concat_rows", {&parts.front()});
    const Eigen::Index cols = parts.front().cols();
    Eigen::Index total = 0;
    for (const auto& p : parts) {
        context_of("concat_rows", {&parts.front(), &p});
        if (p.cols() != cols)
            throw ShapeError("concat_rows: column mismatch " + std::to_string(p.cols()) + " vs " + std::to_string(cols));
        total += p.rows();
    }
    Matrix out(total, cols);
    std::vector<std::size_t> ids;
    std::vector<Eigen::Index> offsets;
    Eigen::Index off = 0;
    for (const auto& p : parts) {
        out.middleRows(off, p.rows()) = p.value();
        ids.push_back(p.id());
        offsets.push_back(off);
        off += p.rows();
    }
    offsets.push_back(off);
    return ctx.record(std::move(out), parts,
                      [&ctx, ids = std::move(ids), offsets = std::move(offsets)](const Matrix& g, std::vector<Matrix>& grads) {
                          for (std::size_t i = 0; i < ids.size(); ++i)
                              if (ctx.requires_grad(ids[i]))
                                  accumulate(grads, ids[i], g.middleRows(offsets[i], offsets[i + 1] - offsets[i]));
                      });
}

DiffArray segment_sum(const DiffArray& values, std::span<const int> segments, int num_segments) {
    GradContext& ctx = context_of("segment_sum", {&values});
    const Matrix& x = values.value();
    if (static_cast<Eigen::Index>(segments.size()) != x.rows())
        throw ShapeError("segment_sum: " + std::to_string(segments.size()) + " segment ids for " +
                         std::to_string(x.rows()) + " rows");
    for (std::size_t r = 0; r < segments.size(); ++r) {
        if (segments[r] < 0 || segments[r] >= num_segments)
            throw ShapeError("segment_sum: segment id out of range");
        if (r > 0 && segments[r] < segments[r - 1]) throw ShapeError("segment_sum: segments not sorted");
    }
    Matrix out = Matrix::Zero(num_segments, x.cols());
    for (Eigen::Index r = 0; r < x.rows(); ++r) out.row(segments[static_cast<std::size_t>(r)]) += x.row(r);
    const std::size_t ia = values.id();
    const DiffArray parents[] = {values};
    return ctx.record(std::move(out), parents,
                      [ia, seg = std::vector<int>(segments.begin(), segments.end())](const Matrix& g, std::vector<Matrix>& grads) {
                          Matrix dx(static_cast<Eigen::Index>(seg.size()), g.cols());
                          for (std::size_t r = 0; r < seg.size(); ++r) dx.row(static_cast<Eigen::Index>(r)) = g.row(seg[r]);
                          accumulate(grads, ia, dx);
                      });
}

DiffArray gather_rows(const DiffArray& values, std::span<const int> indices) {
    GradContext& ctx = context_of("gather_rows", {&values});
    const Matrix& x = values.value();
    Matrix out(static_cast<Eigen::Index>(indices.size()), x.cols());
    for (std::size_t i = 0; i < indices.size(); ++i) {
        if (indices[i] < 0 || indices[i] >= x.rows()) throw ShapeError("gather_rows: index out of range");
        out.row(static_cast<Eigen::Index>(i)) = x.row(indices[i]);
    }
    const std::size_t ia = values.id();
    const Eigen::Index rows = x.rows();
    const DiffArray parents[] = {values};
    return ctx.record(std::move(out), parents,
                      [ia, rows, idx = std::vector<int>(indices.begin(), indices.end())](const Matrix& g, std::vector<Matrix>& grads) {
                          Matrix dx = Matrix::Zero(rows, g.cols());
                          for (std::size_t i = 0; i < idx.size(); ++i) dx.row(idx[i]) += g.row(static_cast<Eigen::Index>(i));
                          accumulate(grads, ia, dx);
                      });
}

DiffArray transpose(const DiffArray& a) {
    GradContext& ctx = context_of("transpose", {&a});
    const std::size_t ia = a.id();
    const DiffArray parents[] = {a};
    return ctx.record(a.value().transpose(), parents, [ia](const Matrix& g, std::vector<Matrix>& grads) {
        accumulate(grads, ia, g.transpose());
    });
}

DiffArray row_sum(const DiffArray& a) {
    return matmul(a, a.context()->constant(Matrix::Ones(a.cols(), 1)));
}

DiffArray broadcast_col(const DiffArray& col, Eigen::Index cols) {
    if (col.cols() != 1) throw ShapeError("broadcast_col: expected a column, got " + shape_str(col.value()));
    return matmul(col, col.context()->constant(Matrix::Ones(1, cols)));
}

// ---------------------------------------------------------------------------
// Adam

void adam_step(std::span<Matrix* const> params, std::span<const Matrix> grads, AdamState& state) {
    if (params.size() != grads.size())
        throw ShapeError("adam_step: " + std::to_string(params.size()) + " params vs " +
                         std::to_string(grads.size()) + " grads");
    if (state.m.empty()) {
        for (const Matrix* p : params) {
            state.m.push_back(Matrix::Zero(p->rows(), p->cols()));
            state.v.push_back(Matrix::Zero(p->rows(), p->cols()));
        }
    }
    if (state.m.size() != params.size()) throw ShapeError("adam_step: state/parameter count mismatch");
    for (std::size_t i = 0; i < params.size(); ++i) {
        const Matrix& g = grads[i];
        if (g.rows() != params[i]->rows() || g.cols() != params[i]->cols() ||
            state.m[i].rows() != g.rows() || state.m[i].cols() != g.cols())
            throw ShapeError("adam_step: shape mismatch at parameter " + std::to_string(i));
    }

    ++state.step;
    const double t = static_cast<double>(state.step);
    const double bc1 = 1.0 - std::pow(state.beta1, t);
    const double bc2 = 1.0 - std::pow(state.beta2, t);
    for (std::size_t i = 0; i < params.size(); ++i) {
        const Matrix& g = grads[i];
        state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * g;
        state.v[i] = state.beta2 * state.v[i] + (1.0 - state.beta2) * g.cwiseProduct(g);
        const auto m_hat = state.m[i].array() / bc1;
        const auto v_hat = state.v[i].array() / bc2;
        params[i]->array() -= state.lr * m_hat / (v_hat.sqrt() + state.eps);
    }
}

}  // namespace localgcl::ad
