#include "localgcl/objective.hpp"

#include "localgcl/errors.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace localgcl {

using ad::DiffArray;

namespace {

void check_unit(double v, const char* what) {
    if (!(v >= 0.0 && v <= 1.0))
        throw InvalidLambda(std::string(what) + " = " + std::to_string(v) + " outside [0,1]");
}

}  // namespace

std::string to_string(LambdaSchedule::Kind kind) {
    switch (kind) {
        case LambdaSchedule::Kind::Static: return "static";
        case LambdaSchedule::Kind::Incremental: return "incremental";
        case LambdaSchedule::Kind::Decremental: return "decremental";
    }
    return "?";
}

LambdaSchedule::Kind parse_lambda_kind(const std::string& s) {
    if (s == "static") return LambdaSchedule::Kind::Static;
    if (s == "incremental") return LambdaSchedule::Kind::Incremental;
    if (s == "decremental") return LambdaSchedule::Kind::Decremental;
    throw ConfigError("unknown lambda.kind '" + s + "'");
}

void LambdaSchedule::validate() const {
    check_unit(start, "lambda.start");
    check_unit(end, "lambda.end");
    if (kind == Kind::Incremental && start > end)
        throw InvalidLambda("incremental schedule needs start <= end");
    if (kind == Kind::Decremental && start < end)
        throw InvalidLambda("decremental schedule needs start >= end");
}

std::string LambdaSchedule::describe() const {
    std::ostringstream os;
    if (kind == Kind::Static)
        os << "static(" << start << ")";
    else
        os << to_string(kind) << "(" << start << "," << end << ")";
    return os.str();
}

double cosine_sim(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw ShapeError("cosine_sim: dimension mismatch");
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (std::sqrt(na) < 1e-12 || std::sqrt(nb) < 1e-12) return 0.0;
    return dot / std::sqrt(na * nb);
}

DiffArray nt_xent(const DiffArray& z, const DiffArray& z_hat, const ContrastiveConfig& cfg) {
    if (!(cfg.tau > 0.0)) throw ConfigError("tau must be > 0");
    if (z.rows() != z_hat.rows() || z.cols() != z_hat.cols())
        throw ShapeError("nt_xent: views have different shapes");
    const Eigen::Index n = z.rows();
    if (n < 2) throw NeedsNegatives("nt_xent needs at least 2 graphs per batch, got " + std::to_string(n));
    auto& ctx = *z.context();

    const DiffArray zn = ad::row_l2_normalize(z);
    const DiffArray zhn = ad::row_l2_normalize(z_hat);
    const DiffArray logits = ad::scale(ad::matmul(zn, ad::transpose(zhn)), 1.0 / cfg.tau);  // n x n
    const DiffArray positive = ad::scale(ad::row_sum(ad::mul(zn, zhn)), 1.0 / cfg.tau);    // n x 1

    // Row-wise shift by a constant max; the log-sum-exp gradient does not depend on it.
    Matrix keep = Matrix::Ones(n, n);
    if (!cfg.include_positive_in_denominator) keep.diagonal().setZero();
    const Matrix& lv = logits.value();
    Matrix shift(n, 1);
    for (Eigen::Index i = 0; i < n; ++i) {
        double m = -std::numeric_limits<double>::infinity();
        for (Eigen::Index j = 0; j < n; ++j)
            if (keep(i, j) != 0.0) m = std::max(m, lv(i, j));
        shift(i, 0) = m;
    }
    const DiffArray shift_c = ctx.constant(shift);
    const DiffArray shifted = ad::sub(logits, ad::broadcast_col(shift_c, n));
    const DiffArray denom = ad::row_sum(ad::mul(ad::exp(shifted), ctx.constant(std::move(keep))));
    const DiffArray log_denom = ad::add(ad::log(denom), shift_c);
    return ad::sum_all(ad::sub(log_denom, positive));
}

DiffArray recon_mse(const DiffArray& x, const DiffArray& x_recon, const GraphBatch& batch,
                    std::span<const int> masked_rows, bool masked_only) {
    if (x.rows() != x_recon.rows() || x.cols() != x_recon.cols())
        throw ShapeError("recon_mse: target and reconstruction shapes differ");
    if (x.rows() != batch.total_nodes()) throw ShapeError("recon_mse: row count does not match batch");
    if (batch.graph_count < 1) throw ShapeError("recon_mse: empty batch");
    DiffArray diff = ad::sub(x, x_recon);
    if (masked_only) {
        Matrix row_mask = Matrix::Zero(x.rows(), x.cols());
        for (int r : masked_rows) {
            if (r < 0 || r >= x.rows()) throw ShapeError("recon_mse: masked row out of range");
            row_mask.row(r).setOnes();
        }
        diff = ad::mul(diff, x.context()->constant(std::move(row_mask)));
    }
    return ad::scale(ad::sum_all(ad::mul(diff, diff)), 1.0 / batch.graph_count);
}

double combined_loss(double l_cl, double l_mm, double lambda) {
    check_unit(lambda, "lambda");
    return (1.0 - lambda) * l_cl + lambda * l_mm;
}

DiffArray combined_loss(const DiffArray& l_cl, const DiffArray& l_mm, double lambda) {
    check_unit(lambda, "lambda");
    return ad::add(ad::scale(l_cl, 1.0 - lambda), ad::scale(l_mm, lambda));
}

double lambda_at(const LambdaSchedule& schedule, int epoch, int total_epochs) {
    if (total_epochs < 1 || epoch < 0 || epoch >= total_epochs)
        throw ConfigError("lambda_at: epoch " + std::to_string(epoch) + " outside [0," +
                          std::to_string(total_epochs) + ")");
    if (schedule.kind == LambdaSchedule::Kind::Static || total_epochs == 1) return schedule.start;
    const double progress = static_cast<double>(epoch) / static_cast<double>(total_epochs - 1);
    return schedule.start + (schedule.end - schedule.start) * progress;
}

}  // namespace localgcl
