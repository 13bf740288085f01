#pragma once

#include "localgcl/autodiff.hpp"
#include "localgcl/graph.hpp"

#include <span>
#include <string>

namespace localgcl {

struct ContrastiveConfig {
    double tau = 0.5;
    /// Standard NT-Xent: the positive pair also appears in the denominator.
    /// When false, the denominator sums over j != i only.
    bool include_positive_in_denominator = true;
};

/// Mixing weight between the contrastive and reconstruction losses.
struct LambdaSchedule {
    enum class Kind { Static, Incremental, Decremental };

    Kind kind = Kind::Incremental;
    double start = 0.1;  // Static uses `start` as its constant value
    double end = 0.9;

    static LambdaSchedule constant(double value) { return {Kind::Static, value, value}; }
    static LambdaSchedule incremental(double from, double to) { return {Kind::Incremental, from, to}; }
    static LambdaSchedule decremental(double from, double to) { return {Kind::Decremental, from, to}; }

    /// Throws InvalidLambda when a value leaves [0,1] or the direction is wrong.
    void validate() const;
    std::string describe() const;
};

std::string to_string(LambdaSchedule::Kind kind);
LambdaSchedule::Kind parse_lambda_kind(const std::string& s);

/// a.b / (|a| |b|); 0 when either norm is below 1e-12.
double cosine_sim(std::span<const double> a, std::span<const double> b);

/// -sum_i log( exp(sim(z_i, zh_i)/tau) / sum_j exp(sim(z_i, zh_j)/tau) ), computed
/// with a per-row max shift. Rows of `z` are anchors, rows of `z_hat` candidates.
ad::DiffArray nt_xent(const ad::DiffArray& z, const ad::DiffArray& z_hat, const ContrastiveConfig& cfg);

/// Sum over graphs of the squared Frobenius reconstruction error, divided by
/// the number of graphs. With `masked_rows`, only those node rows count.
ad::DiffArray recon_mse(const ad::DiffArray& x, const ad::DiffArray& x_recon, const GraphBatch& batch,
                        std::span<const int> masked_rows = {}, bool masked_only = false);

/// (1 - lambda) l_cl + lambda l_mm.
double combined_loss(double l_cl, double l_mm, double lambda);
ad::DiffArray combined_loss(const ad::DiffArray& l_cl, const ad::DiffArray& l_mm, double lambda);

/// Lambda for `epoch` in [0, total_epochs); linear in the epoch for dynamic kinds.
double lambda_at(const LambdaSchedule& schedule, int epoch, int total_epochs);

}  // namespace localgcl
