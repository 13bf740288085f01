#pragma once

#include "localgcl/augment.hpp"
#include "localgcl/graph.hpp"
#include "localgcl/model.hpp"
#include "localgcl/objective.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace localgcl {

/// Free parameters of one training run.
struct TrainConfig {
    std::filesystem::path data_root = "data";
    std::string dataset = "MUTAG";
    bool degree_features = false;
    int max_degree = 10;

    ModelDims dims;  // input_dim is filled from the dataset
    AugmentationSet augment;
    double mask_rate = 0.5;
    ContrastiveConfig contrastive;
    LambdaSchedule schedule;
    bool recon_masked_only = false;

    int epochs = 100;
    int batch_size = 32;
    double lr = 1e-3;
    std::uint64_t seed = 0;
    std::filesystem::path output_dir;
    bool log_wall_time = false;

    /// Throws ConfigError (or InvalidLambda) on the first violated constraint.
    void validate() const;
};

struct MetricsRecord {
    int epoch = 0;
    double lambda = 0.0;
    double l_cl = 0.0;
    double l_mm = 0.0;
    double l_total = 0.0;
    double wall_ms = 0.0;
};

/// Augmented and masked views of one batch.
struct BatchViews {
    GraphBatch original;
    GraphBatch augmented;
    std::vector<int> masked_rows;  // global node indices into `original`
};

/// Builds the views for graphs `ids` of `ds`. Each graph draws from its own
/// stream derived from (seed, epoch, graph id), so views do not depend on
/// batch composition.
BatchViews make_views(const GraphDataset& ds, std::span<const int> ids, const TrainConfig& cfg,
                      int epoch);

struct StepResult {
    double l_cl = 0.0;
    double l_mm = 0.0;
    double l_total = 0.0;
    std::vector<Matrix> grads;  // ordered like ModelParams::named()
    Matrix z, z_hat;            // pooled projected embeddings of both views
};

/// Forward pass of both objectives and the gradient of their lambda mix.
StepResult loss_and_gradients(const ModelParams& params, const BatchViews& views, const TrainConfig& cfg,
                              double lambda);

/// Graph ids of each batch in `epoch`: shuffled, chunked by batch_size, a
/// trailing chunk of one graph folded into the previous chunk.
std::vector<std::vector<int>> epoch_batches(int num_graphs, const TrainConfig& cfg, int epoch);

struct TrainResult {
    ModelParams params;
    std::vector<MetricsRecord> metrics;
};

/// Called after every epoch; lets callers stream metrics.
using EpochCallback = std::function<void(const MetricsRecord&)>;

/// Runs the full optimization on an already loaded dataset.
TrainResult train(const TrainConfig& cfg, const GraphDataset& ds, const EpochCallback& on_epoch = {});

/// Loads `cfg.dataset`, trains, and writes metrics.jsonl and checkpoint.txt
/// under `cfg.output_dir`.
TrainResult train(const TrainConfig& cfg);

/// Parses the configured dataset and applies degree features when requested.
/// Throws ConfigError for attribute-less datasets without degree features.
GraphDataset load_dataset(const TrainConfig& cfg);

// Checkpoints -----------------------------------------------------------------

inline constexpr int kCheckpointVersion = 1;

void save_checkpoint(const ModelParams& params, const std::filesystem::path& path);
std::string checkpoint_to_string(const ModelParams& params);

/// Throws UnsupportedVersion, or CorruptCheckpoint on truncation, bad values,
/// or (when `expected` is given) dims differing from `expected`.
ModelParams load_checkpoint(const std::filesystem::path& path,
                            const std::optional<ModelDims>& expected = std::nullopt);
ModelParams checkpoint_from_string(const std::string& text,
                                   const std::optional<ModelDims>& expected = std::nullopt);

// Metrics ---------------------------------------------------------------------

/// One JSON object per line: epoch, lambda, l_cl, l_mm, l_total (+ wall_ms).
std::string metrics_to_jsonl(std::span<const MetricsRecord> records, bool include_wall_time);
std::vector<MetricsRecord> metrics_from_jsonl(const std::string& text);

}  // namespace localgcl
