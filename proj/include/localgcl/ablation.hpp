#pragma once

#include "localgcl/eval.hpp"
#include "localgcl/trainer.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace localgcl {

/// One trained-and-probed configuration, repeated over several seeds.
struct StrategyResult {
    std::string name;            // e.g. "0.3" or "incremental(0.1,0.9)"
    LambdaSchedule schedule;
    std::vector<std::uint64_t> seeds;
    std::vector<double> seed_accuracy;  // k-fold mean accuracy per seed
    double mean = 0.0;
    double std = 0.0;                   // population std over seeds
};

struct SweepOptions {
    std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4};
    int k = 10;
    int jobs = 1;
    Representation representation = Representation::Encoder;
    /// Progress hook, called once per finished (strategy, seed) run.
    std::function<void(const std::string&, std::uint64_t, double)> on_run;
};

/// Trains with `schedule` for every seed (training seed = probe seed) and
/// probes the pooled embeddings. Runs are independent and use `jobs` workers.
std::vector<StrategyResult> evaluate_strategies(const TrainConfig& base, const GraphDataset& ds,
                                                const std::vector<std::pair<std::string, LambdaSchedule>>& strategies,
                                                const SweepOptions& opts);

/// Static lambda in {0.0, 0.1, ..., 1.0}.
std::vector<std::pair<std::string, LambdaSchedule>> static_sweep_strategies();

/// Formats `v` with a fixed number of decimals, '.' separator.
std::string fixed(double v, int decimals);

/// "lambda,mean_acc,std" rows.
std::string static_sweep_csv(const std::vector<StrategyResult>& rows);
/// "strategy,mean_acc,std" rows.
std::string strategy_csv(const std::vector<StrategyResult>& rows);
/// Long format "strategy,seed,acc".
std::string per_seed_csv(const std::vector<StrategyResult>& rows);

}  // namespace localgcl
