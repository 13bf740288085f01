#include "localgcl/ablation.hpp"

#include <atomic>
#include <cstdio>
#include <exception>
#include <mutex>
#include <thread>

namespace localgcl {

std::vector<StrategyResult> evaluate_strategies(const TrainConfig& base, const GraphDataset& ds,
                                                const std::vector<std::pair<std::string, LambdaSchedule>>& strategies,
                                                const SweepOptions& opts) {
    std::vector<StrategyResult> results;
    for (const auto& [name, schedule] : strategies) {
        StrategyResult r;
        r.name = name;
        r.schedule = schedule;
        r.seeds = opts.seeds;
        r.seed_accuracy.assign(opts.seeds.size(), 0.0);
        results.push_back(std::move(r));
    }

    const std::vector<int> labels = ds.labels();
    const std::size_t total = strategies.size() * opts.seeds.size();
    std::atomic<std::size_t> next{0};
    std::mutex mutex;
    std::exception_ptr failure;

    auto worker = [&] {
        for (;;) {
            const std::size_t task = next.fetch_add(1);
            if (task >= total) return;
            const std::size_t si = task / opts.seeds.size();
            const std::size_t ki = task % opts.seeds.size();
            try {
                TrainConfig cfg = base;
                cfg.schedule = results[si].schedule;
                cfg.seed = opts.seeds[ki];
                cfg.output_dir.clear();
                const TrainResult trained = train(cfg, ds);
                const EvalReport rep = linear_probe(embed_dataset(trained.params, ds, opts.representation), labels, opts.k, cfg.seed);
                std::lock_guard lock(mutex);
                results[si].seed_accuracy[ki] = rep.mean;
                if (opts.on_run) opts.on_run(results[si].name, cfg.seed, rep.mean);
            } catch (...) {
                std::lock_guard lock(mutex);
                if (!failure) failure = std::current_exception();
                next.store(total);
            }
        }
    };

    const int jobs = std::max(1, opts.jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);

    for (auto& r : results) std::tie(r.mean, r.std) = mean_std(r.seed_accuracy);
    return results;
}

std::vector<std::pair<std::string, LambdaSchedule>> static_sweep_strategies() {
    std::vector<std::pair<std::string, LambdaSchedule>> out;
    for (int i = 0; i <= 10; ++i) out.emplace_back(fixed(i / 10.0, 1), LambdaSchedule::constant(i / 10.0));
    return out;
}

std::string fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

std::string static_sweep_csv(const std::vector<StrategyResult>& rows) {
    std::string out = "lambda,mean_acc,std\n";
    for (const auto& r : rows) out += fixed(r.schedule.start, 1) + "," + fixed(r.mean, 6) + "," + fixed(r.std, 6) + "\n";
    return out;
}

std::string strategy_csv(const std::vector<StrategyResult>& rows) {
    std::string out = "strategy,mean_acc,std\n";
    for (const auto& r : rows) out += r.name + "," + fixed(r.mean, 6) + "," + fixed(r.std, 6) + "\n";
    return out;
}

std::string per_seed_csv(const std::vector<StrategyResult>& rows) {
    std::string out = "strategy,seed,acc\n";
    for (const auto& r : rows)
        for (std::size_t i = 0; i < r.seeds.size(); ++i)
            out += r.name + "," + std::to_string(r.seeds[i]) + "," + fixed(r.seed_accuracy[i], 6) + "\n";
    return out;
}

}  // namespace localgcl
