#include "localgcl/cli.hpp"

#include "localgcl/ablation.hpp"
#include "localgcl/config.hpp"
#include "localgcl/errors.hpp"
#include "localgcl/eval.hpp"
#include "localgcl/trainer.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace localgcl::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

int exit_code_for(const std::exception& e) {
    if (const auto* err = dynamic_cast<const Error*>(&e)) {
        switch (err->category()) {
            case ErrorCategory::Config: return kConfigError;
            case ErrorCategory::Data: return kDataError;
            case ErrorCategory::Numeric: return kDiverged;
            case ErrorCategory::Internal: return kFailure;
        }
    }
    if (dynamic_cast<const nlohmann::json::exception*>(&e)) return kDataError;
    return kFailure;
}

namespace {

Config resolve_config(const CommonArgs& args) {
    Config cfg = args.config ? Config::from_file(*args.config) : Config::defaults();
    for (const auto& o : args.overrides) cfg.apply_override(o);
    if (args.seed) cfg.set("seed", std::to_string(*args.seed));
    return cfg;
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << text;
}

json config_json(const Config& cfg) {
    json j = json::object();
    for (const auto& [k, v] : cfg.entries()) j[k] = v;
    return j;
}

std::string percent(double mean, double std) {
    return fixed(100.0 * mean, 2) + "±" + fixed(100.0 * std, 2);
}

/// Loads the configured dataset and checks it against a checkpoint's input dim.
GraphDataset dataset_for(const TrainConfig& tc, const ModelParams& params) {
    GraphDataset ds = load_dataset(tc);
    if (ds.feature_dim != params.dims.input_dim)
        throw ConfigError("dataset " + tc.dataset + " has feature dim " + std::to_string(ds.feature_dim) +
                          " but the checkpoint expects " + std::to_string(params.dims.input_dim));
    return ds;
}

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
    try {
        return fn();
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e);
    }
}

}  // namespace

// ---------------------------------------------------------------------------

int cmd_train(const TrainArgs& args, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        Config cfg = Config::defaults();
        if (args.from_manifest) {
            std::ifstream in(*args.from_manifest);
            if (!in) throw MissingFile(args.from_manifest->string());
            const auto manifest = nlohmann::json::parse(in);
            for (const auto& [k, v] : manifest.at("config").items()) cfg.set(k, v.get<std::string>());
            if (args.common.config) {
                const Config file = Config::from_file(*args.common.config);
                for (const auto& [k, v] : file.entries()) cfg.set(k, v);
            }
            for (const auto& o : args.common.overrides) cfg.apply_override(o);
            if (args.common.seed) cfg.set("seed", std::to_string(*args.common.seed));
        } else {
            cfg = resolve_config(args.common);
        }
        if (args.outdir) cfg.set("output.dir", args.outdir->string());
        cfg.set("data.root", cfg.data_root().string());

        const TrainConfig tc = cfg.train_config();
        const GraphDataset ds = load_dataset(tc);
        const fs::path outdir = tc.output_dir;
        fs::create_directories(outdir);

        json manifest;
        manifest["tool"] = "localgcl";
        manifest["version"] = kToolVersion;
        manifest["command"] = "train";
        manifest["seed"] = tc.seed;
        manifest["started_at"] = utc_timestamp();
        manifest["config"] = config_json(cfg);
        manifest["artifacts"] = {{"manifest", (outdir / "manifest.json").string()},
                                 {"metrics", (outdir / "metrics.jsonl").string()},
                                 {"checkpoint", (outdir / "checkpoint.txt").string()}};
        write_text(outdir / "manifest.json", manifest.dump(2) + "\n");

        out << "training " << tc.dataset << " (" << ds.graphs.size() << " graphs, d=" << ds.feature_dim << ") for "
            << tc.epochs << " epochs, schedule " << tc.schedule.describe() << '\n';
        const int report_every = std::max(1, tc.epochs / 10);
        const TrainResult result = train(tc, ds, [&](const MetricsRecord& r) {
            if (r.epoch % report_every == 0 || r.epoch + 1 == tc.epochs)
                out << "epoch " << std::setw(4) << r.epoch << "  lambda " << fixed(r.lambda, 3) << "  l_cl "
                    << fixed(r.l_cl, 5) << "  l_mm " << fixed(r.l_mm, 5) << "  l_total " << fixed(r.l_total, 5) << '\n';
        });
        write_text(outdir / "metrics.jsonl", metrics_to_jsonl(result.metrics, tc.log_wall_time));
        save_checkpoint(result.params, outdir / "checkpoint.txt");
        out << "wrote " << outdir.string() << '\n';
        return static_cast<int>(kOk);
    });
}

int cmd_eval(const EvalArgs& args, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        Config cfg = resolve_config(args.common);
        if (args.dataset) cfg.set("data.name", *args.dataset);
        const TrainConfig tc = cfg.train_config();
        const int k = args.k.value_or(cfg.get_int("eval.k"));
        const int seeds = args.seeds.value_or(cfg.get_int("eval.seeds"));
        if (k < 2) throw InvalidFoldCount("k must be >= 2, got " + std::to_string(k));
        if (seeds < 1) throw ConfigError("seeds must be >= 1");

        const ModelParams params = load_checkpoint(args.checkpoint);
        const GraphDataset ds = dataset_for(tc, params);
        const Representation rep_kind = parse_representation(cfg.get("eval.representation"));
        const Matrix emb = embed_dataset(params, ds, rep_kind);
        const std::vector<int> labels = ds.labels();

        json reports = json::array();
        std::vector<double> seed_means;
        std::vector<EvalReport> all;
        for (int i = 0; i < seeds; ++i) {
            EvalReport rep = linear_probe(emb, labels, k, tc.seed + static_cast<std::uint64_t>(i));
            rep.dataset = ds.name;
            seed_means.push_back(rep.mean);
            reports.push_back({{"dataset", rep.dataset},
                               {"k", rep.k},
                               {"seed", rep.seed},
                               {"fold_accuracies", rep.fold_accuracies},
                               {"skipped_folds", rep.skipped_folds},
                               {"mean", rep.mean},
                               {"std", rep.std}});
            all.push_back(std::move(rep));
        }
        // Across seeds: spread of the per-seed means; a single seed reports the fold spread.
        const auto [mean, spread] = mean_std(seed_means);
        const double std = seeds > 1 ? spread : all.front().std;

        out << std::left << std::setw(12) << "dataset" << std::setw(8) << "seed" << std::setw(5) << "k"
            << "accuracy(%)\n";
        for (const auto& rep : all)
            out << std::setw(12) << rep.dataset << std::setw(8) << rep.seed << std::setw(5) << rep.k
                << percent(rep.mean, rep.std) << (rep.skipped_folds.empty() ? "" : "  (skipped folds)") << '\n';
        out << ds.name << ' ' << percent(mean, std) << '\n';

        json summary;
        summary["dataset"] = ds.name;
        summary["checkpoint"] = args.checkpoint.string();
        summary["representation"] = to_string(rep_kind);
        summary["k"] = k;
        summary["seeds"] = seeds;
        summary["mean"] = mean;
        summary["std"] = std;
        summary["reports"] = reports;
        const fs::path out_path = args.out.value_or(args.checkpoint.parent_path() / "eval_report.json");
        write_text(out_path, summary.dump(2) + "\n");
        return static_cast<int>(kOk);
    });
}

int cmd_ablate(const AblateArgs& args, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        if (args.mode != "static-sweep" && args.mode != "dynamic-compare")
            throw ConfigError("mode must be static-sweep or dynamic-compare, got '" + args.mode + "'");
        Config cfg = resolve_config(args.common);
        const TrainConfig tc = cfg.train_config();
        const GraphDataset ds = load_dataset(tc);
        const fs::path outdir = args.outdir.value_or(tc.output_dir);

        SweepOptions opts;
        opts.k = cfg.get_int("eval.k");
        opts.jobs = args.jobs;
        opts.representation = parse_representation(cfg.get("eval.representation"));
        const int seeds = args.seeds.value_or(cfg.get_int("eval.seeds"));
        if (seeds < 1) throw ConfigError("seeds must be >= 1");
        opts.seeds.clear();
        for (int i = 0; i < seeds; ++i) opts.seeds.push_back(tc.seed + static_cast<std::uint64_t>(i));
        opts.on_run = [&out](const std::string& name, std::uint64_t seed, double acc) {
            out << "  " << name << " seed " << seed << ": " << fixed(100.0 * acc, 2) << "%\n" << std::flush;
        };

        auto run_sweep = [&] {
            auto rows = evaluate_strategies(tc, ds, static_sweep_strategies(), opts);
            write_text(outdir / "static_sweep.csv", static_sweep_csv(rows));
            write_text(outdir / "static_sweep_seeds.csv", per_seed_csv(rows));
            out << std::left << std::setw(8) << "lambda" << "accuracy(%)\n";
            for (const auto& r : rows) out << std::setw(8) << fixed(r.schedule.start, 1) << percent(r.mean, r.std) << '\n';
            return rows;
        };

        if (args.mode == "static-sweep") {
            run_sweep();
            return static_cast<int>(kOk);
        }

        double best = 0.0;
        if (args.best_static) {
            best = *args.best_static;
        } else {
            const auto rows = run_sweep();
            double best_acc = -1.0;
            for (const auto& r : rows)
                if (r.mean > best_acc) best_acc = r.mean, best = r.schedule.start;
        }
        double lo = 0.1, hi = 0.9;
        if (tc.schedule.kind != LambdaSchedule::Kind::Static) {
            lo = std::min(tc.schedule.start, tc.schedule.end);
            hi = std::max(tc.schedule.start, tc.schedule.end);
        }
        const std::vector<std::pair<std::string, LambdaSchedule>> strategies = {
            {"incremental", LambdaSchedule::incremental(lo, hi)},
            {"decremental", LambdaSchedule::decremental(hi, lo)},
            {"static_" + fixed(best, 1), LambdaSchedule::constant(best)},
        };
        const auto rows = evaluate_strategies(tc, ds, strategies, opts);
        write_text(outdir / "dynamic_compare.csv", strategy_csv(rows));
        write_text(outdir / "dynamic_compare_seeds.csv", per_seed_csv(rows));
        out << std::left << std::setw(14) << "strategy" << "accuracy(%)\n";
        for (const auto& r : rows) out << std::setw(14) << r.name << percent(r.mean, r.std) << '\n';
        return static_cast<int>(kOk);
    });
}

int cmd_probe(const ProbeArgs& args, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        Config cfg = resolve_config(args.common);
        if (args.dataset) cfg.set("data.name", *args.dataset);
        const TrainConfig tc = cfg.train_config();
        const PerturbationSpec spec = cfg.perturbation();

        const ModelParams cl = load_checkpoint(args.checkpoint_cl);
        const ModelParams mm = load_checkpoint(args.checkpoint_mm);
        const GraphDataset ds = dataset_for(tc, cl);
        if (mm.dims.input_dim != cl.dims.input_dim) throw ConfigError("checkpoints have different input dims");

        const ProbeReport rep_cl = probe_embedding_shift(cl, ds, spec, tc.seed);
        const ProbeReport rep_mm = probe_embedding_shift(mm, ds, spec, tc.seed);

        out << std::left << std::setw(8) << "model" << std::setw(12) << "local" << "global\n";
        out << std::setw(8) << "CL" << std::setw(12) << fixed(rep_cl.mean_local, 6) << fixed(rep_cl.mean_global, 6) << '\n';
        out << std::setw(8) << "MM" << std::setw(12) << fixed(rep_mm.mean_local, 6) << fixed(rep_mm.mean_global, 6) << '\n';
        if (rep_cl.skipped_global > 0)
            out << "(" << rep_cl.skipped_global << " graphs too small to rewire were skipped)\n";

        auto to_json = [](const ProbeReport& r, const fs::path& ckpt) {
            return json{{"checkpoint", ckpt.string()},
                        {"mean_local", r.mean_local},
                        {"mean_global", r.mean_global},
                        {"skipped_global", r.skipped_global},
                        {"local_shift", r.local_shift},
                        {"global_shift", r.global_shift}};
        };
        json j;
        j["dataset"] = ds.name;
        j["seed"] = tc.seed;
        j["local_fraction"] = spec.local_fraction;
        j["global_fraction"] = spec.global_fraction;
        j["cl"] = to_json(rep_cl, args.checkpoint_cl);
        j["mm"] = to_json(rep_mm, args.checkpoint_mm);
        const fs::path out_path = args.out.value_or(tc.output_dir / "probe_report.json");
        write_text(out_path, j.dump(2) + "\n");
        return static_cast<int>(kOk);
    });
}

// ---------------------------------------------------------------------------

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Contrastive + masked-reconstruction graph self-supervised learning"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    auto add_common = [](CLI::App* sub, CommonArgs& c) {
        sub->add_option("-c,--config", c.config, "Config file of 'key = value' lines");
        sub->add_option("--set", c.overrides, "Override a config key (key=value), repeatable");
        sub->add_option("--seed", c.seed, "Global seed");
    };

    TrainArgs train_args;
    auto* train_cmd = app.add_subcommand("train", "Train a model");
    add_common(train_cmd, train_args.common);
    train_cmd->add_option("-o,--outdir", train_args.outdir, "Output directory");
    train_cmd->add_option("--from-manifest", train_args.from_manifest, "Re-run the configuration of a manifest.json");

    EvalArgs eval_args;
    auto* eval_cmd = app.add_subcommand("eval", "Linear-probe evaluation of a checkpoint");
    add_common(eval_cmd, eval_args.common);
    eval_cmd->add_option("--checkpoint", eval_args.checkpoint, "Checkpoint file")->required();
    eval_cmd->add_option("--dataset", eval_args.dataset, "Dataset name under the data root");
    eval_cmd->add_option("-k,--folds", eval_args.k, "Fold count");
    eval_cmd->add_option("--seeds", eval_args.seeds, "Number of evaluation seeds");
    eval_cmd->add_option("--out", eval_args.out, "JSON report path");

    AblateArgs ablate_args;
    auto* ablate_cmd = app.add_subcommand("ablate", "Lambda ablations");
    add_common(ablate_cmd, ablate_args.common);
    ablate_cmd->add_option("--mode", ablate_args.mode, "static-sweep or dynamic-compare")->required();
    ablate_cmd->add_option("-j,--jobs", ablate_args.jobs, "Parallel training slots");
    ablate_cmd->add_option("--seeds", ablate_args.seeds, "Number of seeds per strategy");
    ablate_cmd->add_option("--best-static", ablate_args.best_static, "Static lambda for dynamic-compare");
    ablate_cmd->add_option("-o,--outdir", ablate_args.outdir, "Directory for CSV output");

    ProbeArgs probe_args;
    auto* probe_cmd = app.add_subcommand("probe", "Embedding shift under local vs global perturbation");
    add_common(probe_cmd, probe_args.common);
    probe_cmd->add_option("--checkpoint-cl", probe_args.checkpoint_cl, "Contrastive-trained checkpoint")->required();
    probe_cmd->add_option("--checkpoint-mm", probe_args.checkpoint_mm, "Reconstruction-trained checkpoint")->required();
    probe_cmd->add_option("--dataset", probe_args.dataset, "Dataset name under the data root");
    probe_cmd->add_option("--out", probe_args.out, "JSON report path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? static_cast<int>(kOk) : static_cast<int>(kConfigError);
    }

    if (*train_cmd) return cmd_train(train_args, out, err);
    if (*eval_cmd) return cmd_eval(eval_args, out, err);
    if (*ablate_cmd) return cmd_ablate(ablate_args, out, err);
    if (*probe_cmd) return cmd_probe(probe_args, out, err);
    return kConfigError;
}

}  // namespace localgcl::cli
