#include "localgcl/trainer.hpp"

#include "localgcl/errors.hpp"

#include "json.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <sstream>

namespace localgcl {

namespace fs = std::filesystem;
using ad::DiffArray;

void TrainConfig::validate() const {
    if (epochs < 1) throw ConfigError("train.epochs must be >= 1");
    if (batch_size < 2) throw ConfigError("train.batch_size must be >= 2 (contrastive loss needs negatives)");
    if (!(lr > 0.0)) throw ConfigError("train.lr must be > 0");
    if (!(contrastive.tau > 0.0)) throw ConfigError("tau must be > 0");
    if (!(mask_rate > 0.0 && mask_rate <= 1.0)) throw ConfigError("mask.rate must be in (0,1]");
    if (max_degree < 1) throw ConfigError("data.max_degree must be >= 1");
    if (dims.hidden_dim < 1 || dims.proj_dim < 1 || dims.layers < 1)
        throw ConfigError("model dims must be >= 1");
    augment.validate();
    schedule.validate();
}

GraphDataset load_dataset(const TrainConfig& cfg) {
    GraphDataset ds = parse_tudataset(cfg.data_root / cfg.dataset, cfg.dataset);
    if (cfg.degree_features) return synthesize_degree_features(std::move(ds), cfg.max_degree);
    if (ds.feature_dim == 0)
        throw ConfigError("dataset " + cfg.dataset +
                          " has no node attributes; set data.degree_features = true");
    return ds;
}

// ---------------------------------------------------------------------------
// One optimization step

BatchViews make_views(const GraphDataset& ds, std::span<const int> ids, const TrainConfig& cfg, int epoch) {
    std::vector<Graph> originals, augmented;
    originals.reserve(ids.size());
    augmented.reserve(ids.size());
    std::vector<std::vector<int>> masked_local;
    masked_local.reserve(ids.size());
    for (int id : ids) {
        const Graph& g = ds.graphs.at(static_cast<std::size_t>(id));
        Rng rng(derive_seed(cfg.seed, {static_cast<std::uint64_t>(epoch), static_cast<std::uint64_t>(id), 2}));
        const AugmentationKind kind = sample_augmentation(cfg.augment, rng);
        augmented.push_back(apply_augmentation(g, kind, rng));
        masked_local.push_back(choose_mask_nodes(g.num_nodes, cfg.mask_rate, rng));
        originals.push_back(g);
    }
    BatchViews views{batch(originals), batch(augmented), {}};
    for (std::size_t i = 0; i < ids.size(); ++i)
        for (int v : masked_local[i]) views.masked_rows.push_back(views.original.node_offsets[i] + v);
    return views;
}

StepResult loss_and_gradients(const ModelParams& params, const BatchViews& views, const TrainConfig& cfg,
                              double lambda) {
    ad::GradContext ctx;
    const BoundParams bound = bind(params, ctx);
    const GraphBatch& orig = views.original;
    const Eigen::Index n = orig.total_nodes();

    const DiffArray x = ctx.constant(orig.features);
    const DiffArray z = project(encode(x, orig, bound), orig, bound).graph_z;
    const DiffArray z_hat =
        project(encode(ctx.constant(views.augmented.features), views.augmented, bound), views.augmented, bound).graph_z;

    // Masked view: masked rows take the (learnable) mask token.
    Matrix kept = orig.features;
    Matrix indicator = Matrix::Zero(n, 1);
    for (int r : views.masked_rows) {
        kept.row(r).setZero();
        indicator(r, 0) = 1.0;
    }
    const DiffArray x_masked =
        ad::add(ctx.constant(std::move(kept)), ad::matmul(ctx.constant(std::move(indicator)), bound.mask_token));
    const DiffArray z_tilde = project(encode(x_masked, orig, bound), orig, bound).node_z;
    const DiffArray x_recon = decode(z_tilde, bound);

    const DiffArray l_cl = nt_xent(z, z_hat, cfg.contrastive);
    const DiffArray l_mm = recon_mse(x, x_recon, orig, views.masked_rows, cfg.recon_masked_only);
    const DiffArray total = combined_loss(l_cl, l_mm, lambda);

    StepResult result;
    result.l_cl = l_cl.scalar();
    result.l_mm = l_mm.scalar();
    result.l_total = total.scalar();
    result.z = z.value();
    result.z_hat = z_hat.value();
    if (std::isfinite(result.l_total)) result.grads = collect_gradients(bound, ctx.backward(total));
    return result;
}

std::vector<std::vector<int>> epoch_batches(int num_graphs, const TrainConfig& cfg, int epoch) {
    if (num_graphs < 2) throw ConfigError("training needs at least 2 graphs");
    std::vector<int> order(static_cast<std::size_t>(num_graphs));
    std::iota(order.begin(), order.end(), 0);
    Rng rng(derive_seed(cfg.seed, {static_cast<std::uint64_t>(epoch), 1}));
    std::shuffle(order.begin(), order.end(), rng);

    std::vector<std::vector<int>> batches;
    for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(cfg.batch_size)) {
        const std::size_t stop = std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
        std::vector<int> chunk(order.begin() + static_cast<std::ptrdiff_t>(start),
                               order.begin() + static_cast<std::ptrdiff_t>(stop));
        if (chunk.size() < 2 && !batches.empty())
            batches.back().insert(batches.back().end(), chunk.begin(), chunk.end());
        else
            batches.push_back(std::move(chunk));
    }
    return batches;
}

// ---------------------------------------------------------------------------
// Training loop

TrainResult train(const TrainConfig& cfg, const GraphDataset& ds, const EpochCallback& on_epoch) {
    cfg.validate();
    if (ds.feature_dim <= 0) throw ConfigError("dataset has feature dimension 0; synthesize degree features first");
    if (ds.graphs.size() < 2) throw ConfigError("training needs at least 2 graphs");

    ModelDims dims = cfg.dims;
    dims.input_dim = ds.feature_dim;
    TrainResult result{init_params(dims, cfg.seed), {}};

    auto named = result.params.named();
    std::vector<Matrix*> param_ptrs;
    for (auto& [name, ptr] : named) param_ptrs.push_back(ptr);

    ad::AdamState adam;
    adam.lr = cfg.lr;

    const int num_graphs = static_cast<int>(ds.graphs.size());
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        const auto started = std::chrono::steady_clock::now();
        const double lambda = lambda_at(cfg.schedule, epoch, cfg.epochs);
        double sum_cl = 0.0, sum_mm = 0.0;
        const auto batches = epoch_batches(num_graphs, cfg, epoch);
        for (const auto& ids : batches) {
            const BatchViews views = make_views(ds, ids, cfg, epoch);
            StepResult step = loss_and_gradients(result.params, views, cfg, lambda);
            if (!std::isfinite(step.l_cl) || !std::isfinite(step.l_mm) || !std::isfinite(step.l_total))
                throw DivergedError(epoch, "non-finite loss (l_cl=" + std::to_string(step.l_cl) +
                                               ", l_mm=" + std::to_string(step.l_mm) + ")");
            ad::adam_step(param_ptrs, step.grads, adam);
            sum_cl += step.l_cl;
            sum_mm += step.l_mm;
        }
        MetricsRecord rec;
        rec.epoch = epoch;
        rec.lambda = lambda;
        rec.l_cl = sum_cl / static_cast<double>(batches.size());
        rec.l_mm = sum_mm / static_cast<double>(batches.size());
        rec.l_total = combined_loss(rec.l_cl, rec.l_mm, lambda);
        rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
        result.metrics.push_back(rec);
        if (on_epoch) on_epoch(rec);
    }
    return result;
}

TrainResult train(const TrainConfig& cfg) {
    cfg.validate();
    const GraphDataset ds = load_dataset(cfg);
    TrainResult result = train(cfg, ds);
    if (!cfg.output_dir.empty()) {
        fs::create_directories(cfg.output_dir);
        std::ofstream(cfg.output_dir / "metrics.jsonl", std::ios::binary)
            << metrics_to_jsonl(result.metrics, cfg.log_wall_time);
        save_checkpoint(result.params, cfg.output_dir / "checkpoint.txt");
    }
    return result;
}

// ---------------------------------------------------------------------------
// Checkpoints
//
//   localgcl-checkpoint v1
//   backbone gin
//   dims <input> <hidden> <proj> <layers>
//   params <count>
//   param <name> <rows> <cols>
//   <hexfloat> <decimal>        one line per value, row-major
//   ...
//   end

namespace {

constexpr const char* kMagic = "localgcl-checkpoint";

std::string hex_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%a", v);
    return buf;
}

std::string dec_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::string checkpoint_to_string(const ModelParams& params) {
    std::ostringstream os;
    const ModelDims& d = params.dims;
    os << kMagic << " v" << kCheckpointVersion << '\n';
    os << "backbone " << to_string(d.backbone) << '\n';
    os << "dims " << d.input_dim << ' ' << d.hidden_dim << ' ' << d.proj_dim << ' ' << d.layers << '\n';
    const auto named = params.named();
    os << "params " << named.size() << '\n';
    for (const auto& [name, m] : named) {
        os << "param " << name << ' ' << m->rows() << ' ' << m->cols() << '\n';
        for (Eigen::Index i = 0; i < m->size(); ++i) {
            const double v = m->data()[i];
            os << hex_double(v) << ' ' << dec_double(v) << '\n';
        }
    }
    os << "end\n";
    return os.str();
}

void save_checkpoint(const ModelParams& params, const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write checkpoint " + path.string());
    out << checkpoint_to_string(params);
}

ModelParams checkpoint_from_string(const std::string& text, const std::optional<ModelDims>& expected) {
    std::istringstream in(text);
    std::string line;
    long line_no = 0;
    auto next = [&](const char* what) -> std::istringstream {
        if (!std::getline(in, line)) throw CorruptCheckpoint(std::string("truncated: missing ") + what);
        ++line_no;
        return std::istringstream(line);
    };
    auto fail = [&](const std::string& msg) -> CorruptCheckpoint {
        return CorruptCheckpoint("line " + std::to_string(line_no) + ": " + msg);
    };

    {
        auto ls = next("header");
        std::string magic, version;
        ls >> magic >> version;
        if (magic != kMagic) throw fail("not a localgcl checkpoint");
        if (version != "v" + std::to_string(kCheckpointVersion))
            throw UnsupportedVersion("checkpoint version '" + version + "', expected v" +
                                     std::to_string(kCheckpointVersion));
    }
    ModelDims dims;
    {
        auto ls = next("backbone");
        std::string key, value;
        ls >> key >> value;
        if (key != "backbone") throw fail("expected backbone");
        try {
            dims.backbone = parse_backbone(value);
        } catch (const ConfigError&) {
            throw fail("unknown backbone " + value);
        }
    }
    {
        auto ls = next("dims");
        std::string key;
        ls >> key >> dims.input_dim >> dims.hidden_dim >> dims.proj_dim >> dims.layers;
        if (key != "dims" || ls.fail() || dims.input_dim < 1 || dims.hidden_dim < 1 || dims.proj_dim < 1 ||
            dims.layers < 1)
            throw fail("bad dims line");
    }
    if (expected) {
        ModelDims want = *expected;
        if (!(want == dims))
            throw CorruptCheckpoint("checkpoint dims (" + std::to_string(dims.input_dim) + "," +
                                    std::to_string(dims.hidden_dim) + "," + std::to_string(dims.proj_dim) + "," +
                                    std::to_string(dims.layers) + "," + to_string(dims.backbone) +
                                    ") do not match the configured model");
    }

    // Shapes come from a freshly initialized model with the same dims.
    ModelParams params = init_params(dims, 0);
    auto named = params.named();
    {
        auto ls = next("params");
        std::string key;
        std::size_t count = 0;
        ls >> key >> count;
        if (key != "params" || ls.fail()) throw fail("expected params count");
        if (count != named.size())
            throw fail("expected " + std::to_string(named.size()) + " params, header says " + std::to_string(count));
    }
    for (auto& [name, m] : named) {
        auto ls = next("param header");
        std::string key, got_name;
        Eigen::Index rows = -1, cols = -1;
        ls >> key >> got_name >> rows >> cols;
        if (key != "param" || got_name != name) throw fail("expected param " + name);
        if (rows != m->rows() || cols != m->cols())
            throw fail("param " + name + " has shape (" + std::to_string(rows) + "," + std::to_string(cols) +
                       "), expected (" + std::to_string(m->rows()) + "," + std::to_string(m->cols()) + ")");
        for (Eigen::Index i = 0; i < m->size(); ++i) {
            next("value");
            const std::string token = line.substr(0, line.find(' '));
            char* end = nullptr;
            const double v = std::strtod(token.c_str(), &end);
            if (token.empty() || end != token.c_str() + token.size() || !std::isfinite(v))
                throw fail("bad value '" + token + "' in " + name);
            m->data()[i] = v;
        }
    }
    next("end");
    if (line != "end") throw fail("expected end marker");
    return params;
}

ModelParams load_checkpoint(const fs::path& path, const std::optional<ModelDims>& expected) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MissingFile(path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return checkpoint_from_string(buf.str(), expected);
}

// ---------------------------------------------------------------------------
// Metrics log

std::string metrics_to_jsonl(std::span<const MetricsRecord> records, bool include_wall_time) {
    std::string out;
    for (const auto& r : records) {
        nlohmann::ordered_json j;
        j["epoch"] = r.epoch;
        j["lambda"] = r.lambda;
        j["l_cl"] = r.l_cl;
        j["l_mm"] = r.l_mm;
        j["l_total"] = r.l_total;
        if (include_wall_time) j["wall_ms"] = r.wall_ms;
        out += j.dump();
        out += '\n';
    }
    return out;
}

std::vector<MetricsRecord> metrics_from_jsonl(const std::string& text) {
    std::vector<MetricsRecord> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto j = nlohmann::json::parse(line);
        MetricsRecord r;
        r.epoch = j.at("epoch").get<int>();
        r.lambda = j.at("lambda").get<double>();
        r.l_cl = j.at("l_cl").get<double>();
        r.l_mm = j.at("l_mm").get<double>();
        r.l_total = j.at("l_total").get<double>();
        r.wall_ms = j.value("wall_ms", 0.0);
        out.push_back(r);
    }
    return out;
}

}  // namespace localgcl
