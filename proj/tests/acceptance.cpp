// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance [--only 1,2,...] [--out DIR]
//
// Exit status is nonzero when a hard criterion fails. Criterion 5 is soft and
// only reports.

#include "support.hpp"

#include "localgcl/ablation.hpp"
#include "localgcl/augment.hpp"
#include "localgcl/cli.hpp"
#include "localgcl/config.hpp"
#include "localgcl/errors.hpp"
#include "localgcl/eval.hpp"
#include "localgcl/model.hpp"
#include "localgcl/objective.hpp"
#include "localgcl/trainer.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <set>
#include <sstream>

using namespace localgcl;
using namespace localgcl::ad;
using namespace testsupport;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Verdict {
    bool pass = true;
    std::string detail;
};

int hard_failures = 0;

void report(int id, const std::string& title, const Verdict& v, bool soft = false) {
    const char* tag = v.pass ? "PASS" : (soft ? "SOFT-FAIL" : "FAIL");
    std::cout << "[" << tag << "] criterion " << id << ": " << title << " | " << v.detail << std::endl;
    if (!v.pass && !soft) ++hard_failures;
}

std::string pct(double v) { return fixed(100.0 * v, 2); }

// ---------------------------------------------------------------------------

using Fn = std::function<DiffArray(GradContext&, const std::vector<DiffArray>&)>;

Verdict gradients() {
    const auto t0 = Clock::now();
    double worst = 0.0;
    int checks = 0;
    auto run = [&](const Fn& f, const std::vector<Matrix>& in) {
        worst = std::max(worst, gradient_error(f, in));
        ++checks;
    };
    const std::vector<int> seg{0, 0, 1, 3, 3, 3};
    const std::vector<int> idx{2, 0, 2, 1, 2};
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        Rng rng(seed);
        Rng wr(seed + 1000);
        const Matrix w34 = random_matrix(3, 4, wr), w32 = random_matrix(3, 2, wr), w42 = random_matrix(4, 2, wr),
                     w52 = random_matrix(5, 2, wr), w43 = random_matrix(4, 3, wr), w33 = random_matrix(3, 3, wr),
                     w41 = random_matrix(4, 1, wr), w53 = random_matrix(5, 3, wr);
        auto wsum = [](GradContext& c, const DiffArray& x, const Matrix& w) { return sum_all(mul(x, c.constant(w))); };
        Matrix kinked = random_matrix(4, 3, rng);
        for (Eigen::Index i = 0; i < kinked.size(); ++i) kinked.data()[i] += kinked.data()[i] >= 0 ? 0.1 : -0.1;

        run([&](auto& c, auto& x) { return wsum(c, matmul(x[0], x[1]), w32); }, {random_matrix(3, 4, rng), random_matrix(4, 2, rng)});
        run([&](auto& c, auto& x) { return wsum(c, add(x[0], x[1]), w34); }, {random_matrix(3, 4, rng), random_matrix(1, 4, rng)});
        run([&](auto& c, auto& x) { return wsum(c, add(x[0], x[1]), w34); }, {random_matrix(3, 4, rng), random_matrix(3, 4, rng)});
        run([&](auto& c, auto& x) { return wsum(c, mul(x[0], x[1]), w34); }, {random_matrix(3, 4, rng), random_matrix(3, 4, rng)});
        run([&](auto& c, auto& x) { return wsum(c, scale(x[0], -1.7), w34); }, {random_matrix(3, 4, rng)});
        run([&](auto& c, auto& x) { return wsum(c, relu(x[0]), w43); }, {kinked});
        run([&](auto& c, auto& x) { return wsum(c, exp(x[0]), w33); }, {random_matrix(3, 3, rng)});
        run([&](auto& c, auto& x) { return wsum(c, log(x[0]), w33); }, {random_matrix(3, 3, rng, 0.5, 2.0)});
        run([&](auto&, auto& x) { return sum_all(mul(x[0], x[0])); }, {random_matrix(3, 3, rng)});
        run([&](auto&, auto& x) { return mean_all(mul(x[0], x[0])); }, {random_matrix(3, 3, rng)});
        run([&](auto& c, auto& x) { return wsum(c, row_l2_normalize(x[0]), w43); }, {random_matrix(4, 3, rng)});
        run([&](auto& c, auto& x) {
                const std::vector<DiffArray> parts{x[0], x[1]};
                return wsum(c, concat_rows(parts), w53);
            },
            {random_matrix(2, 3, rng), random_matrix(3, 3, rng)});
        run([&](auto& c, auto& x) { return wsum(c, segment_sum(x[0], seg, 4), w42); }, {random_matrix(6, 2, rng)});
        run([&](auto& c, auto& x) { return wsum(c, gather_rows(x[0], idx), w52); }, {random_matrix(3, 2, rng)});
        run([&](auto& c, auto& x) { return wsum(c, transpose(x[0]), w52); }, {random_matrix(2, 5, rng)});
        run([&](auto& c, auto& x) { return wsum(c, row_sum(x[0]), w41); }, {random_matrix(4, 3, rng)});
        run([&](auto& c, auto& x) { return wsum(c, broadcast_col(x[0], 3), w43); }, {random_matrix(4, 1, rng)});

        // Composed losses.
        ContrastiveConfig cc;
        const std::vector<Graph> gs{Graph::from_edges(2, {}, Matrix::Zero(2, 3)), Graph::from_edges(3, {}, Matrix::Zero(3, 3)),
                                    Graph::from_edges(1, {}, Matrix::Zero(1, 3))};
        const GraphBatch b = batch(gs);
        const Matrix x = random_matrix(6, 3, rng);
        const Matrix z = random_matrix(5, 4, rng), zh = random_matrix(5, 4, rng), xr = random_matrix(6, 3, rng);
        run([&](auto&, auto& in) { return nt_xent(in[0], in[1], cc); }, {z, zh});
        run([&](auto& c, auto& in) { return recon_mse(c.constant(x), in[0], b); }, {xr});
        run([&](auto& c, auto& in) { return combined_loss(nt_xent(in[0], in[1], cc), recon_mse(c.constant(x), in[2], b), 0.35); },
            {z, zh, xr});
    }
    // The full model loss with respect to every parameter, through the real trainer path.
    {
        GraphDataset ds;
        ds.feature_dim = 3;
        Rng rng(77);
        for (int i = 0; i < 4; ++i) ds.graphs.push_back(random_graph(rng, 3, 7, 3, 0.5));
        TrainConfig cfg;
        cfg.dims = ModelDims{Backbone::Gin, 3, 4, 3, 2};
        ModelParams p = init_params(cfg.dims, 5);
        for (auto& [name, m] : p.named())
            if (!name.ends_with(".weight")) *m = random_matrix(m->rows(), m->cols(), rng, -0.3, 0.3);
        const std::vector<int> ids{0, 1, 2, 3};
        const BatchViews views = make_views(ds, ids, cfg, 0);
        const StepResult step = loss_and_gradients(p, views, cfg, 0.4);
        const double h = 1e-5;
        auto named = p.named();
        for (std::size_t k = 0; k < named.size(); ++k) {
            Matrix& m = *named[k].second;
            for (Eigen::Index i = 0; i < m.size(); ++i) {
                const double orig = m.data()[i];
                m.data()[i] = orig + h;
                const double up = loss_and_gradients(p, views, cfg, 0.4).l_total;
                m.data()[i] = orig - h;
                const double down = loss_and_gradients(p, views, cfg, 0.4).l_total;
                m.data()[i] = orig;
                const double num = (up - down) / (2 * h), a = step.grads[k].data()[i];
                worst = std::max(worst, std::abs(a - num) / std::max({1.0, std::abs(a), std::abs(num)}));
            }
        }
        ++checks;
    }
    const double secs = seconds_since(t0);
    Verdict v;
    v.pass = worst <= 1e-4 && secs < 30.0;
    std::ostringstream os;
    os << checks << " checks over 5 seeds, worst relative error " << std::scientific << std::setprecision(2) << worst
       << std::fixed << ", " << std::setprecision(1) << secs << " s";
    v.detail = os.str();
    return v;
}

Verdict loss_oracles() {
    GradContext ctx;
    ContrastiveConfig c;
    c.tau = 1.0;
    const Matrix same = make_matrix({{1, 0}, {1, 0}}), eye = make_matrix({{1, 0}, {0, 1}});
    const double a = nt_xent(ctx.constant(same), ctx.constant(same), c).scalar();
    const double b = nt_xent(ctx.constant(eye), ctx.constant(eye), c).scalar();
    const double ea = std::abs(a - 2 * std::log(2.0)), eb = std::abs(b - 2 * std::log1p(std::exp(-1.0)));

    const std::vector<Graph> one{Graph::from_edges(2, {}, Matrix::Zero(2, 2))};
    const std::vector<Graph> two{one[0], one[0]};
    const double r1 = recon_mse(ctx.constant(Matrix::Ones(2, 2)), ctx.constant(Matrix::Zero(2, 2)), batch(one)).scalar();
    const double r2 = recon_mse(ctx.constant(Matrix::Ones(4, 2)), ctx.constant(Matrix::Zero(4, 2)), batch(two)).scalar();
    const double r0 = recon_mse(ctx.constant(Matrix::Ones(2, 2)), ctx.constant(Matrix::Ones(2, 2)), batch(one)).scalar();
    const bool combos = combined_loss(2.0, 4.0, 0.0) == 2.0 && combined_loss(2.0, 4.0, 1.0) == 4.0 &&
                        combined_loss(2.0, 4.0, 0.5) == 3.0;

    Verdict v;
    v.pass = ea <= 1e-6 && eb <= 1e-6 && r0 == 0.0 && r1 == 4.0 && r2 == 4.0 && combos;
    std::ostringstream os;
    os << std::setprecision(9) << "nt_xent " << a << " (2 log 2), " << b << " (2 log(1+e^-1)); recon " << r0 << "/" << r1
       << "/" << r2 << "; combined " << (combos ? "exact" : "WRONG");
    v.detail = os.str();
    return v;
}

struct RunSet {
    std::vector<double> acc;
    double mean = 0.0, std = 0.0;
};

// Default configuration on MUTAG with the given schedule.
TrainConfig mutag_config(const Config& cfg, const LambdaSchedule& schedule) {
    TrainConfig tc = cfg.train_config();
    tc.schedule = schedule;
    tc.output_dir.clear();
    return tc;
}

Verdict reproduction(const Config& cfg, const GraphDataset& ds, RunSet& incremental, double& secs_out) {
    const auto t0 = Clock::now();
    const TrainConfig tc = mutag_config(cfg, LambdaSchedule::incremental(0.1, 0.9));
    const Representation rep = parse_representation(cfg.get("eval.representation"));
    const auto labels = ds.labels();
    std::vector<double> projected;
    std::ostringstream seeds;
    for (std::uint64_t s = 0; s < 5; ++s) {
        TrainConfig run = tc;
        run.seed = s;
        const TrainResult r = train(run, ds);
        const double acc = linear_probe(embed_dataset(r.params, ds, rep), labels, 10, s).mean;
        projected.push_back(linear_probe(embed_dataset(r.params, ds, Representation::Projected), labels, 10, s).mean);
        incremental.acc.push_back(acc);
        seeds << (s ? " " : "") << pct(acc);
    }
    std::tie(incremental.mean, incremental.std) = mean_std(incremental.acc);
    secs_out = seconds_since(t0);
    const double proj_mean = mean_std(projected).first;
    Verdict v;
    v.pass = incremental.mean >= 0.80 && secs_out < 600.0;
    std::ostringstream os;
    os << "mean " << pct(incremental.mean) << "±" << pct(incremental.std) << "% over 5 seeds [" << seeds.str()
       << "] (threshold 80.00; " << to_string(rep) << " representation; projection-head representation scores "
       << pct(proj_mean) << "), " << fixed(secs_out, 0) << " s";
    v.detail = os.str();
    return v;
}

Verdict hybrid_beats_pure(const Config& cfg, const GraphDataset& ds, const fs::path& out, std::vector<StrategyResult>& rows) {
    const auto t0 = Clock::now();
    SweepOptions opts;
    opts.representation = parse_representation(cfg.get("eval.representation"));
    rows = evaluate_strategies(mutag_config(cfg, LambdaSchedule::constant(0.0)), ds, static_sweep_strategies(), opts);
    std::ofstream(out / "static_sweep.csv") << static_sweep_csv(rows);
    std::ofstream(out / "static_sweep_seeds.csv") << per_seed_csv(rows);

    std::cout << "    lambda  " ;
    for (auto s : rows.front().seeds) std::cout << "  seed" << s;
    std::cout << "    mean\n";
    for (const auto& r : rows) {
        std::cout << "    " << r.name << "     ";
        for (double a : r.seed_accuracy) std::cout << "  " << pct(a);
        std::cout << "   " << pct(r.mean) << "\n";
    }
    double best_interior = 0.0;
    std::string best_name;
    for (std::size_t i = 1; i + 1 < rows.size(); ++i)
        if (rows[i].mean > best_interior) best_interior = rows[i].mean, best_name = rows[i].name;
    const double pure = std::max(rows.front().mean, rows.back().mean);
    Verdict v;
    v.pass = best_interior >= pure - 0.005;
    v.detail = "best interior lambda " + best_name + " at " + pct(best_interior) + "% vs best pure " + pct(pure) +
               "% (lambda 0: " + pct(rows.front().mean) + ", lambda 1: " + pct(rows.back().mean) + "), " +
               fixed(seconds_since(t0), 0) + " s";
    return v;
}

Verdict incremental_vs_decremental(const Config& cfg, const GraphDataset& ds, const RunSet& incremental) {
    SweepOptions opts;
    opts.representation = parse_representation(cfg.get("eval.representation"));
    const std::vector<std::pair<std::string, LambdaSchedule>> dec{{"decremental", LambdaSchedule::decremental(0.9, 0.1)}};
    const auto rows = evaluate_strategies(mutag_config(cfg, dec[0].second), ds, dec, opts);
    Verdict v;
    v.pass = incremental.mean >= rows[0].mean - 0.005;
    v.detail = "incremental " + pct(incremental.mean) + "% vs decremental " + pct(rows[0].mean) + "% over 5 seeds";
    return v;
}

Verdict determinism(const fs::path& out) {
    const auto a = out / "determinism_a", b = out / "determinism_b";
    fs::remove_all(a);
    fs::remove_all(b);
    auto train_into = [](const fs::path& dir) {
        std::vector<std::string> args{"localgcl", "train", "--seed", "3", "-o", dir.string(), "--set",
                                      "data.root=" LOCALGCL_DATA_DIR};
        std::vector<char*> argv;
        for (auto& s : args) argv.push_back(s.data());
        std::ostringstream sink;
        return cli::run(static_cast<int>(argv.size()), argv.data(), sink, sink);
    };
    Verdict v;
    if (train_into(a) != 0 || train_into(b) != 0) return {false, "cmd_train failed"};
    const bool metrics = read_file(a / "metrics.jsonl") == read_file(b / "metrics.jsonl");
    const bool ckpt = read_file(a / "checkpoint.txt") == read_file(b / "checkpoint.txt");
    v.pass = metrics && ckpt && !read_file(a / "checkpoint.txt").empty();
    v.detail = std::string("metrics ") + (metrics ? "identical" : "DIFFER") + ", checkpoint " +
               (ckpt ? "identical" : "DIFFER") + " (defaults, 100 epochs, seed 3)";
    return v;
}

Verdict augmentation_counts() {
    Rng rng(2024);
    int violations = 0;
    std::string first;
    auto expect = [&](bool ok, const std::string& what) {
        if (!ok && violations++ == 0) first = what;
    };
    std::uniform_real_distribution<double> ratio(0.0, 0.95);
    auto floor_n = [](double r, std::size_t n) { return static_cast<int>(std::floor(r * static_cast<double>(n) + 1e-9)); };
    auto ceil_n = [](double r, std::size_t n) { return static_cast<int>(std::ceil(r * static_cast<double>(n) - 1e-9)); };
    for (int i = 0; i < 1000; ++i) {
        const Graph g = i % 2 ? random_graph(rng, 1, 30) : random_connected_graph(rng, 1, 30);
        const auto n = static_cast<std::size_t>(g.num_nodes);
        const std::size_t m = g.edges.size();
        const double r = ratio(rng);

        const Graph nd = node_dropout(g, r, rng);
        expect(nd.num_nodes == g.num_nodes - std::min(floor_n(r, n), g.num_nodes - 1), "node_dropout count");

        const Graph ep = edge_perturbation(g, r, rng);
        const int removed = floor_n(r, m);
        const long free_pairs = static_cast<long>(n * (n - 1) / 2 - m);
        const long added = std::min<long>(removed, free_pairs);
        expect(static_cast<long>(ep.edges.size()) == static_cast<long>(m) - removed + added, "edge_perturbation count");
        expect(ep.num_nodes == g.num_nodes && ep.features == g.features, "edge_perturbation keeps nodes");
        const std::set<Edge> before(g.edges.begin(), g.edges.end());
        long kept = 0;
        for (const Edge& e : ep.edges) kept += before.count(e);
        expect(kept == static_cast<long>(m) - removed, "edge_perturbation removed edges stay removed");

        const Graph am = attribute_masking(g, r, rng);
        int zero_rows = 0, changed = 0;
        for (int v = 0; v < g.num_nodes; ++v) {
            zero_rows += am.features.row(v).isZero() && !g.features.row(v).isZero();
            changed += am.features.row(v) != g.features.row(v);
        }
        expect(zero_rows == floor_n(r, n) && changed == zero_rows && am.edges == g.edges, "attribute_masking count");

        const double sr = std::max(r, 0.01);
        const Graph sg = subgraph(g, sr, rng);
        const int target = std::clamp(ceil_n(sr, n), 1, g.num_nodes);
        if (i % 2 == 0)
            expect(sg.num_nodes == target, "subgraph count on connected graph");
        else
            expect(sg.num_nodes >= 1 && sg.num_nodes <= target, "subgraph count bound");

        const double mr = std::uniform_real_distribution<double>(0.01, 1.0)(rng);
        const Matrix token = random_matrix(1, g.feature_dim(), rng);
        const MaskedGraph fm = feature_mask(g, mr, token, rng);
        const int want = std::clamp(ceil_n(mr, n), 1, g.num_nodes);
        expect(static_cast<int>(fm.masked.size()) == want, "feature_mask count");
        std::set<int> mset(fm.masked.begin(), fm.masked.end());
        for (int v = 0; v < g.num_nodes; ++v)
            expect(fm.graph.features.row(v) == (mset.count(v) ? token.row(0) : g.features.row(v)), "feature_mask rows");

        for (const Graph* out : {&nd, &ep, &am, &sg, &fm.graph}) {
            try {
                out->validate();
            } catch (const Error&) {
                expect(false, "invalid output graph");
            }
        }
    }
    Verdict v;
    v.pass = violations == 0;
    v.detail = "1000 random graphs x 5 operations, " + std::to_string(violations) + " violations" +
               (violations ? " (first: " + first + ")" : "");
    return v;
}

Verdict parser() {
    std::vector<std::string> problems;
    const auto dir = temp_dir("acc_fixture");
    write_fixture(dir);
    const GraphDataset ds = parse_tudataset(dir, "FIX");
    const auto out = temp_dir("acc_fixture_out");
    write_tudataset(ds, out);
    if (!(parse_tudataset(out, "FIX") == ds)) problems.push_back("fixture round-trip");
    const GraphDataset mutag = parse_tudataset(fs::path(LOCALGCL_DATA_DIR) / "MUTAG", "MUTAG");
    const auto mout = temp_dir("acc_mutag_out");
    write_tudataset(mutag, mout);
    if (!(parse_tudataset(mout, "MUTAG") == mutag)) problems.push_back("MUTAG round-trip");
    if (mutag.graphs.size() != 188 || mutag.num_classes != 2 || mutag.feature_dim != 7) problems.push_back("MUTAG shape");

    struct Bad {
        const char* file;
        const char* text;
        long line;
    };
    const Bad cases[] = {
        {"FIX_A.txt", "1, 2\n2, 1\n3, 5\n", 3},
        {"FIX_graph_indicator.txt", "1\n1\n2\n3\n", 4},
        {"FIX_A.txt", "1, 2\n2, 3\n", 2},
        {"FIX_A.txt", "1, 2\nx, 1\n", 2},
    };
    for (const auto& c : cases) {
        const auto bad = temp_dir("acc_bad");
        write_fixture(bad);
        write_file(bad / c.file, c.text);
        try {
            parse_tudataset(bad, "FIX");
            problems.push_back(std::string(c.file) + " accepted");
        } catch (const MalformedDataset& e) {
            if (e.line() != c.line) problems.push_back(std::string(c.file) + " wrong line");
        }
    }
    const auto missing = temp_dir("acc_missing");
    write_fixture(missing);
    fs::remove(missing / "FIX_graph_labels.txt");
    try {
        parse_tudataset(missing, "FIX");
        problems.push_back("missing file accepted");
    } catch (const MissingFile&) {
    }
    Verdict v;
    v.pass = problems.empty();
    v.detail = problems.empty() ? "fixture and MUTAG round-trip exactly; 4 malformed fixtures report the right line; "
                                  "missing file raises MissingFile"
                                : "problems: " + problems.front();
    return v;
}

Verdict permutation_properties() {
    Rng rng(99);
    double worst_node = 0.0, worst_graph = 0.0;
    for (auto backbone : {Backbone::Gin, Backbone::Gcn}) {
        ModelDims dims{backbone, 5, 16, 8, 3};
        const ModelParams p = init_params(dims, 1);
        for (int i = 0; i < 100; ++i) {
            const Graph g = random_graph(rng, 1, 30, 5);
            const auto perm = random_permutation(g.num_nodes, rng);
            const std::vector<Graph> a{g}, b{permute(g, perm)};
            const Matrix ha = node_embeddings(p, batch(a)), hb = node_embeddings(p, batch(b));
            for (int v = 0; v < g.num_nodes; ++v)
                worst_node = std::max(worst_node, (hb.row(perm[static_cast<std::size_t>(v)]) - ha.row(v)).cwiseAbs().maxCoeff());
            worst_graph = std::max(worst_graph, (graph_embeddings(p, batch(a)) - graph_embeddings(p, batch(b))).cwiseAbs().maxCoeff());
        }
    }
    Verdict v;
    v.pass = worst_node <= 1e-10 && worst_graph <= 1e-10;
    std::ostringstream os;
    os << "100 random graphs per backbone (gin, gcn); max node deviation " << std::scientific << std::setprecision(2)
       << worst_node << ", max pooled deviation " << worst_graph;
    v.detail = os.str();
    return v;
}

}  // namespace

int main(int argc, char** argv) {
    std::set<int> only;
    fs::path out = fs::current_path() / "acceptance_out";
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--only" && i + 1 < argc) {
            std::stringstream ss(argv[++i]);
            std::string tok;
            while (std::getline(ss, tok, ',')) only.insert(std::stoi(tok));
        } else if (a == "--out" && i + 1 < argc) {
            out = argv[++i];
        } else {
            std::cerr << "usage: acceptance [--only 1,2,...] [--out DIR]\n";
            return 2;
        }
    }
    auto want = [&](int id) { return only.empty() || only.count(id); };
    fs::create_directories(out);

    try {
        if (want(1)) report(1, "gradient correctness", gradients());
        if (want(2)) report(2, "loss oracles", loss_oracles());

        if (want(3) || want(4) || want(5)) {
            Config cfg = Config::defaults();
            cfg.set("data.root", LOCALGCL_DATA_DIR);
            const GraphDataset ds = load_dataset(cfg.train_config());
            RunSet incremental;
            double secs = 0.0;
            const Verdict v3 = reproduction(cfg, ds, incremental, secs);
            if (want(3)) report(3, "MUTAG linear-probe accuracy", v3);
            if (want(4)) {
                std::vector<StrategyResult> rows;
                report(4, "hybrid beats pure (static sweep)", hybrid_beats_pure(cfg, ds, out, rows));
            }
            if (want(5)) report(5, "incremental vs decremental (soft)", incremental_vs_decremental(cfg, ds, incremental), true);
        }
        if (want(6)) report(6, "determinism of cmd_train", determinism(out));
        if (want(7)) report(7, "augmentation and masking counts", augmentation_counts());
        if (want(8)) report(8, "TUDataset parser", parser());
        if (want(9)) report(9, "permutation equivariance and invariance", permutation_properties());
    } catch (const std::exception& e) {
        std::cout << "[FAIL] acceptance aborted: " << e.what() << std::endl;
        return 1;
    }
    std::cout << (hard_failures == 0 ? "all hard criteria passed" : std::to_string(hard_failures) + " hard criteria failed")
              << std::endl;
    return hard_failures == 0 ? 0 : 1;
}
